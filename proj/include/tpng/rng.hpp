#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace tpng {

/** SplitMix64 step. Used for seed derivation and for keyed coin hashing. */
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/**
 * Derive a child seed from a master seed and a fixed key.
 *
 * These constants are part of the reproducibility contract: runs are
 * replayable across versions only if the derivation never changes.
 */
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t key) {
  return splitmix64(splitmix64(master ^ key) ^ 0xd1b54a32d192ed03ULL);
}

namespace stream_key {
// ASCII-derived tags, fixed forever.
constexpr std::uint64_t geometry = 0x67656f6d65747279ULL;     // "geometry"
constexpr std::uint64_t interaction = 0x696e746572616374ULL;  // "interact"
constexpr std::uint64_t scp = 0x7363702d6c617972ULL;          // "scp-layr"
constexpr std::uint64_t thin_sources = 0x7468696e2d737263ULL; // "thin-src"
constexpr std::uint64_t thin_sinks = 0x7468696e2d736e6bULL;   // "thin-snk"
constexpr std::uint64_t chain = 0x636861696e2d7631ULL;        // "chain-v1"
constexpr std::uint64_t replica = 0x7265706c696361ULL;        // "replica"
} // namespace stream_key

/**
 * Deterministic random stream.
 *
 * Wraps mt19937_64 (bit-exact by the standard) and implements every variate
 * transform locally so that sampled values do not depend on the standard
 * library's distribution implementations.
 */
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t u64() { return eng_(); }

  /** Uniform on [0,1) with 53 random bits. */
  double uniform() { return (eng_() >> 11) * 0x1.0p-53; }

  /** Uniform on [a,b). */
  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  /** Exponential with given rate. */
  double exponential(double rate) {
    return -std::log1p(-uniform()) / rate;
  }

  /**
   * Poisson variate, exact for all means.
   *
   * Sequential inversion below mean 10, Hormann's PTRS transformed
   * rejection above it.
   */
  std::int64_t poisson(double mean) {
    if (!(mean >= 0.0)) throw std::invalid_argument("poisson: negative mean");
    if (mean == 0.0) return 0;
    if (mean < 10.0) return poisson_inversion(mean);
    return poisson_ptrs(mean);
  }

private:
  std::int64_t poisson_inversion(double mean) {
    const double q = std::exp(-mean);
    std::int64_t k = 0;
    double p = q, s = q;
    const double u = uniform();
    while (s < u) {
      ++k;
      p *= mean / static_cast<double>(k);
      s += p;
      if (k > 2000) break; // unreachable for mean < 10
    }
    return k;
  }

  std::int64_t poisson_ptrs(double mean) {
    const double slam = std::sqrt(mean);
    const double llam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
      const double u = uniform() - 0.5;
      const double v = uniform();
      const double us = 0.5 - std::fabs(u);
      const auto k =
          static_cast<std::int64_t>(std::floor((2.0 * a / us + b) * u + mean + 0.43));
      if (us >= 0.07 && v <= vr) return k;
      if (k < 0 || (us < 0.013 && v > us)) continue;
      const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
      if (lhs <= k * llam - mean - std::lgamma(static_cast<double>(k) + 1.0)) return k;
    }
  }

  std::mt19937_64 eng_;
};

/** The three named streams every diagram build consumes. */
struct RngStreams {
  std::uint64_t master = 0;
  Rng geometry;
  Rng interaction;
  Rng scp;

  static RngStreams from_master(std::uint64_t master) {
    return RngStreams{master, Rng(derive_seed(master, stream_key::geometry)),
                      Rng(derive_seed(master, stream_key::interaction)),
                      Rng(derive_seed(master, stream_key::scp))};
  }

  /** Extra stream derived from the same master (thinning marks, chains, ...). */
  Rng derived(std::uint64_t key) const { return Rng(derive_seed(master, key)); }
};

/** Per-replica master seed. */
inline std::uint64_t replica_seed(std::uint64_t master, std::uint64_t index) {
  return derive_seed(master, stream_key::replica ^ (0x100000001b3ULL * (index + 1)));
}

/**
 * Stateless coin supply keyed by (ray origin id, contact ordinal).
 *
 * Replaying a build with identical geometry reproduces identical outcomes
 * at every contact, independent of event processing order.
 */
class CoinOracle {
public:
  explicit CoinOracle(std::uint64_t seed) : seed_(seed) {}

  double uniform_at(std::uint64_t origin_id, std::uint64_t ordinal) const {
    std::uint64_t h = splitmix64(seed_ ^ splitmix64(origin_id * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL));
    h = splitmix64(h ^ splitmix64(ordinal + 0x632be59bd9b4e019ULL));
    return (h >> 11) * 0x1.0p-53;
  }

private:
  std::uint64_t seed_;
};

} // namespace tpng
