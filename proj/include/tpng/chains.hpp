#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tpng/rng.hpp"
#include "tpng/scp.hpp"

namespace tpng {

/**
 * A 0/1 configuration on an integer site window. Sites right of the window
 * are implicitly empty; sites left of it are simply not represented, so
 * every step must address sites inside the window.
 */
class IndicatorChain {
 public:
  IndicatorChain() = default;
  IndicatorChain(int j_min, int j_max); // zero-filled, j_min <= j_max

  int j_min() const { return lo_; }
  int j_max() const { return lo_ + static_cast<int>(bits_.size()) - 1; }
  bool contains(int j) const { return j >= j_min() && j <= j_max(); }
  std::uint8_t at(int j) const;
  void set(int j, std::uint8_t v);
  std::uint64_t steps = 0;

  std::uint64_t ones() const;
  bool operator==(const IndicatorChain& o) const { return lo_ == o.lo_ && bits_ == o.bits_; }

 private:
  int lo_ = 0;
  std::vector<std::uint8_t> bits_;
};

/** Highest occupied site, if any. */
std::optional<int> rightmost_one(const IndicatorChain& chain);

/** k-th highest occupied site, k = 1 for the rightmost. */
std::optional<int> kth_rightmost_one(const IndicatorChain& chain, int k);

/** Minus the number of occupied sites strictly right of m. */
int riders_above(const IndicatorChain& chain, int m);

/**
 * Parameters of the product measure with marginals
 * P{site j occupied} = t^(j+c) / (1 + t^(j+c)), which the pair dynamics
 * below leave invariant. The offset c solves t^c = lambda/eps.
 */
struct BlockingParams {
  double t = 0.5;
  double c = 0.0;

  static BlockingParams from_rates(double t, double lambda, double eps);
  double site_probability(int j) const;
};

/** Entries moving left from site j <= 0: marks[r] seeds site -r; sites 1..n_bottom are empty. */
IndicatorChain v_init(const std::vector<std::uint8_t>& marks, int n_bottom);

/** Independent sites with the blocking marginals over [j_min, j_max]. */
IndicatorChain u_init(const BlockingParams& params, int j_min, int j_max, Rng& rng);

/**
 * Sample a configuration that dominates v coordinatewise while keeping the
 * blocking marginals, assuming v's sites are independent with probability
 * site_probability(0) at j <= 0 and empty above.
 */
IndicatorChain u_init_dominating(const IndicatorChain& v, const BlockingParams& params, Rng& rng);

/** What a single pair update did. */
struct StepResult {
  int rule = 1;           // 1: equal bits, 2: forced left move, 3: coin case
  bool jumped = false;    // an occupation moved between m and m+1
  bool coin_used = false; // exactly the rule-3 steps consume one uniform
};

/**
 * Update the pair (m, m+1): equal bits stay; (0,1) becomes (1,0); (1,0)
 * becomes (0,1) with probability t, drawing one uniform, else stays.
 * Throws std::out_of_range if the pair leaves the window.
 */
StepResult v_step(IndicatorChain& chain, int m, double t, Rng& rng);

struct CoupledResult {
  bool v_jumped = false;
  bool u_jumped = false;
  bool coin_used = false;
};

/**
 * Joint update of a dominating pair at (m, m+1), sharing one uniform between
 * the two chains whenever either sits in the coin case, so that each chain
 * follows its own law and u >= v survives every step. Throws
 * std::logic_error if u >= v fails at the addressed pair.
 */
CoupledResult coupled_step(IndicatorChain& u, IndicatorChain& v, int m, double t, Rng& rng);

/** |t q_m (1 - q_{m+1}) - (1 - q_m) q_{m+1}| at the pair (m, m+1). */
double reversibility_check(const BlockingParams& params, int m);

/** One recorded pair update of a coupled boundary run. */
struct TripleStep {
  double sigma = 0.0;
  int m = 0;
  int rule = 1;
  bool jumped = false;
  int rightmost_after = 0; // no_rider when the window holds no occupation
};

inline constexpr int no_rider = std::numeric_limits<int>::min();

/**
 * A stationary diagram, the discrepancy layer against its sink-free
 * enlargement at source rate lambda + eps, and the site chain driven by the
 * layer's meeting sequence. carriers0/carriers map occupied site -> rider
 * label (0, -1, ... assigned to the kept left entries bottom-up) before and
 * after the run.
 */
struct TripleRun {
  ModelParams alpha_params;
  ModelParams omega_params;
  Diagram alpha;
  ScpLayer layer;
  std::vector<Meeting> meetings;
  std::vector<std::uint8_t> sink_kept; // by left-entry rank, bottom-up
  IndicatorChain v0;
  IndicatorChain v;
  std::map<int, int> carriers0;
  std::map<int, int> carriers;
  std::vector<TripleStep> trace;
  bool edge_contact = false;
};

TripleRun triple_run(double lambda, double eps, double t, const Box& box, std::uint64_t seed);

/**
 * The staircase traced by the labeled rider: stretches of the carrying
 * paths spliced at the recorded trade points. Throws std::domain_error for
 * a label that never enters.
 */
std::vector<Point> spliced_path(const TripleRun& run, int h_label);

/** step, sigma, m, rule, jump per line, with a header. */
std::string trace_csv(const TripleRun& run);

} // namespace tpng
