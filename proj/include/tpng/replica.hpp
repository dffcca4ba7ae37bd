#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tpng/rng.hpp"

namespace tpng {

/**
 * Run fn(index, seed) for indices 0..count-1, each with its own derived seed,
 * and return the results in index order. With OpenMP compiled in and
 * parallel=true the replicas run on multiple threads; the output, and
 * anything folded from it in index order, is identical to the serial path.
 */
template <typename R, typename Fn>
std::vector<R> run_replicas(std::uint64_t master_seed, int count, Fn&& fn,
                            bool parallel = true) {
  if (count < 0) throw std::invalid_argument("negative replica count");
  std::vector<R> out(static_cast<std::size_t>(count));
#if defined(TPNG_HAVE_OPENMP)
  if (parallel) {
    std::string first_error;
    bool failed = false;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < count; ++i) {
      try {
        out[static_cast<std::size_t>(i)] = fn(i, replica_seed(master_seed, i));
      } catch (const std::exception& e) {
#pragma omp critical
        {
          if (!failed) {
            failed = true;
            first_error = e.what();
          }
        }
      }
    }
    if (failed) throw std::runtime_error("replica failed: " + first_error);
    return out;
  }
#else
  (void)parallel;
#endif
  for (int i = 0; i < count; ++i)
    out[static_cast<std::size_t>(i)] = fn(i, replica_seed(master_seed, i));
  return out;
}

} // namespace tpng
