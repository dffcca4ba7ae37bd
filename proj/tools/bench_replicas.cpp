// Replica-throughput benchmark: the same workload through the serial loop
// and the OpenMP loop, with a byte-level check that scheduling leaves the
// report untouched.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#if defined(TPNG_HAVE_OPENMP)
#include <omp.h>
#endif

#include "tpng/diagram.hpp"
#include "tpng/experiments.hpp"
#include "tpng/io.hpp"
#include "tpng/replica.hpp"
#include "tpng/sweep.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

long build_workload(std::uint64_t master_seed, int replicas, double t, tpng::Box box,
                    bool parallel) {
  auto counts = tpng::run_replicas<long>(
      master_seed, replicas,
      [&](int, std::uint64_t seed) {
        tpng::Diagram d = tpng::build_diagram(tpng::ModelParams::stationary(1.0, t, box, seed));
        return static_cast<long>(d.corners());
      },
      parallel);
  long total = 0;
  for (long c : counts)
    total += c;
  return total;
}

} // namespace

int main(int argc, char** argv) {
  int replicas = 200;
  double t = 0.5;
  double extent = 30.0;
  std::uint64_t seed = 2026;

  CLI::App app{"Serial vs OpenMP replica throughput"};
  app.add_option("--replicas", replicas, "Diagrams to build per pass");
  app.add_option("--t", t, "Crossing probability");
  app.add_option("--extent", extent, "Square box side");
  app.add_option("--seed", seed, "Master seed");
  CLI11_PARSE(app, argc, argv);

#if defined(TPNG_HAVE_OPENMP)
  int threads = omp_get_max_threads();
  std::cout << "OpenMP enabled, max threads " << threads << "\n";
#else
  int threads = 1;
  std::cout << "OpenMP not compiled in; both passes run serially\n";
#endif
  std::cout << "workload: " << replicas << " stationary diagrams, box " << extent << "x" << extent
            << ", t=" << t << "\n";

  auto t0 = std::chrono::steady_clock::now();
  long serial_total = build_workload(seed, replicas, t, tpng::Box{extent, extent}, false);
  double serial_s = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  long parallel_total = build_workload(seed, replicas, t, tpng::Box{extent, extent}, true);
  double parallel_s = seconds_since(t0);

  std::cout << "serial:   " << serial_s << " s  (" << replicas / serial_s << " replicas/s)\n"
            << "parallel: " << parallel_s << " s  (" << replicas / parallel_s << " replicas/s)\n"
            << "speedup:  " << serial_s / parallel_s << "x on " << threads << " thread(s)\n";
  if (serial_total != parallel_total) {
    std::cout << "MISMATCH: aggregate corner counts differ (" << serial_total << " vs "
              << parallel_total << ")\n";
    return 1;
  }
  std::cout << "aggregate corner count identical across passes: " << serial_total << "\n";

  int probe = std::min(replicas, 50);
  tpng::ExperimentReport a = tpng::conservation_experiment({t}, probe, seed, false);
  tpng::ExperimentReport b = tpng::conservation_experiment({t}, probe, seed, true);
  bool same = tpng::report_csv(a) == tpng::report_csv(b);
  std::cout << "per-replica report table identical serial vs parallel: " << (same ? "yes" : "NO")
            << "\n";
  return same ? 0 : 1;
}
