#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tpng/geometry.hpp"

namespace tpng {

/** One checked quantity inside a report. */
struct Measurement {
  std::string name;
  double value = 0.0;
  double target = 0.0;
  double tolerance = 0.0; // absolute allowance on |value - target| where applicable
  double p_value = -1.0;  // -1 when no significance test is attached
  bool pass = false;
};

/**
 * Outcome of one Monte-Carlo experiment: every quantity it checked, the
 * replica bookkeeping, and enough provenance (seed, parameters) to reproduce
 * the numbers bit for bit.
 */
struct ExperimentReport {
  std::string name;
  std::uint64_t seed = 0;
  int replicas = 0;
  int excluded = 0;
  double runtime_seconds = 0.0;
  std::vector<std::pair<std::string, double>> params;
  std::vector<Measurement> measurements;
  std::vector<std::string> notes;
  bool inconclusive = false;

  // Per-replica table (one row per replica, in replica order).
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  bool passed() const;
  const Measurement* find(const std::string& mname) const;
  void add(Measurement m) { measurements.push_back(std::move(m)); }
};

/** Segment-count balance and structural audit over randomized configurations. */
ExperimentReport conservation_experiment(const std::vector<double>& t_values, int runs,
                                         std::uint64_t seed, bool parallel = true);

/** t=0, empty boundary: height must equal the longest up-right chain of bulk points. */
ExperimentReport oracle_experiment(int boxes, int queries_per_box, std::uint64_t seed,
                                   bool parallel = true);

/** Crossing counts on horizontal and vertical lines against their Poisson laws. */
ExperimentReport stationarity_experiment(double lambda, double t, const Box& box,
                                         int n_lines, int replicas, std::uint64_t seed,
                                         bool parallel = true);

/**
 * Height against x lambda + y/(lambda(1-t)) at query points radius*direction.
 * The verdict tests the largest radius only; smaller radii feed the
 * error-trend diagnostic (at most one increase allowed across >= 3 radii).
 */
ExperimentReport lln_height_experiment(double lambda, double t, Point direction,
                                       const std::vector<double>& radii, int replicas,
                                       std::uint64_t seed, bool parallel = true);

/**
 * Source-only process: height per unit against the two-regime limit, one run
 * per slope. Verdict at the largest radius, trend across the rest.
 */
ExperimentReport one_sided_lln_experiment(double lambda, double t,
                                          const std::vector<double>& slopes,
                                          const std::vector<double>& radii, int replicas,
                                          std::uint64_t seed, bool parallel = true);

/** Tagged discrepancy particles: median ordinate/abscissa ratio against p r (1-t). */
ExperimentReport scp_slope_experiment(double p, double r, double t,
                                      const std::vector<int>& labels, const Box& box,
                                      double tau, int replicas, std::uint64_t seed,
                                      bool parallel = true);

/** Height gap between coupled diagrams along tagged paths stays within its entry value + 1. */
ExperimentReport flux_bound_experiment(double p, double r, double t, const Box& box,
                                       const std::vector<int>& labels, int replicas,
                                       std::uint64_t seed, bool parallel = true);

/**
 * Product-measure chain: detailed-balance residual on a parameter grid,
 * marginal stationarity after many pair updates, and the dominating coupled
 * run with zero order violations.
 */
ExperimentReport blocking_chain_experiment(double lambda, double eps, double t, int window,
                                           int replicas, std::uint64_t steps_per_replica,
                                           std::uint64_t coupled_steps, std::uint64_t seed,
                                           bool parallel = true);

/** Right tail of the rightmost occupied site against t^(n+c)/(1-t), pooled over runs. */
ExperimentReport tail_bound_experiment(double lambda, double eps, double t, const Box& box,
                                       const std::vector<double>& checkpoints,
                                       const std::vector<int>& ns, int replicas,
                                       std::uint64_t seed, bool parallel = true);

/**
 * Zero-boundary process along the slope direction: interval counts at the
 * anchor against Poisson laws, pairwise correlations near zero, and a
 * non-increasing error trend across radii.
 */
ExperimentReport local_convergence_experiment(
    double t, double slope, const std::vector<std::pair<double, double>>& h_intervals,
    const std::vector<std::pair<double, double>>& v_intervals,
    const std::vector<double>& radii, int replicas, std::uint64_t seed,
    bool parallel = true);

/** Registry of full-size configurations, shared by the CLI and the gate suite. */
std::vector<std::string> experiment_names();

/** Replica count a named experiment runs at scale 1. */
int pinned_replicas(const std::string& name);

/**
 * Run a named experiment at its pinned configuration. `scale` multiplies the
 * replica counts (smoke runs shrink below the power threshold and come back
 * inconclusive rather than silently weaker).
 */
std::vector<ExperimentReport> run_named_experiment(const std::string& name,
                                                   std::uint64_t seed, bool parallel = true,
                                                   double scale = 1.0);

/** Multi-line human-readable rendering. */
std::string format_report(const ExperimentReport& rep);

} // namespace tpng
