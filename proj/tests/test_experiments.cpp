#include <doctest.h>

#include <set>
#include <stdexcept>

#include "tpng/experiments.hpp"
#include "tpng/io.hpp"

using namespace tpng;

TEST_CASE("the registry lists each experiment once with a sane size") {
  const auto names = experiment_names();
  CHECK(names.size() == 10);
  std::set<std::string> uniq(names.begin(), names.end());
  CHECK(uniq.size() == names.size());
  for (const auto& n : names)
    CHECK(pinned_replicas(n) > 0);
  CHECK(uniq.count("conservation") == 1);
  CHECK(uniq.count("lln-height") == 1);
  CHECK(uniq.count("local-convergence") == 1);
  CHECK_THROWS_AS(pinned_replicas("lln"), std::invalid_argument);
  CHECK_THROWS_AS(run_named_experiment("nope", 1, false), std::invalid_argument);
}

TEST_CASE("report verdict logic") {
  ExperimentReport rep;
  CHECK(rep.passed()); // vacuously: nothing failed, nothing unresolved
  rep.add({"a", 0.0, 0.0, 0.1, -1.0, true});
  CHECK(rep.passed());
  rep.add({"b", 9.0, 0.0, 0.1, -1.0, false});
  CHECK(!rep.passed());
  rep.measurements[1].pass = true;
  CHECK(rep.passed());
  rep.inconclusive = true;
  CHECK(!rep.passed());
}

TEST_CASE("structural audits pass at desk size") {
  const ExperimentReport rep = conservation_experiment({0.0, 0.5, 0.9}, 25, 911, false);
  CHECK(rep.name == "conservation");
  CHECK(rep.replicas == 75); // 3 interaction strengths times 25 runs
  CHECK(!rep.inconclusive);
  CHECK(rep.passed());
  CHECK(!rep.measurements.empty());
  CHECK(!rep.rows.empty());
  for (const auto& row : rep.rows)
    CHECK(row.size() == rep.columns.size());

  const ExperimentReport ora = oracle_experiment(12, 10, 912, false);
  CHECK(ora.passed());
  CHECK(ora.find("height_vs_chain_mismatches") != nullptr);
  CHECK(ora.find("primal_vs_dual_mismatches") != nullptr);
}

TEST_CASE("an underpowered significance test is flagged, not passed") {
  const ExperimentReport rep =
      stationarity_experiment(1.0, 0.5, Box{18.0, 18.0}, 2, 8, 913, false);
  CHECK(rep.inconclusive);
  CHECK(!rep.passed());
  CHECK(!rep.notes.empty());
}

TEST_CASE("named runs reproduce bit for bit and honor the scale knob") {
  const auto a = run_named_experiment("conservation", 2026, false, 0.01);
  const auto b = run_named_experiment("conservation", 2026, false, 0.01);
  REQUIRE(a.size() == 1);
  REQUIRE(b.size() == 1);
  CHECK(a[0].replicas == 100); // four strengths at 1% of the pinned per-strength runs
  CHECK(report_csv(a[0]) == report_csv(b[0]));

  const std::string text = format_report(a[0]);
  CHECK(text.find("conservation") != std::string::npos);
  const bool verdict_shown = text.find("pass") != std::string::npos ||
                             text.find("FAIL") != std::string::npos ||
                             text.find("INCONCLUSIVE") != std::string::npos;
  CHECK(verdict_shown);
}
