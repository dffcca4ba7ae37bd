#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "tpng/rng.hpp"
#include "tpng/sampling.hpp"
#include "tpng/stats.hpp"

using namespace tpng;

TEST_CASE("1d process: sorted, in range, Poisson counts") {
  Rng rng(42);
  std::vector<long> counts;
  for (int i = 0; i < 2000; ++i) {
    auto pts = sample_poisson_1d(1.5, 4.0, rng);
    REQUIRE(std::is_sorted(pts.begin(), pts.end()));
    for (double x : pts) {
      REQUIRE(x >= 0.0);
      REQUIRE(x <= 4.0);
    }
    counts.push_back(static_cast<long>(pts.size()));
  }
  CHECK(poisson_gof(counts, 6.0).p_value > 1e-4);

  CHECK(sample_poisson_1d(0.0, 4.0, rng).empty());
  CHECK(sample_poisson_1d(1.5, 0.0, rng).empty());
}

TEST_CASE("2d field: ascending ordinate, Poisson counts, uniform spread") {
  Rng rng(43);
  const Box box{3.0, 2.0};
  std::vector<long> counts, left_half;
  for (int i = 0; i < 2000; ++i) {
    auto pts = sample_poisson_2d(1.25, box, rng);
    REQUIRE(std::is_sorted(pts.begin(), pts.end(),
                           [](Point a, Point b) { return a.y < b.y; }));
    long left = 0;
    for (const auto& p : pts) {
      REQUIRE(box.contains(p));
      if (p.x < 1.5) ++left;
    }
    counts.push_back(static_cast<long>(pts.size()));
    left_half.push_back(left);
  }
  CHECK(poisson_gof(counts, 7.5).p_value > 1e-4);
  CHECK(poisson_gof(left_half, 3.75).p_value > 1e-4);
}

TEST_CASE("thinning marks hit their keep rate and split cleanly") {
  Rng rng(44);
  long kept_total = 0;
  const int trials = 3000, n = 20;
  for (int i = 0; i < trials; ++i) {
    auto marks = thin_marks(n, 0.3, rng);
    REQUIRE(marks.size() == n);
    for (bool m : marks)
      kept_total += m ? 1 : 0;
  }
  const double phat = static_cast<double>(kept_total) / (trials * n);
  CHECK(std::fabs(phat - 0.3) < 3.0 * std::sqrt(0.3 * 0.7 / (trials * n)));

  std::vector<double> pts{0.5, 1.0, 2.0, 3.5};
  std::vector<bool> keep{true, false, true, false};
  CHECK(apply_marks(pts, keep, true) == std::vector<double>{0.5, 2.0});
  CHECK(apply_marks(pts, keep, false) == std::vector<double>{1.0, 3.5});

  CHECK(thin_marks(5, 1.0, rng) == std::vector<bool>(5, true));
  CHECK(thin_marks(5, 0.0, rng) == std::vector<bool>(5, false));
}
