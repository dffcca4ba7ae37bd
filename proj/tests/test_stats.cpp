#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "tpng/rng.hpp"
#include "tpng/stats.hpp"

using namespace tpng;

namespace {

// Quadratic reference for the patience-sorting implementation.
long chain_dp(const std::vector<Point>& pts) {
  std::vector<Point> s(pts);
  std::sort(s.begin(), s.end(), [](Point a, Point b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  const int n = static_cast<int>(s.size());
  std::vector<long> best(n, 1);
  long out = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j)
      if (s[j].x < s[i].x && s[j].y < s[i].y) best[i] = std::max(best[i], best[j] + 1);
    out = std::max(out, best[i]);
  }
  return out;
}

} // namespace

TEST_CASE("longest chain hand cases") {
  CHECK(longest_chain({}) == 0);
  CHECK(longest_chain({{1, 1}}) == 1);
  CHECK(longest_chain({{1, 1}, {2, 2}, {0.5, 3}}) == 2);
  // ties in one coordinate never chain
  CHECK(longest_chain({{1, 1}, {1, 2}, {1, 3}}) == 1);
  CHECK(longest_chain({{1, 1}, {2, 1}, {3, 1}}) == 1);
  CHECK(longest_chain({{3, 1}, {2, 2}, {1, 3}}) == 1);
  CHECK(longest_chain({{1, 1}, {2, 2}, {3, 3}, {4, 4}}) == 4);
}

TEST_CASE("longest chain agrees with quadratic dynamic program") {
  Rng rng(321);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform() * 200);
    std::vector<Point> pts(n);
    for (auto& p : pts) {
      p.x = rng.uniform(0.0, 10.0);
      p.y = rng.uniform(0.0, 10.0);
      if (rng.bernoulli(0.2) && &p != &pts.front()) p.x = pts.front().x; // force ties
    }
    REQUIRE(longest_chain(pts) == chain_dp(pts));
  }
}

TEST_CASE("poisson gof accepts its own law and rejects a shifted one") {
  Rng rng(654);
  std::vector<long> samples(4000);
  for (auto& s : samples)
    s = rng.poisson(5.0);
  CHECK(poisson_gof(samples, 5.0).p_value > 1e-4);
  CHECK(poisson_gof(samples, 6.5).p_value < 1e-6);

  CHECK(poisson_gof(std::vector<long>(50, 3), 3.0).inconclusive);
}

TEST_CASE("gof rejection rate sits near its nominal level") {
  Rng rng(777);
  int rejects = 0;
  const int trials = 400;
  for (int i = 0; i < trials; ++i) {
    std::vector<long> samples(200);
    for (auto& s : samples)
      s = rng.poisson(4.0);
    const GofResult g = poisson_gof(samples, 4.0);
    REQUIRE(!g.inconclusive);
    if (g.p_value < 0.05) ++rejects;
  }
  // binomial(400, 0.05): mean 20, sd 4.36
  CHECK(rejects >= 6);
  CHECK(rejects <= 34);
}

TEST_CASE("pmf and two-sample chi square behave on simple laws") {
  Rng rng(888);
  std::vector<long> a(3000), b(3000), c(3000);
  for (auto& s : a)
    s = rng.bernoulli(0.3) ? 1 : 0;
  for (auto& s : b)
    s = rng.bernoulli(0.3) ? 1 : 0;
  for (auto& s : c)
    s = rng.bernoulli(0.5) ? 1 : 0;
  CHECK(pmf_gof(a, {0.7, 0.3}).p_value > 1e-4);
  CHECK(pmf_gof(a, {0.5, 0.5}).p_value < 1e-6);
  CHECK(two_sample_chi_square(a, b).p_value > 1e-4);
  CHECK(two_sample_chi_square(a, c).p_value < 1e-6);
}

TEST_CASE("exact binomial two-sided p") {
  // n=10, p=0.5: P{X=0 or X=10} doubled tail
  CHECK(binomial_two_sided_p(0, 10, 0.5) == doctest::Approx(2.0 / 1024.0));
  CHECK(binomial_two_sided_p(10, 10, 0.5) == doctest::Approx(2.0 / 1024.0));
  CHECK(binomial_two_sided_p(5, 10, 0.5) == doctest::Approx(1.0).epsilon(0.3));
  CHECK(binomial_two_sided_p(5, 10, 0.5) <= 1.0);
  // degenerate probabilities
  CHECK(binomial_two_sided_p(0, 10, 0.0) == 1.0);
  CHECK(binomial_two_sided_p(10, 10, 1.0) == 1.0);
  CHECK(binomial_two_sided_p(1, 10, 0.0) == 0.0);
  CHECK_THROWS_AS(binomial_two_sided_p(11, 10, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(binomial_two_sided_p(-1, 10, 0.5), std::invalid_argument);
}

TEST_CASE("anova separates shifted groups and tolerates equal ones") {
  Rng rng(999);
  auto group = [&](double shift) {
    std::vector<double> g(300);
    for (auto& x : g)
      x = rng.uniform() + shift;
    return g;
  };
  CHECK(anova_p({group(0), group(0), group(0)}) > 1e-4);
  CHECK(anova_p({group(0), group(0.5), group(0)}) < 1e-8);
  CHECK_THROWS_AS(anova_p({{1.0}, {2.0}}), std::invalid_argument);
}

TEST_CASE("correlation and moments") {
  std::vector<double> x{1, 2, 3, 4, 5}, y{2, 4, 6, 8, 10}, z{5, 4, 3, 2, 1};
  CHECK(correlation(x, y) == doctest::Approx(1.0));
  CHECK(correlation(x, z) == doctest::Approx(-1.0));
  CHECK(mean_of(x) == doctest::Approx(3.0));
  CHECK(variance_of(x) == doctest::Approx(2.5)); // sample variance
  CHECK(median_of({3, 1, 2}) == doctest::Approx(2.0));
  CHECK(median_of({4, 1, 2, 3}) == doctest::Approx(2.5));
}

TEST_CASE("empirical tail and chi-square tail") {
  auto tail = empirical_tail({1, 2, 3, 4});
  CHECK(tail(0.5) == doctest::Approx(1.0));
  CHECK(tail(2.5) == doctest::Approx(0.5));
  CHECK(tail(2.0) == doctest::Approx(0.75)); // P{X >= 2}
  CHECK(tail(9.0) == doctest::Approx(0.0));

  CHECK(chi_square_tail(3.841, 1) == doctest::Approx(0.05).epsilon(0.01));
  CHECK(chi_square_tail(4.0, 2) == doctest::Approx(std::exp(-2.0)).epsilon(1e-6));
  CHECK(chi_square_tail(0.0, 5) == doctest::Approx(1.0));
}
