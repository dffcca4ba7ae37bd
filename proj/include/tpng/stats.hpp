#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "tpng/geometry.hpp"

namespace tpng {

/**
 * Length of the longest chain of points totally ordered by the strict
 * coordinatewise order, via patience sorting in O(n log n). Ties in either
 * coordinate never chain.
 */
long longest_chain(std::vector<Point> pts);

/** Chi-square goodness-of-fit summary. */
struct GofResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  int bins = 0;
  bool inconclusive = false; // too few samples or bins to test
};

/**
 * Chi-square test of integer samples against a Poisson law. Bins are
 * consecutive counts with tails pooled until every expected mass is at
 * least min_expected. Needs at least 100 samples, otherwise the result is
 * flagged inconclusive.
 */
GofResult poisson_gof(const std::vector<long>& samples, double mean,
                      double min_expected = 5.0);

/**
 * Chi-square test against an arbitrary pmf on 0..n-1 (tail mass pooled into
 * the last bin). Used for discrete laws other than Poisson.
 */
GofResult pmf_gof(const std::vector<long>& samples,
                  const std::vector<double>& pmf, double min_expected = 5.0);

/**
 * Two-sample chi-square homogeneity test on integer samples, binned jointly
 * with pooled tails.
 */
GofResult two_sample_chi_square(const std::vector<long>& a,
                                const std::vector<long>& b,
                                double min_expected = 5.0);

/** P{X >= n} evaluated from samples; returns a callable. */
std::function<double(double)> empirical_tail(std::vector<double> samples);

/**
 * Exact two-sided binomial p-value (doubled smaller tail, capped at 1).
 * Preferred over the normal approximation when n p is small.
 */
double binomial_two_sided_p(long k, long n, double p);

/** Pearson correlation of paired samples. */
double correlation(const std::vector<double>& a, const std::vector<double>& b);

/** One-way ANOVA p-value across independent groups. */
double anova_p(const std::vector<std::vector<double>>& groups);

double mean_of(const std::vector<double>& v);
double variance_of(const std::vector<double>& v);
double median_of(std::vector<double> v);

/** Regularized upper chi-square tail, exposed for direct tail checks. */
double chi_square_tail(double statistic, int dof);

} // namespace tpng
