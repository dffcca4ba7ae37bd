#include "tpng/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>

namespace tpng {

long longest_chain(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](Point a, Point b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y > b.y; // equal abscissas must not chain
  });
  std::vector<double> tails;
  for (const auto& p : pts) {
    auto it = std::lower_bound(tails.begin(), tails.end(), p.y);
    if (it == tails.end())
      tails.push_back(p.y);
    else
      *it = p.y;
  }
  return static_cast<long>(tails.size());
}

double chi_square_tail(double statistic, int dof) {
  if (dof <= 0) return 1.0;
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

namespace {

double poisson_pmf(long k, double mean) {
  return std::exp(k * std::log(mean) - mean - std::lgamma(static_cast<double>(k) + 1.0));
}

struct Binning {
  std::vector<double> expected; // per bin, as probability mass
  std::vector<long> observed;
};

/**
 * Pool consecutive integer cells into bins whose expected mass reaches
 * min_expected (as counts); the upper tail is pooled into the final bin.
 */
Binning pool_poisson(const std::vector<long>& samples, double mean,
                     double min_expected) {
  const double n = static_cast<double>(samples.size());
  long maxv = 0;
  for (long s : samples) maxv = std::max(maxv, s);

  Binning b;
  std::vector<long> cell_hi; // inclusive upper cell of each bin
  double acc_p = 0.0, used_p = 0.0;
  for (long k = 0;; ++k) {
    acc_p += poisson_pmf(k, mean);
    const double remaining = 1.0 - used_p - acc_p;
    if (acc_p * n >= min_expected && remaining * n >= min_expected) {
      b.expected.push_back(acc_p);
      cell_hi.push_back(k);
      used_p += acc_p;
      acc_p = 0.0;
    }
    if (k > maxv && remaining * n < min_expected) break;
    if (k > maxv + 16 * (1 + static_cast<long>(std::sqrt(mean)))) break;
  }
  // Tail bin takes everything remaining.
  b.expected.push_back(1.0 - used_p);
  cell_hi.push_back(std::numeric_limits<long>::max());

  b.observed.assign(b.expected.size(), 0);
  for (long s : samples) {
    const auto it = std::lower_bound(cell_hi.begin(), cell_hi.end(), s);
    b.observed[static_cast<std::size_t>(it - cell_hi.begin())] += 1;
  }
  return b;
}

GofResult chi_square_from_bins(const Binning& b, std::size_t n_samples) {
  GofResult r;
  r.bins = static_cast<int>(b.expected.size());
  if (r.bins < 2) {
    r.inconclusive = true;
    return r;
  }
  const double n = static_cast<double>(n_samples);
  double stat = 0.0;
  for (std::size_t i = 0; i < b.expected.size(); ++i) {
    const double e = b.expected[i] * n;
    if (e <= 0.0) continue;
    const double d = static_cast<double>(b.observed[i]) - e;
    stat += d * d / e;
  }
  r.statistic = stat;
  r.dof = r.bins - 1;
  r.p_value = chi_square_tail(stat, r.dof);
  return r;
}

} // namespace

GofResult poisson_gof(const std::vector<long>& samples, double mean,
                      double min_expected) {
  GofResult r;
  if (samples.size() < 100 || !(mean > 0.0)) {
    r.inconclusive = true;
    return r;
  }
  return chi_square_from_bins(pool_poisson(samples, mean, min_expected),
                              samples.size());
}

GofResult pmf_gof(const std::vector<long>& samples, const std::vector<double>& pmf,
                  double min_expected) {
  GofResult r;
  if (samples.size() < 100 || pmf.empty()) {
    r.inconclusive = true;
    return r;
  }
  const double n = static_cast<double>(samples.size());
  Binning b;
  std::vector<long> cell_hi;
  double acc = 0.0, used = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    acc += pmf[k];
    const double remaining = 1.0 - used - acc;
    if (acc * n >= min_expected &&
        (remaining * n >= min_expected || k + 1 == pmf.size())) {
      b.expected.push_back(acc);
      cell_hi.push_back(static_cast<long>(k));
      used += acc;
      acc = 0.0;
    }
  }
  if (1.0 - used > 0.0) {
    b.expected.push_back(1.0 - used);
    cell_hi.push_back(std::numeric_limits<long>::max());
  } else if (!cell_hi.empty()) {
    cell_hi.back() = std::numeric_limits<long>::max();
  }
  b.observed.assign(b.expected.size(), 0);
  for (long s : samples) {
    const auto it = std::lower_bound(cell_hi.begin(), cell_hi.end(), s);
    b.observed[static_cast<std::size_t>(it - cell_hi.begin())] += 1;
  }
  return chi_square_from_bins(b, samples.size());
}

GofResult two_sample_chi_square(const std::vector<long>& a,
                                const std::vector<long>& b, double min_expected) {
  GofResult r;
  if (a.size() < 100 || b.size() < 100) {
    r.inconclusive = true;
    return r;
  }
  long lo = std::min(*std::min_element(a.begin(), a.end()),
                     *std::min_element(b.begin(), b.end()));
  long hi = std::max(*std::max_element(a.begin(), a.end()),
                     *std::max_element(b.begin(), b.end()));

  // Joint binning on pooled counts so both samples share cell edges.
  std::vector<long> pooled_count(static_cast<std::size_t>(hi - lo + 1), 0);
  for (long s : a) pooled_count[static_cast<std::size_t>(s - lo)] += 1;
  for (long s : b) pooled_count[static_cast<std::size_t>(s - lo)] += 1;

  const double scale_a = static_cast<double>(a.size()) /
                         static_cast<double>(a.size() + b.size());
  std::vector<long> edges; // inclusive upper cell per bin, in value space
  long acc = 0;
  long total_rest = static_cast<long>(a.size() + b.size());
  for (long v = lo; v <= hi; ++v) {
    const long c = pooled_count[static_cast<std::size_t>(v - lo)];
    acc += c;
    total_rest -= c;
    const double e_small = std::min(scale_a, 1.0 - scale_a) * acc;
    const double rest_small = std::min(scale_a, 1.0 - scale_a) * total_rest;
    if (e_small >= min_expected && (rest_small >= min_expected || v == hi)) {
      edges.push_back(v);
      acc = 0;
    }
  }
  if (edges.empty() || acc > 0) {
    if (edges.empty())
      edges.push_back(hi);
    else
      edges.back() = hi;
  }
  const auto bin_of = [&edges, lo](long s) {
    const long v = std::max(s, lo);
    return static_cast<std::size_t>(
        std::lower_bound(edges.begin(), edges.end(), v) - edges.begin());
  };
  const std::size_t nbins = edges.size();
  if (nbins < 2) {
    r.inconclusive = true;
    return r;
  }
  std::vector<double> oa(nbins, 0.0), ob(nbins, 0.0);
  for (long s : a) oa[std::min(bin_of(s), nbins - 1)] += 1.0;
  for (long s : b) ob[std::min(bin_of(s), nbins - 1)] += 1.0;

  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double stat = 0.0;
  for (std::size_t i = 0; i < nbins; ++i) {
    const double tot = oa[i] + ob[i];
    if (tot == 0.0) continue;
    const double ea = tot * na / (na + nb);
    const double eb = tot * nb / (na + nb);
    stat += (oa[i] - ea) * (oa[i] - ea) / ea + (ob[i] - eb) * (ob[i] - eb) / eb;
  }
  r.statistic = stat;
  r.bins = static_cast<int>(nbins);
  r.dof = static_cast<int>(nbins) - 1;
  r.p_value = chi_square_tail(stat, r.dof);
  return r;
}

std::function<double(double)> empirical_tail(std::vector<double> samples) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  return [samples = std::move(samples), n](double x) {
    if (samples.empty()) return 0.0;
    const auto it = std::lower_bound(samples.begin(), samples.end(), x);
    return static_cast<double>(samples.end() - it) / n;
  };
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("mean_of: empty sample");
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double variance_of(const std::vector<double>& v) {
  if (v.size() < 2) throw std::invalid_argument("variance_of: need two samples");
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

double median_of(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median_of: empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("correlation: mismatched or short samples");
  const double ma = mean_of(a), mb = mean_of(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

double binomial_two_sided_p(long k, long n, double p) {
  if (n <= 0 || k < 0 || k > n) throw std::invalid_argument("binomial_two_sided_p: bad counts");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binomial_two_sided_p: bad probability");
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == n ? 1.0 : 0.0;
  boost::math::binomial_distribution<double> dist(static_cast<double>(n), p);
  const double lower = boost::math::cdf(dist, static_cast<double>(k));
  const double upper =
      k == 0 ? 1.0
             : boost::math::cdf(boost::math::complement(dist, static_cast<double>(k - 1)));
  return std::min(1.0, 2.0 * std::min(lower, upper));
}

double anova_p(const std::vector<std::vector<double>>& groups) {
  const std::size_t k = groups.size();
  if (k < 2) throw std::invalid_argument("anova_p: need at least two groups");
  std::size_t n = 0;
  double grand = 0.0;
  for (const auto& g : groups) {
    if (g.size() < 2) throw std::invalid_argument("anova_p: group too small");
    n += g.size();
    grand += std::accumulate(g.begin(), g.end(), 0.0);
  }
  grand /= static_cast<double>(n);
  double ss_between = 0.0, ss_within = 0.0;
  for (const auto& g : groups) {
    const double m = mean_of(g);
    ss_between += static_cast<double>(g.size()) * (m - grand) * (m - grand);
    for (double x : g) ss_within += (x - m) * (x - m);
  }
  const double df1 = static_cast<double>(k - 1);
  const double df2 = static_cast<double>(n - k);
  if (ss_within == 0.0) return ss_between == 0.0 ? 1.0 : 0.0;
  const double f = (ss_between / df1) / (ss_within / df2);
  boost::math::fisher_f dist(df1, df2);
  return boost::math::cdf(boost::math::complement(dist, f));
}

} // namespace tpng
