#include "tpng/sampling.hpp"

#include <algorithm>
#include <stdexcept>

namespace tpng {

std::vector<double> sample_poisson_1d(double rate, double length, Rng& rng) {
  if (rate < 0.0 || length < 0.0)
    throw std::invalid_argument("sample_poisson_1d: negative rate or length");
  std::vector<double> pts;
  if (rate == 0.0 || length == 0.0) return pts;
  const auto n = rng.poisson(rate * length);
  pts.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) pts.push_back(rng.uniform(0.0, length));
  std::sort(pts.begin(), pts.end());
  return pts;
}

std::vector<Point> sample_poisson_2d(double intensity, const Box& box, Rng& rng) {
  if (intensity < 0.0)
    throw std::invalid_argument("sample_poisson_2d: negative intensity");
  std::vector<Point> pts;
  if (intensity == 0.0) return pts;
  const auto n = rng.poisson(intensity * box.width * box.height);
  pts.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i)
    pts.push_back(Point{rng.uniform(0.0, box.width), rng.uniform(0.0, box.height)});
  std::sort(pts.begin(), pts.end(),
            [](Point a, Point b) { return a.y < b.y; });
  return pts;
}

std::vector<bool> thin_marks(std::size_t n, double keep_prob, Rng& rng) {
  if (keep_prob < 0.0 || keep_prob > 1.0)
    throw std::invalid_argument("thin_marks: keep probability outside [0,1]");
  std::vector<bool> keep(n);
  for (std::size_t i = 0; i < n; ++i) keep[i] = rng.bernoulli(keep_prob);
  return keep;
}

std::vector<double> apply_marks(const std::vector<double>& pts,
                                const std::vector<bool>& keep, bool kept) {
  std::vector<double> out;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (keep[i] == kept) out.push_back(pts[i]);
  return out;
}

} // namespace tpng
