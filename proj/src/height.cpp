#include "tpng/height.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tpng {

namespace {

void check_inside(const Diagram& d, Point v) {
  if (!d.box().contains(v)) throw std::domain_error("height: point outside box");
}

long count_le(const std::vector<double>& sorted, double x) {
  return static_cast<long>(std::upper_bound(sorted.begin(), sorted.end(), x) -
                           sorted.begin());
}

} // namespace

long height(const Diagram& d, Point v) {
  check_inside(d, v);
  long n = count_le(d.sources, v.x);
  for (const auto& s : d.horizontals)
    if (s.y <= v.y && Diagram::covers_x(s, v.x)) ++n;
  return n;
}

long height_dual(const Diagram& d, Point v) {
  check_inside(d, v);
  long n = count_le(d.sinks, v.y);
  for (const auto& s : d.verticals)
    if (s.x <= v.x && Diagram::covers_y(s, v.y)) ++n;
  return n;
}

void HeightIndex::DominanceCounter::build(
    std::vector<std::pair<double, double>> entries) {
  std::sort(entries.begin(), entries.end());
  keys.resize(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) keys[i] = entries[i].first;

  leaves = 1;
  while (leaves < std::max<std::size_t>(entries.size(), 1)) leaves *= 2;
  tree.assign(2 * leaves, {});
  for (std::size_t i = 0; i < entries.size(); ++i)
    tree[leaves + i].push_back(entries[i].second);
  for (std::size_t node = leaves - 1; node >= 1; --node) {
    const auto& l = tree[2 * node];
    const auto& r = tree[2 * node + 1];
    auto& m = tree[node];
    m.resize(l.size() + r.size());
    std::merge(l.begin(), l.end(), r.begin(), r.end(), m.begin());
    if (node == 1) break;
  }
}

long HeightIndex::DominanceCounter::count(double key_max, double val_max) const {
  const auto prefix = static_cast<std::size_t>(
      std::upper_bound(keys.begin(), keys.end(), key_max) - keys.begin());
  long total = 0;
  std::size_t lo = leaves, hi = leaves + prefix;
  while (lo < hi) {
    if (lo & 1) {
      const auto& node = tree[lo++];
      total += std::upper_bound(node.begin(), node.end(), val_max) - node.begin();
    }
    if (hi & 1) {
      const auto& node = tree[--hi];
      total += std::upper_bound(node.begin(), node.end(), val_max) - node.begin();
    }
    lo /= 2;
    hi /= 2;
  }
  return total;
}

HeightIndex::HeightIndex(const Diagram& d)
    : box_(d.box()), sources_(d.sources), sinks_(d.sinks) {
  std::vector<std::pair<double, double>> hl, hr, vl, vh;
  hl.reserve(d.horizontals.size());
  for (const auto& s : d.horizontals) {
    hl.emplace_back(s.y, s.x_lo);
    if (s.right == EndKind::corner) hr.emplace_back(s.y, s.x_hi);
  }
  vl.reserve(d.verticals.size());
  for (const auto& s : d.verticals) {
    vl.emplace_back(s.x, s.y_lo);
    if (s.upper == EndKind::corner) vh.emplace_back(s.x, s.y_hi);
  }
  h_left_.build(std::move(hl));
  h_right_corner_.build(std::move(hr));
  v_low_.build(std::move(vl));
  v_high_corner_.build(std::move(vh));
}

long HeightIndex::query(Point v) const {
  if (!box_.contains(v)) throw std::domain_error("height: point outside box");
  return count_le(sources_, v.x) + h_left_.count(v.y, v.x) -
         h_right_corner_.count(v.y, v.x);
}

long HeightIndex::query_dual(Point v) const {
  if (!box_.contains(v)) throw std::domain_error("height: point outside box");
  return count_le(sinks_, v.y) + v_low_.count(v.x, v.y) -
         v_high_corner_.count(v.x, v.y);
}

double mean_function(Point v, double lambda, double t) {
  if (!(lambda > 0.0)) throw std::invalid_argument("mean_function: lambda must be positive");
  if (!(t >= 0.0 && t < 1.0)) throw std::invalid_argument("mean_function: t outside [0,1)");
  return v.x * lambda + v.y / (lambda * (1.0 - t));
}

double char_lambda(Point v, double t) {
  if (!(v.x > 0.0 && v.y > 0.0))
    throw std::domain_error("char_lambda: direction must be interior");
  if (!(t >= 0.0 && t < 1.0)) throw std::invalid_argument("char_lambda: t outside [0,1)");
  return std::sqrt(v.y / (v.x * (1.0 - t)));
}

double shape(Point v, double t) {
  if (!(v.x >= 0.0 && v.y >= 0.0))
    throw std::domain_error("shape: direction must be in the closed quadrant");
  if (!(t >= 0.0 && t < 1.0)) throw std::invalid_argument("shape: t outside [0,1)");
  return 2.0 * std::sqrt(v.x * v.y / (1.0 - t));
}

double one_sided_limit(Point v, double lambda, double t) {
  if (!(lambda > 0.0)) throw std::invalid_argument("one_sided_limit: lambda must be positive");
  if (v.y / v.x >= lambda * lambda * (1.0 - t)) return shape(v, t);
  return mean_function(v, lambda, t);
}

} // namespace tpng
