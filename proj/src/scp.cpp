#include "tpng/scp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "tpng/rng.hpp"
#include "tpng/sampling.hpp"

namespace tpng {

const ScpPath& ScpLayer::path_of(int label) const {
  for (const auto& p : paths)
    if (p.label == label) return p;
  throw std::domain_error("no particle labeled " + std::to_string(label));
}

bool ScpLayer::has_label(int label) const {
  for (const auto& p : paths)
    if (p.label == label) return true;
  return false;
}

namespace {

// One vertical stretch at a fixed abscissa, either a base segment or a
// particle run. Stretches at a common abscissa always stack end to end.
struct Piece {
  double y_lo = 0.0;
  double y_hi = 0.0;
  int base_vertical = -1; // index into base.verticals, -1 for a particle run
};

int origin_of_source(const Diagram& d, double x) {
  auto it = std::lower_bound(d.sources.begin(), d.sources.end(), x);
  if (it == d.sources.end() || *it != x) throw std::logic_error("source lookup failed");
  return static_cast<int>(it - d.sources.begin());
}

int origin_of_sink(const Diagram& d, double y) {
  auto it = std::lower_bound(d.sinks.begin(), d.sinks.end(), y);
  if (it == d.sinks.end() || *it != y) throw std::logic_error("sink lookup failed");
  return static_cast<int>(d.sources.size()) + static_cast<int>(it - d.sinks.begin());
}

int origin_of_bulk(const Diagram& d, double y) {
  auto it = std::lower_bound(d.bulk.begin(), d.bulk.end(), y,
                             [](const Point& p, double v) { return p.y < v; });
  if (it == d.bulk.end() || it->y != y) throw std::logic_error("bulk lookup failed");
  return static_cast<int>(d.sources.size() + d.sinks.size()) +
         static_cast<int>(it - d.bulk.begin());
}

} // namespace

ScpLayer build_layer(const Diagram& base, const std::vector<double>& extra_sources,
                     const std::vector<double>& dropped_sinks, const CoinFn& coin_u) {
  const Box box = base.box();
  ScpLayer layer;
  layer.t = base.params.t;

  std::vector<ScpPath>& paths = layer.paths;
  std::map<double, int> front;      // abscissa -> index of the particle moving up there
  std::map<double, int> left_entry; // sink ordinate -> particle index, waiting to enter

  for (std::size_t i = 0; i < extra_sources.size(); ++i) {
    const double x = extra_sources[i];
    if (i > 0 && extra_sources[i - 1] >= x)
      throw std::invalid_argument("extra sources must be sorted and distinct");
    ScpPath p;
    p.label = static_cast<int>(i) + 1;
    p.entry_kind = OriginKind::source;
    p.entry = {x, 0.0};
    p.points.push_back(p.entry);
    if (!front.emplace(x, static_cast<int>(paths.size())).second)
      throw std::invalid_argument("duplicate extra source abscissa");
    paths.push_back(std::move(p));
  }
  for (std::size_t i = 0; i < dropped_sinks.size(); ++i) {
    const double y = dropped_sinks[i];
    if (i > 0 && dropped_sinks[i - 1] >= y)
      throw std::invalid_argument("dropped sinks must be sorted and distinct");
    if (!std::binary_search(base.sinks.begin(), base.sinks.end(), y))
      throw std::invalid_argument("dropped sink not present in base");
    ScpPath p;
    p.label = -static_cast<int>(i);
    p.entry_kind = OriginKind::sink;
    p.entry = {0.0, y};
    p.points.push_back(p.entry);
    left_entry.emplace(y, static_cast<int>(paths.size()));
    paths.push_back(std::move(p));
  }

  const std::size_t nh = base.horizontals.size();
  std::vector<int> h_order(nh);
  for (std::size_t i = 0; i < nh; ++i) h_order[i] = static_cast<int>(i);
  std::sort(h_order.begin(), h_order.end(),
            [&](int a, int b) { return base.horizontals[a].y < base.horizontals[b].y; });

  constexpr double never = std::numeric_limits<double>::infinity();
  std::vector<double> mount_x(nh, never);   // where a particle boarded mid-segment
  std::vector<char> rode_from_start(nh, 0); // ridden over its full length
  std::vector<std::vector<Point>> pass_points(nh);

  for (int hi : h_order) {
    const HorizontalSeg& H = base.horizontals[hi];
    const bool corner_end = H.right == EndKind::corner;
    const double x_end = corner_end ? H.x_hi : box.width;
    std::uint64_t ordinal = 0;

    std::optional<int> rider;
    if (H.left == OriginKind::sink) {
      auto le = left_entry.find(H.y);
      if (le != left_entry.end()) {
        rider = le->second;
        left_entry.erase(le);
        rode_from_start[hi] = 1;
      }
    }

    auto it = front.upper_bound(H.x_lo);
    while (it != front.end() && it->first < x_end) {
      const double a = it->first;
      const int p = it->second;
      if (rider) {
        if (paths[p].label != paths[*rider].label + 1)
          throw std::logic_error("non-adjacent particles met");
        layer.swaps.push_back({{a, H.y}, paths[*rider].label});
        paths[*rider].points.push_back({a, H.y});
        paths[p].points.push_back({a, H.y});
        it->second = *rider; // the arriving particle turns upward here
        rider = p;           // the waiting one takes over the ride
        ++it;
      } else {
        const double u = coin_u(static_cast<std::uint64_t>(H.origin_id), ordinal++);
        ++layer.coins_drawn;
        if (u < 1.0 - layer.t) {
          paths[p].points.push_back({a, H.y});
          rider = p;
          mount_x[hi] = a;
          it = front.erase(it);
        } else {
          pass_points[hi].push_back({a, H.y});
          ++it;
        }
      }
    }

    if (rider) {
      if (corner_end) {
        paths[*rider].points.push_back({H.x_hi, H.y});
        if (!front.emplace(H.x_hi, *rider).second)
          throw std::logic_error("two particles at one abscissa");
      } else {
        paths[*rider].points.push_back({box.width, H.y});
        paths[*rider].exit_kind = ScpPath::Exit::right;
        paths[*rider].exit = {box.width, H.y};
      }
    }
  }

  if (!left_entry.empty()) throw std::logic_error("left entry never swept");

  for (const auto& [x, p] : front) {
    paths[p].points.push_back({x, box.height});
    paths[p].exit_kind = ScpPath::Exit::top;
    paths[p].exit = {x, box.height};
  }

  std::sort(paths.begin(), paths.end(),
            [](const ScpPath& a, const ScpPath& b) { return a.label < b.label; });

  // ---- assemble the enlarged diagram ----
  Diagram& psi = layer.psi;
  psi.params = base.params;

  psi.sources = base.sources;
  psi.sources.insert(psi.sources.end(), extra_sources.begin(), extra_sources.end());
  std::sort(psi.sources.begin(), psi.sources.end());
  for (std::size_t i = 1; i < psi.sources.size(); ++i)
    if (psi.sources[i - 1] >= psi.sources[i])
      throw std::invalid_argument("extra source collides with a base source");

  std::set_difference(base.sinks.begin(), base.sinks.end(), dropped_sinks.begin(),
                      dropped_sinks.end(), std::back_inserter(psi.sinks));
  psi.bulk = base.bulk;

  std::map<double, std::vector<Piece>> columns;
  for (std::size_t i = 0; i < base.verticals.size(); ++i) {
    const VerticalSeg& v = base.verticals[i];
    columns[v.x].push_back({v.y_lo, v.y_hi, static_cast<int>(i)});
  }
  for (const ScpPath& p : paths)
    for (std::size_t j = 0; j + 1 < p.points.size(); ++j)
      if (p.points[j].x == p.points[j + 1].x)
        columns[p.points[j].x].push_back({p.points[j].y, p.points[j + 1].y, -1});

  std::map<double, int> column_index; // abscissa -> psi vertical index
  for (auto& [x, pieces] : columns) {
    std::sort(pieces.begin(), pieces.end(),
              [](const Piece& a, const Piece& b) { return a.y_lo < b.y_lo; });
    for (std::size_t k = 1; k < pieces.size(); ++k)
      if (pieces[k - 1].y_hi != pieces[k].y_lo)
        throw std::logic_error("vertical stretches do not stack");

    VerticalSeg seg;
    seg.x = x;
    seg.y_lo = pieces.front().y_lo;
    seg.y_hi = pieces.back().y_hi;
    if (pieces.front().base_vertical >= 0) {
      const VerticalSeg& bv = base.verticals[pieces.front().base_vertical];
      seg.lower = bv.lower;
    } else {
      if (seg.y_lo != 0.0) throw std::logic_error("particle run starts in midair");
      seg.lower = OriginKind::source;
    }
    seg.upper = seg.y_hi == box.height ? EndKind::exit : EndKind::corner;
    seg.origin_id = seg.lower == OriginKind::source ? origin_of_source(psi, x)
                                                    : origin_of_bulk(psi, seg.y_lo);
    column_index.emplace(x, static_cast<int>(psi.verticals.size()));
    psi.verticals.push_back(seg);
  }

  std::vector<int> h_map(nh, -1);
  for (std::size_t i = 0; i < nh; ++i) {
    if (rode_from_start[i]) continue; // erased together with its dropped sink
    const HorizontalSeg& H = base.horizontals[i];
    HorizontalSeg seg;
    seg.y = H.y;
    seg.x_lo = H.x_lo;
    seg.left = H.left;
    if (mount_x[i] != never) {
      seg.x_hi = mount_x[i];
      seg.right = EndKind::corner;
    } else {
      seg.x_hi = H.x_hi;
      seg.right = H.right;
    }
    seg.origin_id = seg.left == OriginKind::sink ? origin_of_sink(psi, H.y)
                                                 : origin_of_bulk(psi, H.y);
    h_map[i] = static_cast<int>(psi.horizontals.size());
    psi.horizontals.push_back(seg);
  }

  // vertices, horizontal by horizontal in base construction order
  std::vector<std::vector<Point>> base_cross(nh);
  for (const Vertex& v : base.vertices)
    if (v.kind == VertexKind::crossing) base_cross[v.horizontal].push_back(v.at);

  auto column_at = [&](double x) {
    auto it = column_index.find(x);
    if (it == column_index.end()) throw std::logic_error("no column at abscissa");
    return it->second;
  };

  for (std::size_t i = 0; i < nh; ++i) {
    if (h_map[i] < 0) continue;
    const HorizontalSeg& H = base.horizontals[i];
    const HorizontalSeg& kept = psi.horizontals[h_map[i]];
    std::vector<Point> crossings;
    for (const Point& c : base_cross[i])
      if (c.x < kept.x_hi) crossings.push_back(c);
    crossings.insert(crossings.end(), pass_points[i].begin(), pass_points[i].end());
    std::sort(crossings.begin(), crossings.end(),
              [](const Point& a, const Point& b) { return a.x < b.x; });
    for (const Point& c : crossings)
      psi.vertices.push_back({c, VertexKind::crossing, column_at(c.x), h_map[i]});

    if (kept.right == EndKind::corner) {
      const int vc = column_at(kept.x_hi);
      if (psi.verticals[vc].y_hi != H.y) throw std::logic_error("corner does not meet column top");
      psi.vertices.push_back({{kept.x_hi, H.y}, VertexKind::corner, vc, h_map[i]});
    }
    if (H.left == OriginKind::bulk) {
      const Point origin{H.x_lo, H.y};
      psi.vertices.push_back({origin, VertexKind::nucleation, column_at(origin.x), h_map[i]});
    }
  }

  for (const VerticalSeg& v : psi.verticals)
    if (v.upper == EndKind::exit) ++psi.exits_top;
  for (const HorizontalSeg& h : psi.horizontals)
    if (h.right == EndKind::exit) ++psi.exits_right;

  return layer;
}

CoupledPair couple_pair(const ModelParams& lower, const ModelParams& upper) {
  lower.check();
  upper.check();
  if (lower.box.width != upper.box.width || lower.box.height != upper.box.height ||
      lower.t != upper.t || lower.bulk_intensity != upper.bulk_intensity ||
      lower.seed != upper.seed)
    throw std::invalid_argument("coupled processes must share box, t, bulk intensity and seed");
  if (lower.source_rate > upper.source_rate || lower.sink_rate < upper.sink_rate)
    throw std::invalid_argument("coupling needs lower.source_rate <= upper.source_rate "
                                "and lower.sink_rate >= upper.sink_rate");

  Rng geom(derive_seed(lower.seed, stream_key::geometry));
  const std::vector<double> all_sources =
      sample_poisson_1d(upper.source_rate, lower.box.width, geom);
  const std::vector<double> all_sinks =
      sample_poisson_1d(lower.sink_rate, lower.box.height, geom);
  const std::vector<Point> bulk = sample_poisson_2d(lower.bulk_intensity, lower.box, geom);

  const double keep_src =
      upper.source_rate > 0.0 ? lower.source_rate / upper.source_rate : 1.0;
  Rng src_rng(derive_seed(lower.seed, stream_key::thin_sources));
  const auto src_marks = thin_marks(all_sources.size(), keep_src, src_rng);

  const double keep_snk = lower.sink_rate > 0.0 ? upper.sink_rate / lower.sink_rate : 1.0;
  Rng snk_rng(derive_seed(lower.seed, stream_key::thin_sinks));
  const auto snk_marks = thin_marks(all_sinks.size(), keep_snk, snk_rng);

  CoinOracle sweep_coins(derive_seed(lower.seed, stream_key::interaction));
  Diagram phi = build_from_geometry(
      lower, apply_marks(all_sources, src_marks, true), all_sinks, bulk,
      [&sweep_coins](std::uint64_t id, std::uint64_t ord) {
        return sweep_coins.uniform_at(id, ord);
      });

  CoinOracle layer_coins(derive_seed(lower.seed, stream_key::scp));
  ScpLayer layer = build_layer(
      phi, apply_marks(all_sources, src_marks, false), apply_marks(all_sinks, snk_marks, false),
      [&layer_coins](std::uint64_t id, std::uint64_t ord) {
        return layer_coins.uniform_at(id, ord);
      });
  layer.psi.params = upper;
  return {std::move(phi), std::move(layer)};
}

std::optional<double> tagged_position(const ScpLayer& layer, int label, double tau) {
  const ScpPath& p = layer.path_of(label);
  if (tau < p.entry.y) return std::nullopt;
  if (p.exit_kind == ScpPath::Exit::right && tau >= p.exit.y) return std::nullopt;
  return staircase_abscissa(p.points, tau);
}

double staircase_abscissa(const std::vector<Point>& points, double tau) {
  if (points.empty() || tau < points.front().y)
    throw std::invalid_argument("ordinate precedes the staircase");
  auto it = std::upper_bound(points.begin(), points.end(), tau,
                             [](double v, const Point& q) { return v < q.y; });
  return std::prev(it)->x;
}

std::vector<Meeting> meeting_sequence(const ScpLayer& layer) {
  std::vector<Meeting> ms;
  ms.reserve(layer.swaps.size());
  for (const SwapEvent& s : layer.swaps)
    ms.push_back({s.at.x * s.at.y, s.lower_label, s.at});
  std::sort(ms.begin(), ms.end(),
            [](const Meeting& a, const Meeting& b) { return a.sigma < b.sigma; });
  for (std::size_t i = 1; i < ms.size(); ++i)
    if (ms[i - 1].sigma == ms[i].sigma)
      throw std::runtime_error("coincident meeting parameters");
  return ms;
}

} // namespace tpng
