#include "tpng/sweep.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "tpng/sampling.hpp"

namespace tpng {

void ActiveFront::insert(double x, int vertical_index) {
  auto [it, fresh] = by_x.emplace(x, vertical_index);
  (void)it;
  if (!fresh)
    throw std::runtime_error("active front: duplicate abscissa (measure-zero tie)");
}

RayResolution resolve_horizontal_ray(ActiveFront& front, double start_x, double t,
                                     std::uint64_t origin_id, const CoinFn& coin_u) {
  RayResolution r;
  auto it = front.by_x.upper_bound(start_x);
  while (it != front.by_x.end()) {
    const double u = coin_u(origin_id, r.coins);
    ++r.coins;
    if (u < 1.0 - t) {
      r.corner_x = it->first;
      r.corner_vertical = it->second;
      front.by_x.erase(it);
      return r;
    }
    r.crossed.push_back(it->second);
    ++it;
  }
  return r;
}

namespace {

void check_distinct_sorted(const std::vector<double>& v, const char* what) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i - 1] < v[i])) {
      throw std::invalid_argument(std::string("geometry: ") + what +
                                  " not strictly increasing (measure-zero tie)");
    }
  }
}

struct RayEvent {
  double y;
  bool from_sink;
  int index; // into sinks or bulk
};

} // namespace

Diagram build_from_geometry(const ModelParams& params, std::vector<double> sources,
                            std::vector<double> sinks, std::vector<Point> bulk,
                            const CoinFn& coin_u) {
  params.check();
  check_distinct_sorted(sources, "source abscissas");
  check_distinct_sorted(sinks, "sink ordinates");
  {
    std::vector<double> ords;
    ords.reserve(sinks.size() + bulk.size());
    for (double y : sinks) ords.push_back(y);
    for (const auto& p : bulk) ords.push_back(p.y);
    std::sort(ords.begin(), ords.end());
    check_distinct_sorted(ords, "ray ordinates");
  }

  Diagram d;
  d.params = params;
  d.sources = std::move(sources);
  d.sinks = std::move(sinks);
  d.bulk = std::move(bulk);

  const int ns = static_cast<int>(d.sources.size());
  const int nk = static_cast<int>(d.sinks.size());
  const int nb = static_cast<int>(d.bulk.size());

  // Dense origin ids in sampling order: sources, then sinks, then bulk.
  const auto source_id = [](int i) { return i; };
  const auto sink_id = [ns](int i) { return ns + i; };
  const auto bulk_id = [ns, nk](int i) { return ns + nk + i; };

  d.verticals.reserve(static_cast<std::size_t>(ns + nb));
  d.horizontals.reserve(static_cast<std::size_t>(nk + nb));

  ActiveFront front;
  for (int i = 0; i < ns; ++i) {
    VerticalSeg s;
    s.x = d.sources[i];
    s.y_lo = 0.0;
    s.origin_id = source_id(i);
    s.lower = OriginKind::source;
    front.insert(s.x, static_cast<int>(d.verticals.size()));
    d.verticals.push_back(s);
  }

  std::vector<RayEvent> events;
  events.reserve(static_cast<std::size_t>(nk + nb));
  for (int i = 0; i < nk; ++i) events.push_back({d.sinks[i], true, i});
  for (int i = 0; i < nb; ++i) events.push_back({d.bulk[i].y, false, i});
  std::sort(events.begin(), events.end(),
            [](const RayEvent& a, const RayEvent& b) { return a.y < b.y; });

  for (const auto& ev : events) {
    const double y0 = ev.y;
    const double x0 = ev.from_sink ? 0.0 : d.bulk[ev.index].x;
    const int oid = ev.from_sink ? sink_id(ev.index) : bulk_id(ev.index);

    const int h_index = static_cast<int>(d.horizontals.size());
    auto res = resolve_horizontal_ray(front, x0, params.t,
                                      static_cast<std::uint64_t>(oid), coin_u);
    d.coins_drawn += res.coins;

    for (int v : res.crossed)
      d.vertices.push_back(
          Vertex{Point{d.verticals[v].x, y0}, VertexKind::crossing, v, h_index});

    HorizontalSeg h;
    h.y = y0;
    h.x_lo = x0;
    h.origin_id = oid;
    h.left = ev.from_sink ? OriginKind::sink : OriginKind::bulk;
    if (res.corner_x) {
      h.x_hi = *res.corner_x;
      h.right = EndKind::corner;
      auto& closed = d.verticals[*res.corner_vertical];
      closed.y_hi = y0;
      closed.upper = EndKind::corner;
      d.vertices.push_back(Vertex{Point{*res.corner_x, y0}, VertexKind::corner,
                                  *res.corner_vertical, h_index});
    } else {
      h.x_hi = params.box.width;
      h.right = EndKind::exit;
      ++d.exits_right;
    }
    d.horizontals.push_back(h);

    if (!ev.from_sink) {
      VerticalSeg s;
      s.x = x0;
      s.y_lo = y0;
      s.origin_id = oid;
      s.lower = OriginKind::bulk;
      const int v_index = static_cast<int>(d.verticals.size());
      front.insert(x0, v_index);
      d.verticals.push_back(s);
      d.vertices.push_back(
          Vertex{Point{x0, y0}, VertexKind::nucleation, v_index, h_index});
    }
  }

  for (auto& [x, v] : front.by_x) {
    (void)x;
    d.verticals[v].y_hi = params.box.height;
    d.verticals[v].upper = EndKind::exit;
    ++d.exits_top;
  }

  return d;
}

Diagram build_diagram(const ModelParams& params) {
  params.check();
  auto streams = RngStreams::from_master(params.seed);
  auto sources = sample_poisson_1d(params.source_rate, params.box.width, streams.geometry);
  auto sinks = sample_poisson_1d(params.sink_rate, params.box.height, streams.geometry);
  auto bulk = sample_poisson_2d(params.bulk_intensity, params.box, streams.geometry);
  const CoinOracle oracle(derive_seed(params.seed, stream_key::interaction));
  const CoinFn coins = [&oracle](std::uint64_t origin, std::uint64_t ordinal) {
    return oracle.uniform_at(origin, ordinal);
  };
  return build_from_geometry(params, std::move(sources), std::move(sinks),
                             std::move(bulk), coins);
}

std::vector<Trajectory> extract_trajectories(const Diagram& d) {
  // Corner linkage: vertical index -> horizontal it hands over to.
  std::vector<int> corner_h(d.verticals.size(), -1);
  for (const auto& v : d.vertices)
    if (v.kind == VertexKind::corner) corner_h[v.vertical] = v.horizontal;

  // Nucleation linkage: bulk origin id -> vertical born there.
  std::unordered_map<int, int> vertical_of_origin;
  for (int i = 0; i < static_cast<int>(d.verticals.size()); ++i)
    if (d.verticals[i].lower == OriginKind::bulk)
      vertical_of_origin[d.verticals[i].origin_id] = i;

  std::vector<Trajectory> out;

  auto follow_verticals = [&](Trajectory& t, int v_index) {
    for (;;) {
      const auto& v = d.verticals[v_index];
      t.verticals.push_back(v_index);
      t.points.push_back(Point{v.x, v.y_hi});
      if (v.upper == EndKind::exit) {
        t.terminus = Trajectory::Terminus::top_edge;
        t.end = Point{v.x, v.y_hi};
        return;
      }
      const int h_index = corner_h[v_index];
      const auto& h = d.horizontals[h_index];
      t.horizontals.push_back(h_index);
      t.points.push_back(Point{h.x_lo, h.y});
      if (h.left == OriginKind::sink) {
        t.terminus = Trajectory::Terminus::left_edge;
        t.end = Point{0.0, h.y};
        return;
      }
      v_index = vertical_of_origin.at(h.origin_id);
    }
  };

  for (int i = 0; i < static_cast<int>(d.verticals.size()); ++i) {
    const auto& v = d.verticals[i];
    if (v.lower != OriginKind::source) continue;
    Trajectory t;
    t.origin_kind = OriginKind::source;
    t.origin = Point{v.x, 0.0};
    t.points.push_back(t.origin);
    follow_verticals(t, i);
    out.push_back(std::move(t));
  }

  for (int j = 0; j < static_cast<int>(d.horizontals.size()); ++j) {
    const auto& h = d.horizontals[j];
    if (h.right != EndKind::exit) continue;
    Trajectory t;
    t.horizontals.push_back(j);
    t.points.push_back(Point{h.x_hi, h.y});
    t.points.push_back(Point{h.x_lo, h.y});
    if (h.left == OriginKind::sink) {
      t.origin_kind = OriginKind::sink;
      t.origin = Point{0.0, h.y};
      t.terminus = Trajectory::Terminus::left_edge;
      t.end = t.origin;
    } else {
      t.origin_kind = OriginKind::bulk;
      t.origin = Point{h.x_lo, h.y};
      follow_verticals(t, vertical_of_origin.at(h.origin_id));
    }
    out.push_back(std::move(t));
  }

  return out;
}

} // namespace tpng
