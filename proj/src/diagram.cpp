#include "tpng/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace tpng {

namespace {

std::string describe(const char* what, int index, double a, double b) {
  std::ostringstream os;
  os << what << " #" << index << " at (" << a << ", " << b << ")";
  return os.str();
}

bool close_pt(Point p, double x, double y) { return p.x == x && p.y == y; }

} // namespace

std::vector<Violation> validate_diagram(const Diagram& d) {
  std::vector<Violation> out;
  const Box& box = d.box();
  auto flag = [&out](std::string s) { out.push_back(Violation{std::move(s)}); };

  if (!std::is_sorted(d.sources.begin(), d.sources.end()))
    flag("sources not sorted");
  if (!std::is_sorted(d.sinks.begin(), d.sinks.end()))
    flag("sinks not sorted");
  if (!std::is_sorted(d.bulk.begin(), d.bulk.end(),
                      [](Point a, Point b) { return a.y < b.y; }))
    flag("bulk points not sorted by ordinate");
  for (std::size_t i = 1; i < d.bulk.size(); ++i)
    if (d.bulk[i].y == d.bulk[i - 1].y)
      flag(describe("duplicate bulk ordinate at point", static_cast<int>(i),
                    d.bulk[i].x, d.bulk[i].y));

  // Index vertices by position and kind for endpoint matching.
  std::map<std::pair<double, double>, const Vertex*> corner_at;
  int n_corner = 0, n_crossing = 0;
  for (const auto& v : d.vertices) {
    if (v.kind == VertexKind::corner) {
      ++n_corner;
      corner_at[{v.at.x, v.at.y}] = &v;
    } else if (v.kind == VertexKind::crossing) {
      ++n_crossing;
    }
  }

  auto is_source = [&d](double x) {
    return std::binary_search(d.sources.begin(), d.sources.end(), x);
  };
  auto is_sink = [&d](double y) {
    return std::binary_search(d.sinks.begin(), d.sinks.end(), y);
  };
  auto is_bulk = [&d](double x, double y) {
    for (const auto& p : d.bulk)
      if (close_pt(p, x, y)) return true;
    return false;
  };

  int vi = 0;
  for (const auto& s : d.verticals) {
    if (!(s.y_lo < s.y_hi) || s.x < 0 || s.x > box.width || s.y_lo < 0 ||
        s.y_hi > box.height)
      flag(describe("vertical with bad extent", vi, s.x, s.y_lo));
    switch (s.lower) {
      case OriginKind::source:
        if (s.y_lo != 0.0 || !is_source(s.x))
          flag(describe("vertical lower end claims source", vi, s.x, s.y_lo));
        break;
      case OriginKind::bulk:
        if (!is_bulk(s.x, s.y_lo))
          flag(describe("vertical lower end claims nucleation", vi, s.x, s.y_lo));
        break;
      case OriginKind::sink:
        flag(describe("vertical cannot originate on the left edge", vi, s.x, s.y_lo));
        break;
    }
    if (s.upper == EndKind::exit) {
      if (s.y_hi != box.height)
        flag(describe("vertical exit not on top edge", vi, s.x, s.y_hi));
    } else if (!corner_at.count({s.x, s.y_hi})) {
      flag(describe("vertical corner end without corner vertex", vi, s.x, s.y_hi));
    }
    ++vi;
  }

  int hi = 0;
  for (const auto& s : d.horizontals) {
    if (!(s.x_lo < s.x_hi) || s.y < 0 || s.y > box.height || s.x_lo < 0 ||
        s.x_hi > box.width)
      flag(describe("horizontal with bad extent", hi, s.x_lo, s.y));
    switch (s.left) {
      case OriginKind::sink:
        if (s.x_lo != 0.0 || !is_sink(s.y))
          flag(describe("horizontal left end claims sink", hi, s.x_lo, s.y));
        break;
      case OriginKind::bulk:
        if (!is_bulk(s.x_lo, s.y))
          flag(describe("horizontal left end claims nucleation", hi, s.x_lo, s.y));
        break;
      case OriginKind::source:
        flag(describe("horizontal cannot originate on the bottom edge", hi, s.x_lo, s.y));
        break;
    }
    if (s.right == EndKind::exit) {
      if (s.x_hi != box.width)
        flag(describe("horizontal exit not on right edge", hi, s.x_hi, s.y));
    } else if (!corner_at.count({s.x_hi, s.y})) {
      flag(describe("horizontal corner end without corner vertex", hi, s.x_hi, s.y));
    }
    ++hi;
  }

  // Vertex-side consistency.
  int seen_top_exits = 0, seen_right_exits = 0;
  for (const auto& s : d.verticals)
    if (s.upper == EndKind::exit) ++seen_top_exits;
  for (const auto& s : d.horizontals)
    if (s.right == EndKind::exit) ++seen_right_exits;

  int xi = 0;
  for (const auto& v : d.vertices) {
    switch (v.kind) {
      case VertexKind::corner: {
        const bool v_ok = v.vertical >= 0 &&
                          v.vertical < static_cast<int>(d.verticals.size()) &&
                          d.verticals[v.vertical].x == v.at.x &&
                          d.verticals[v.vertical].y_hi == v.at.y &&
                          d.verticals[v.vertical].upper == EndKind::corner;
        const bool h_ok = v.horizontal >= 0 &&
                          v.horizontal < static_cast<int>(d.horizontals.size()) &&
                          d.horizontals[v.horizontal].y == v.at.y &&
                          d.horizontals[v.horizontal].x_hi == v.at.x &&
                          d.horizontals[v.horizontal].right == EndKind::corner;
        if (!v_ok || !h_ok)
          flag(describe("corner vertex not matching segment ends", xi, v.at.x, v.at.y));
        break;
      }
      case VertexKind::crossing: {
        bool ok = v.vertical >= 0 && v.horizontal >= 0 &&
                  v.vertical < static_cast<int>(d.verticals.size()) &&
                  v.horizontal < static_cast<int>(d.horizontals.size());
        if (ok) {
          const auto& vs = d.verticals[v.vertical];
          const auto& hs = d.horizontals[v.horizontal];
          ok = vs.x == v.at.x && hs.y == v.at.y && vs.y_lo < v.at.y &&
               v.at.y < vs.y_hi && hs.x_lo < v.at.x && v.at.x < hs.x_hi;
        }
        if (ok && d.params.t == 0.0)
          flag(describe("crossing vertex in a t=0 diagram", xi, v.at.x, v.at.y));
        if (!ok)
          flag(describe("crossing vertex not interior to both segments", xi, v.at.x,
                        v.at.y));
        break;
      }
      case VertexKind::nucleation:
        if (!is_bulk(v.at.x, v.at.y))
          flag(describe("nucleation vertex off the bulk set", xi, v.at.x, v.at.y));
        break;
      case VertexKind::scp_swap:
        // Swap marks belong to coupling layers; in a plain diagram they are noise.
        flag(describe("swap vertex in a plain diagram", xi, v.at.x, v.at.y));
        break;
    }
    ++xi;
  }

  if (seen_top_exits != d.exits_top)
    flag("exits_top does not match vertical segments");
  if (seen_right_exits != d.exits_right)
    flag("exits_right does not match horizontal segments");

  const long nb = static_cast<long>(d.bulk.size());
  const long ns = static_cast<long>(d.sources.size());
  const long nk = static_cast<long>(d.sinks.size());
  if (nb + ns - d.exits_top != n_corner)
    flag("flux conservation fails on the vertical family");
  if (nb + nk - d.exits_right != n_corner)
    flag("flux conservation fails on the horizontal family");

  if (static_cast<long>(d.verticals.size()) != ns + nb)
    flag("vertical segment count does not match entries");
  if (static_cast<long>(d.horizontals.size()) != nk + nb)
    flag("horizontal segment count does not match entries");
  (void)n_crossing;

  return out;
}

bool conservation_holds(const Diagram& d) {
  const long nb = static_cast<long>(d.bulk.size());
  const long ns = static_cast<long>(d.sources.size());
  const long nk = static_cast<long>(d.sinks.size());
  const long c = d.corners();
  return nb + ns - d.exits_top == c && nb + nk - d.exits_right == c;
}

std::vector<double> slice(const Diagram& d, double tau) {
  if (tau < 0.0 || tau > d.box().height)
    throw std::domain_error("slice: ordinate outside box");
  std::vector<double> xs;
  for (const auto& s : d.verticals)
    if (Diagram::covers_y(s, tau)) xs.push_back(s.x);
  std::sort(xs.begin(), xs.end());
  return xs;
}

std::vector<double> coslice(const Diagram& d, double tau) {
  if (tau < 0.0 || tau > d.box().width)
    throw std::domain_error("coslice: abscissa outside box");
  std::vector<double> ys;
  for (const auto& s : d.horizontals)
    if (Diagram::covers_x(s, tau)) ys.push_back(s.y);
  std::sort(ys.begin(), ys.end());
  return ys;
}

RectFlux rect_flux(const Diagram& d, Point corner_lo, Point corner_hi) {
  if (!(corner_lo.x <= corner_hi.x && corner_lo.y <= corner_hi.y))
    throw std::invalid_argument("rect_flux: corners not ordered");
  RectFlux f;
  for (const auto& s : d.verticals) {
    if (s.x > corner_lo.x && s.x <= corner_hi.x && Diagram::covers_y(s, corner_lo.y))
      ++f.vertical_in;
  }
  for (const auto& s : d.horizontals) {
    // A left endpoint sitting exactly on the right side contributes nothing
    // to the height increment along that side, so it is skipped.
    if (s.y > corner_lo.y && s.y <= corner_hi.y && s.x_lo < corner_hi.x &&
        Diagram::covers_x(s, corner_hi.x))
      ++f.horizontal_in;
  }
  return f;
}

} // namespace tpng
