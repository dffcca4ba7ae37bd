#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tpng/geometry.hpp"

namespace tpng {

enum class OriginKind : std::uint8_t { source, sink, bulk };
enum class EndKind : std::uint8_t { corner, exit };
enum class VertexKind : std::uint8_t { corner, crossing, nucleation, scp_swap };

/** Up-ray piece: abscissa x, alive on [y_lo, y_hi]. */
struct VerticalSeg {
  double x = 0.0;
  double y_lo = 0.0;
  double y_hi = 0.0;
  int origin_id = -1;
  OriginKind lower = OriginKind::bulk; // what sits at (x, y_lo)
  EndKind upper = EndKind::exit;       // corner or top-edge exit at (x, y_hi)
};

/** Right-ray piece: ordinate y, spanning [x_lo, x_hi]. */
struct HorizontalSeg {
  double y = 0.0;
  double x_lo = 0.0;
  double x_hi = 0.0;
  int origin_id = -1;
  OriginKind left = OriginKind::bulk; // what sits at (x_lo, y)
  EndKind right = EndKind::exit;      // corner or right-edge exit at (x_hi, y)
};

/**
 * Meeting point of rays. `vertical` / `horizontal` index into the owning
 * diagram's segment vectors where applicable (-1 otherwise).
 */
struct Vertex {
  Point at;
  VertexKind kind = VertexKind::corner;
  int vertical = -1;
  int horizontal = -1;
};

/**
 * A realized ray arrangement on a box: boundary entries, bulk nucleations,
 * the ray segments they generate, and every resolved meeting.
 */
struct Diagram {
  ModelParams params;
  std::vector<double> sources; // bottom-edge abscissas, ascending
  std::vector<double> sinks;   // left-edge ordinates, ascending
  std::vector<Point> bulk;     // nucleations, ascending ordinate
  std::vector<VerticalSeg> verticals;
  std::vector<HorizontalSeg> horizontals;
  std::vector<Vertex> vertices;
  int exits_top = 0;
  int exits_right = 0;
  std::uint64_t coins_drawn = 0;

  const Box& box() const { return params.box; }

  int count(VertexKind k) const {
    int n = 0;
    for (const auto& v : vertices)
      if (v.kind == k) ++n;
    return n;
  }
  int corners() const { return count(VertexKind::corner); }
  int crossings() const { return count(VertexKind::crossing); }

  /** Does this vertical cover ordinate y, counting a top exit as open-ended? */
  static bool covers_y(const VerticalSeg& s, double y) {
    if (y < s.y_lo) return false;
    return y < s.y_hi || s.upper == EndKind::exit;
  }
  /** Does this horizontal cover abscissa x, counting a right exit as open-ended? */
  static bool covers_x(const HorizontalSeg& s, double x) {
    if (x < s.x_lo) return false;
    return x < s.x_hi || s.right == EndKind::exit;
  }
};

struct Violation {
  std::string what;
};

/**
 * Structural audit. Returns an empty vector for a well-formed diagram;
 * otherwise one entry per failed invariant (segment endpoints, vertex
 * pairings, flux conservation, t = 0 crossing ban).
 */
std::vector<Violation> validate_diagram(const Diagram& d);

/** Abscissas of verticals alive at ordinate tau (right-continuous), ascending. */
std::vector<double> slice(const Diagram& d, double tau);

/** Ordinates of horizontals covering abscissa tau (right-continuous), ascending. */
std::vector<double> coslice(const Diagram& d, double tau);

/** #bulk + #sources - exits_top == #corners == #bulk + #sinks - exits_right */
bool conservation_holds(const Diagram& d);

/**
 * Vertical / horizontal counts crossing the lower and right sides of the
 * rectangle spanned by two staircase points, with the conventions that make
 * height increments telescope: the lower-left corner's own column is
 * excluded, and segments ending exactly on a side do not count.
 */
struct RectFlux {
  long vertical_in = 0;   // across the bottom side
  long horizontal_in = 0; // across the right side
};

RectFlux rect_flux(const Diagram& d, Point corner_lo, Point corner_hi);

} // namespace tpng
