#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "tpng/diagram.hpp"
#include "tpng/rng.hpp"

namespace tpng {

/**
 * Verticals currently alive during the upward sweep, keyed by abscissa.
 * Values index into the diagram's vertical vector under construction.
 */
struct ActiveFront {
  std::map<double, int> by_x;

  void insert(double x, int vertical_index);
  std::size_t size() const { return by_x.size(); }
};

/** Uniform-coin supply keyed by (ray origin id, contact ordinal). */
using CoinFn = std::function<double(std::uint64_t, std::uint64_t)>;

/** Outcome of running one right-ray through the front. */
struct RayResolution {
  std::optional<double> corner_x;     // stop abscissa; empty means exit right
  std::optional<int> corner_vertical; // vertical index the ray annihilated with
  std::vector<int> crossed;           // verticals passed through, left to right
  std::uint64_t coins = 0;
};

/**
 * Run a right-ray born at start_x through every active vertical to its
 * right. Each contact draws one coin: with probability 1-t the ray and the
 * vertical annihilate (the vertical leaves the front), with probability t
 * both survive and the ray continues.
 */
RayResolution resolve_horizontal_ray(ActiveFront& front, double start_x, double t,
                                     std::uint64_t origin_id, const CoinFn& coin_u);

/** Sample geometry from the seed's streams and sweep it into a diagram. */
Diagram build_diagram(const ModelParams& params);

/**
 * Sweep fixed geometry (used by couplings and by tests that script coins).
 * Inputs must be sorted; ordinates must be pairwise distinct across sinks
 * and bulk points, and source abscissas distinct, otherwise throws.
 */
Diagram build_from_geometry(const ModelParams& params, std::vector<double> sources,
                            std::vector<double> sinks, std::vector<Point> bulk,
                            const CoinFn& coin_u);

/** One maximal staircase of the particle picture, listed in time order. */
struct Trajectory {
  enum class Terminus { left_edge, top_edge };

  OriginKind origin_kind = OriginKind::bulk;
  Point origin;                 // generating entry: source (x,0), sink (0,y), or bulk point
  Terminus terminus = Terminus::top_edge;
  Point end;
  std::vector<Point> points;    // polyline from first to last visible point
  std::vector<int> verticals;   // segment indices in traversal order
  std::vector<int> horizontals;
};

/**
 * Chain segments into maximal staircases. Every trajectory starts at a
 * source, a nucleation, or a sink, and ends on the left or top edge; the
 * number returned equals #bulk + #sources + #sinks - #corners.
 */
std::vector<Trajectory> extract_trajectories(const Diagram& d);

} // namespace tpng
