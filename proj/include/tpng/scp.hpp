#pragma once

#include <optional>
#include <vector>

#include "tpng/diagram.hpp"
#include "tpng/sweep.hpp"

namespace tpng {

/**
 * One discrepancy particle between a diagram and its enlarged partner.
 * Labels follow entry order: left-boundary entries take 0, -1, -2, ...
 * from bottom to top; bottom-boundary entries take 1, 2, ... left to right.
 */
struct ScpPath {
  int label = 0;
  OriginKind entry_kind = OriginKind::source; // source: bottom entry, sink: left entry
  Point entry;
  enum class Exit { top, right } exit_kind = Exit::top;
  Point exit;
  std::vector<Point> points; // staircase polyline, entry to exit, ordinates nondecreasing
};

/** Two adjacent particles trading directions at a single point. */
struct SwapEvent {
  Point at;
  int lower_label = 0; // arrived moving right, leaves moving up
};

/**
 * The discrepancy layer over a frozen base diagram, together with the
 * enlarged diagram it induces (base verticals extended along the particle
 * paths, base horizontals truncated at the first dismount... see build_layer).
 */
struct ScpLayer {
  double t = 0.0;
  std::vector<ScpPath> paths; // ascending label
  std::vector<SwapEvent> swaps;
  Diagram psi;
  std::uint64_t coins_drawn = 0;

  const ScpPath& path_of(int label) const;
  bool has_label(int label) const;
};

/**
 * Trace the discrepancy particles across the base diagram.
 *
 * extra_sources are bottom entries absent in the base; dropped_sinks must be
 * a subset of the base sinks and become left entries riding their horizontal
 * from the start. Particles move up and right. A particle crossing an
 * untouched base horizontal draws one coin from coin_u, keyed by the
 * horizontal's origin id and the contact ordinal along it: with probability
 * 1-t it boards and rides right, else it passes through. Riders leave the
 * horizontal only at its corner (continuing upward there) or at the right
 * edge; a rider meeting a vertically moving particle trades directions with
 * it at that single point (recorded as a swap). The enlarged diagram arises
 * by adding each particle's vertical runs and erasing the ridden horizontal
 * stretches.
 */
ScpLayer build_layer(const Diagram& base, const std::vector<double>& extra_sources,
                     const std::vector<double>& dropped_sinks, const CoinFn& coin_u);

/** Monotone pair sharing bulk and thinned boundaries, with its layer. */
struct CoupledPair {
  Diagram lower;
  ScpLayer layer;
};

/**
 * Sample a coupled pair: upper sources are drawn at the upper rate and
 * thinned down to the lower process, lower sinks are drawn at the lower
 * process's rate and thinned up. Both parameter sets must agree on box, t,
 * bulk intensity and seed; lower.source_rate <= upper.source_rate and
 * lower.sink_rate >= upper.sink_rate.
 */
CoupledPair couple_pair(const ModelParams& lower, const ModelParams& upper);

/**
 * Abscissa of the labeled particle at ordinate tau, right-continuous at
 * jumps. Empty before the particle enters and from the moment it leaves
 * through the right edge. Throws std::domain_error for an unknown label.
 */
std::optional<double> tagged_position(const ScpLayer& layer, int label, double tau);

/**
 * Abscissa of a monotone staircase polyline at ordinate tau, taking the last
 * listed point at tau on ties (right-continuous). tau must not precede the
 * first point.
 */
double staircase_abscissa(const std::vector<Point>& points, double tau);

/** Swap event in path-parameter order: sigma is the coordinate product. */
struct Meeting {
  double sigma = 0.0;
  int lower_label = 0;
  Point at;
};

/** Swaps sorted by sigma; throws if two events share a parameter value. */
std::vector<Meeting> meeting_sequence(const ScpLayer& layer);

} // namespace tpng
