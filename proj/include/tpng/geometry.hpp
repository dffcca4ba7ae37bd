#pragma once

#include <cstdint>
#include <stdexcept>

namespace tpng {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

/** Axis-aligned window [0,width] x [0,height]. */
struct Box {
  double width = 0.0;
  double height = 0.0;

  bool contains(Point p) const {
    return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height;
  }
  friend bool operator==(const Box&, const Box&) = default;
};

/**
 * Growth-model parameters: crossing probability t, boundary rates for the
 * bottom (source_rate) and left (sink_rate) edges, bulk intensity, window
 * and master seed.
 */
struct ModelParams {
  double t = 0.0;
  double source_rate = 0.0;
  double sink_rate = 0.0;
  double bulk_intensity = 1.0;
  Box box;
  std::uint64_t seed = 0;

  void check() const {
    if (!(t >= 0.0 && t < 1.0)) throw std::invalid_argument("params: t must lie in [0,1)");
    if (source_rate < 0.0 || sink_rate < 0.0 || bulk_intensity < 0.0)
      throw std::invalid_argument("params: rates must be nonnegative");
    if (!(box.width > 0.0 && box.height > 0.0))
      throw std::invalid_argument("params: box must have positive extent");
  }

  /** Stationary boundary rates for a given characteristic density. */
  static ModelParams stationary(double lambda, double t, Box box, std::uint64_t seed) {
    ModelParams p;
    p.t = t;
    p.source_rate = lambda;
    p.sink_rate = 1.0 / (lambda * (1.0 - t));
    p.box = box;
    p.seed = seed;
    return p;
  }

  /** Sources only, empty left boundary. */
  static ModelParams one_sided(double lambda, double t, Box box, std::uint64_t seed) {
    ModelParams p;
    p.t = t;
    p.source_rate = lambda;
    p.sink_rate = 0.0;
    p.box = box;
    p.seed = seed;
    return p;
  }
};

} // namespace tpng
