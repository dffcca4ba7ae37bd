#pragma once

#include <vector>

#include "tpng/diagram.hpp"

namespace tpng {

/**
 * Height at v: #{sources in [0, v.x]} plus #{horizontals with ordinate <= v.y
 * covering abscissa v.x}. Covering is right-continuous: a segment covers its
 * left endpoint but not its right one, and box-edge exits count as
 * open-ended. Queries landing exactly on segment endpoints follow the same
 * closed conventions; random geometry never produces them, fixtures exercise
 * them on purpose. Throws std::domain_error when v lies outside the box.
 */
long height(const Diagram& d, Point v);

/** Dual route: #{sinks in [0, v.y]} + #{verticals with abscissa <= v.x covering v.y}. */
long height_dual(const Diagram& d, Point v);

/** Static counting structure for many height queries on one diagram. */
class HeightIndex {
public:
  explicit HeightIndex(const Diagram& d);

  long query(Point v) const;      // primary decomposition
  long query_dual(Point v) const; // sink-side decomposition

private:
  struct DominanceCounter {
    // Entries (key, val); counts key <= K and val <= V in O(log^2 n).
    std::vector<double> keys; // ascending
    std::vector<std::vector<double>> tree;
    std::size_t leaves = 0;

    void build(std::vector<std::pair<double, double>> entries);
    long count(double key_max, double val_max) const;
  };

  Box box_;
  std::vector<double> sources_;
  std::vector<double> sinks_;
  DominanceCounter h_left_, h_right_corner_, v_low_, v_high_corner_;
};

/** Expected height per unit at direction v for boundary density lambda. */
double mean_function(Point v, double lambda, double t);

/** Density whose characteristic direction passes through v. */
double char_lambda(Point v, double t);

/** Limit shape along v with optimal boundary density. */
double shape(Point v, double t);

/**
 * Almost-sure limit of height(kv)/k for a sources-only system of density
 * lambda: the shape value in the supercritical cone v.y/v.x >= lambda^2(1-t),
 * the mean function below it.
 */
double one_sided_limit(Point v, double lambda, double t);

} // namespace tpng
