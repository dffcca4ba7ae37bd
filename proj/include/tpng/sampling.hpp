#pragma once

#include <vector>

#include "tpng/geometry.hpp"
#include "tpng/rng.hpp"

namespace tpng {

/**
 * Poisson process of the given rate on [0, length]: a Poisson count followed
 * by that many uniforms, returned sorted. Zero rate or length gives an empty
 * vector.
 */
std::vector<double> sample_poisson_1d(double rate, double length, Rng& rng);

/** Homogeneous Poisson field on the box, returned in ascending ordinate. */
std::vector<Point> sample_poisson_2d(double intensity, const Box& box, Rng& rng);

/**
 * Independent keep-marks at the given probability. Returns one flag per
 * input point; callers split kept/dropped as needed.
 */
std::vector<bool> thin_marks(std::size_t n, double keep_prob, Rng& rng);

/** Kept subset of a sorted point list under thin_marks. */
std::vector<double> apply_marks(const std::vector<double>& pts,
                                const std::vector<bool>& keep, bool kept);

} // namespace tpng
