#pragma once

// Fixtures shared by the unit and acceptance tests.

#include <cmath>
#include <random>
#include <vector>

#include "geolab/curves.hpp"
#include "geolab/spaces.hpp"

namespace fixtures {

// Path 0 - 1 plus a side branch 0 - 2 - 3, with the unbounded ray at vertex 1.
inline geolab::Space ray_tree() {
  return geolab::Space::rtree(
      geolab::RTree(4, {{0, 1, 2.0}, {0, 2, 1.0}, {2, 3, 3.0}, {1, -1, 0.0}}));
}

// x_0 = (0, j_0), x_n = (2^(n-1), j_n) for n = 1..count with |j_n| <= b / 4.
inline std::vector<geolab::Point> jittered_ray(std::uint64_t seed, double b, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-b / 4.0, b / 4.0);
  std::vector<geolab::Point> pts{geolab::Point::euclidean({0.0, jitter(rng)})};
  for (int n = 1; n <= count; ++n) {
    pts.push_back(geolab::Point::euclidean({std::ldexp(1.0, n - 1), jitter(rng)}));
  }
  return pts;
}

inline constexpr double kTubeAmplitude = 0.3;
inline constexpr double kTubePeriod = 3.0;

// Bounded-tube perturbation of the imaginary axis.
inline geolab::Curve tube_curve(double t_max, double spacing) {
  return geolab::Curve::from_generator(geolab::Space::hyperbolic(),
                                       {"half_plane_tube", {kTubeAmplitude, kTubePeriod}},
                                       t_max, spacing);
}

// Euclidean ray along the x axis that opens with a unit-speed bump:
// (0,0) -> (1/2, sqrt(3)/2) -> (1,0), then (t - 1, 0). Directional with b = 1.
inline geolab::Curve bumped_ray() {
  using geolab::Point;
  return geolab::Curve(geolab::Space::euclidean(2),
                       {{0.0, Point::euclidean({0.0, 0.0})},
                        {1.0, Point::euclidean({0.5, std::sqrt(3.0) / 2.0})},
                        {2.0, Point::euclidean({1.0, 0.0})}},
                       geolab::CurveGenerator{"euclidean_ray", {-1.0, 0.0, 1.0, 0.0}});
}

// Unit-speed ray of the ray tree starting at vertex 0.
inline geolab::Curve tree_ray_curve(double t_max = 8.0) {
  return geolab::Curve::from_generator(ray_tree(), {"tree_ray", {0.0}}, t_max, 1.0);
}

}  // namespace fixtures
