#pragma once

// Gromov products, comparison triangles and angles, Rips slimness, the
// CAT(0) comparison defect and the Gromov-product criterion.

#include <array>
#include <vector>

#include "geolab/spaces.hpp"

namespace geolab {

using Triple = std::array<Point, 3>;

double gromov_product(const Space& space, const Point& x, const Point& y, const Point& z);

// Planar angle opposite side c in a triangle with sides a, b, c.
double comparison_angle_from_sides(double a, double b, double c);

double comparison_angle(const Space& space, const Point& apex, const Point& y,
                        const Point& z);

// Planar triangle with |x̄ȳ| = xy, |ȳz̄| = yz, |z̄x̄| = zx; x̄ at the origin,
// ȳ on the positive first axis, z̄ in the upper half.
struct ComparisonTriangle {
  double xy = 0.0;
  double yz = 0.0;
  double zx = 0.0;
  std::array<std::array<double, 2>, 3> vertex{};

  static ComparisonTriangle plant(double xy, double yz, double zx);

  // Point of side (i, i+1 mod 3) at fraction t from vertex i.
  std::array<double, 2> on_side(int side, double t) const;
};

double alexandrov_angle(const Space& space, const Point& apex, const Point& y,
                        const Point& z);

// Comparison angles at scales h, h/2, ... until successive values differ by
// less than tol.
double alexandrov_angle_by_scaling(const Space& space, const Point& apex, const Point& y,
                                   const Point& z, double tol = 1e-6, int max_halvings = 60);

struct SlimnessReport {
  double value = 0.0;
  Point witness;
  int side = 0;          // 0: [x,y], 1: [y,z], 2: [z,x]
  double witness_at = 0.0;  // distance of the witness from the side's first vertex
  int grid = 0;
};

SlimnessReport slim_defect(const Space& space, const Point& x, const Point& y, const Point& z,
                           int grid);

// The first `trials` triangles drawn from the sampler.
std::vector<Triple> sample_triangles(const Space& space, PointSampler& sampler, int trials);

double estimate_delta(const Space& space, PointSampler sampler, int trials, int grid = 32);

struct GromovWitness {
  int triple = 0;
  double level = 0.0;    // r = d(x, y') = d(x, z')
  double product = 0.0;  // (y|z)_x
  double distance = 0.0; // d(y', z')
};

struct GromovCriterionReport {
  double supremum = 0.0;
  double delta_prime = 0.0;
  int levels = 0;
  bool pass = true;
  // Worst level for each triple with a positive product.
  std::vector<GromovWitness> witnesses;
};

GromovCriterionReport check_gromov_criterion(const Space& space,
                                             const std::vector<Triple>& triples,
                                             double delta_prime, int levels = 64);

// max d(p, q) - |p̄ q̄| over interior side samples p, q on different sides.
double cat_defect(const Space& space, const Point& x, const Point& y, const Point& z, int grid);

// Max slimness of zigzag lambda-quasi-geodesic triangles built on the same
// sampled triangles as estimate_delta.
double estimate_quasi_slim_M(const Space& space, double lambda, PointSampler sampler,
                             int trials, int grid = 32);

}  // namespace geolab
