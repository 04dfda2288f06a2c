#pragma once

// Sampled curves, quasi-geodesic and directional checks, the local-to-global
// promotion constants, and geodesic-ray extraction.

#include <optional>
#include <string>
#include <vector>

#include "geolab/spaces.hpp"

namespace geolab {

struct CurveSample {
  double t = 0.0;
  Point point;
};

// Closed-form curve that can be evaluated at any t >= 0.
//   tree_ray         params [start_vertex]: unit-speed walk to the ray edge and out along it
//   euclidean_ray    params [origin..., direction...]: origin + t * direction (unit)
//   half_plane_tube  params [amplitude, period]: Fermi point at axis distance t,
//                    signed offset given by a triangle wave, around the imaginary axis
struct CurveGenerator {
  std::string name;
  std::vector<double> params;
  bool operator==(const CurveGenerator&) const = default;
};

Point evaluate_generator(const Space& space, const CurveGenerator& gen, double t);

// Ordered samples joined by geodesic segments. With a generator, parameters
// past the last sample are evaluated in closed form.
class Curve {
 public:
  Curve(Space space, std::vector<CurveSample> samples,
        std::optional<CurveGenerator> generator = std::nullopt);

  // Samples at 0, spacing, 2 spacing, ... up to t_max (inclusive when it
  // falls on the grid).
  static Curve from_generator(Space space, CurveGenerator gen, double t_max, double spacing);
  // Samples t = j * spacing through the given points.
  static Curve from_points(Space space, const std::vector<Point>& points, double spacing);

  const Space& space() const { return space_; }
  const std::vector<CurveSample>& samples() const { return samples_; }
  const std::optional<CurveGenerator>& generator() const { return generator_; }
  double t_min() const { return samples_.front().t; }
  double t_max() const { return samples_.back().t; }
  bool extendable() const { return generator_.has_value(); }

  // Throws insufficient_curve outside the available parameter range.
  Point at(double t) const;

 private:
  Space space_;
  std::vector<CurveSample> samples_;
  std::optional<CurveGenerator> generator_;
};

// Polyline from a to b with `teeth` equal pieces whose odd vertices are
// pushed toward `toward` by amplitude * |ab| / teeth (away from it when the
// amplitude is negative); parameterized by arc length.
Curve zigzag_curve(const Space& space, const Point& a, const Point& b, int teeth,
                   double amplitude, const Point& toward);

struct ParamPair {
  double s = 0.0;
  double t = 0.0;
  bool operator==(const ParamPair&) const = default;
};

struct Violation {
  ParamPair pair;
  double distance = 0.0;
  std::string bound;  // "lower" or "upper"
};

struct QGReport {
  double lambda = 1.0;
  double epsilon = 0.0;
  std::optional<double> k;
  int grid = 0;
  bool pass = true;
  // min d / |s - t| and its pair.
  double worst_lower_ratio = std::numeric_limits<double>::infinity();
  ParamPair lower_ratio_witness;
  // min of d - (|s - t| / lambda - epsilon).
  double worst_lower_slack = std::numeric_limits<double>::infinity();
  ParamPair lower_slack_witness;
  // max of d - (lambda |s - t| + epsilon).
  double worst_upper_excess = -std::numeric_limits<double>::infinity();
  ParamPair upper_witness;
  // First failing pair in lexicographic (s, t) order.
  std::optional<Violation> first_violation;
  long long pairs_tested = 0;
};

// Tests all pairs from a uniform grid of `grid` parameters merged with the
// sample parameters (restricted to |s - t| <= k when k is given).
QGReport check_quasi_geodesic(const Curve& curve, double lambda, double epsilon, int grid,
                              std::optional<double> k = std::nullopt);

struct DirectionalityReport {
  double b = 0.0;
  bool pass = true;
  double worst_slack = std::numeric_limits<double>::infinity();
  std::string bound;  // "lower" or "upper" for curves, "window" or "random" for sequences
  ParamPair pair;     // curves
  std::vector<int> subsequence;  // sequences
  std::optional<Violation> first_violation;  // curves
  long long tested = 0;
  // Sequences: d(x_0, x_last), the growth trend.
  double growth = 0.0;
};

DirectionalityReport check_directional_curve(const Curve& curve, double b, int grid);

// Every consecutive window i..j plus `budget` seeded random subsequences.
DirectionalityReport check_directional_sequence(const Space& space,
                                                const std::vector<Point>& points, double b,
                                                int budget, std::uint64_t seed = 0);

struct Promotion {
  double lambda_star = 1.0;
  double epsilon = 0.0;
};

// (1/lambda - 4M / (k/2 + lambda M))^-1 and 2M; requires k > 8 lambda M.
Promotion promote_constants(double lambda, double M, double k);

struct PromotionReport {
  Promotion constants;
  QGReport local;
  QGReport global;
  double neighborhood_max = 0.0;
  double neighborhood_witness_t = 0.0;
  bool neighborhood_pass = true;
  bool pass = true;
};

// Requires the curve to pass the k-local (lambda, 0) check on the grid.
PromotionReport verify_promotion(const Space& space, const Curve& curve, double lambda,
                                 double M, double k, int grid);

struct RayPoint {
  int k = 0;
  Point point;
  double distance_from_base = 0.0;
  int first_n = 0;  // index n of the first x_k^n
  std::vector<double> residuals;  // d(x_k^n, x_k^{n+1})
  std::vector<double> bounds;     // 4 k delta* / (beta alpha^n), quasi-geodesic input only
  std::string stop;               // converged | cap | exhausted
};

struct AngleBound {
  int m = 0;
  int n = 0;
  double angle = 0.0;
  double lhs = 0.0;  // sin^2(angle / 2)
  double rhs = 0.0;  // (b / 2 d_m)(b / (2 d_n) + 1)
};

struct RayApprox {
  Point base;
  std::vector<RayPoint> points;
  // d(x*_k, point of [x0, x*_kmax] at distance k), k < k_max.
  std::vector<double> colinearity;
  std::vector<AngleBound> angle_bounds;
  double beta = 0.0;
};

inline constexpr double kRayResidualStop = 1e-6;
inline constexpr int kRayIterationCap = 60;

// x_n = gamma(alpha^n); x_k^n on [x0, x_n] at distance k.
RayApprox extract_ray_from_quasi_geodesic(const Space& space, const Curve& curve,
                                          double lambda, double alpha, int k_max,
                                          double delta_star);

RayApprox extract_ray_from_directional_sequence(const Space& space,
                                                const std::vector<Point>& points, double b,
                                                int k_max);

// Breakpoints a_k = base + ... + base^k with gamma(a_k) = (base, ..., base^k, 0, ...),
// linear in between; `refinement` extra samples per piece.
Curve l2_example_curve(int N, double base = 10.0, int refinement = 0);

}  // namespace geolab
