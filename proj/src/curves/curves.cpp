#include "geolab/curves.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "geolab/hyperbolicity.hpp"

namespace geolab {

namespace {

double bound_tol(double bound) { return 1e-9 * std::max(1.0, std::abs(bound)) + 1e-12; }

double triangle_wave(double t, double period) {
  const double phase = std::fmod(t, period) / period;
  if (phase < 0.25) return 4.0 * phase;
  if (phase < 0.75) return 2.0 - 4.0 * phase;
  return 4.0 * phase - 4.0;
}

struct Parameterized {
  std::vector<double> t;
  std::vector<Point> p;
};

// Uniform grid over the sampled range merged with the sample parameters.
Parameterized parameter_set(const Curve& curve, int grid) {
  if (grid < 2) fail(ErrorCode::invalid_input, "grid must be at least 2");
  Parameterized out;
  const double lo = curve.t_min();
  const double hi = curve.t_max();
  for (int i = 0; i < grid; ++i) {
    out.t.push_back(i == grid - 1 ? hi : lo + (hi - lo) * i / (grid - 1));
  }
  for (const CurveSample& s : curve.samples()) out.t.push_back(s.t);
  std::sort(out.t.begin(), out.t.end());
  out.t.erase(std::unique(out.t.begin(), out.t.end()), out.t.end());
  out.p.reserve(out.t.size());
  for (double t : out.t) out.p.push_back(curve.at(t));
  return out;
}

}  // namespace

Point evaluate_generator(const Space& space, const CurveGenerator& gen, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) fail(ErrorCode::invalid_input, "curve parameter must be finite and >= 0");
  if (gen.name == "tree_ray") {
    if (space.kind() != SpaceKind::rtree || gen.params.size() != 1) {
      fail(ErrorCode::invalid_input, "tree_ray needs an rtree and one parameter");
    }
    const RTree& tree = space.tree();
    if (!tree.ray_edge()) fail(ErrorCode::invalid_input, "tree_ray needs a tree with a ray edge");
    const int start = static_cast<int>(gen.params[0]);
    if (start < 0 || start >= tree.vertex_count()) fail(ErrorCode::invalid_input, "tree_ray start vertex unknown");
    const int ray = *tree.ray_edge();
    const int foot = tree.edge(ray).from;
    const double lead = tree.vertex_distance(start, foot);
    if (t < lead) return point_toward(space, Point::tree_vertex(start), Point::tree_vertex(foot), t);
    if (t == lead) return Point::tree_vertex(foot);
    return Point::tree_edge(ray, t - lead);
  }
  if (gen.name == "euclidean_ray") {
    const auto n = static_cast<size_t>(space.dimension());
    if (space.kind() != SpaceKind::euclidean || gen.params.size() != 2 * n) {
      fail(ErrorCode::invalid_input, "euclidean_ray needs origin and direction of the space dimension");
    }
    std::vector<double> x(n);
    for (size_t i = 0; i < n; ++i) x[i] = gen.params[i] + t * gen.params[n + i];
    return Point::euclidean(std::move(x));
  }
  if (gen.name == "half_plane_tube") {
    if (space.kind() != SpaceKind::hyperbolic || gen.params.size() != 2 || !(gen.params[1] > 0.0)) {
      fail(ErrorCode::invalid_input, "half_plane_tube needs the hyperbolic plane, amplitude and period > 0");
    }
    const double u = gen.params[0] * triangle_wave(t, gen.params[1]);
    const double scale = std::exp(t);
    return Point::half_plane(scale * std::tanh(u), scale / std::cosh(u));
  }
  fail(ErrorCode::invalid_input, "unknown curve generator '" + gen.name + "'");
}

Curve::Curve(Space space, std::vector<CurveSample> samples, std::optional<CurveGenerator> generator)
    : space_(std::move(space)), samples_(std::move(samples)), generator_(std::move(generator)) {
  if (samples_.empty()) fail(ErrorCode::invalid_input, "curve needs at least one sample");
  for (size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i].t)) fail(ErrorCode::invalid_input, "curve parameters must be finite");
    if (i > 0 && !(samples_[i].t > samples_[i - 1].t)) {
      fail(ErrorCode::invalid_input, "curve parameters must be strictly increasing");
    }
    space_.validate(samples_[i].point);
  }
  if (generator_) evaluate_generator(space_, *generator_, std::max(0.0, samples_.front().t));
}

Curve Curve::from_generator(Space space, CurveGenerator gen, double t_max, double spacing) {
  if (!(spacing > 0.0) || !(t_max >= 0.0)) fail(ErrorCode::invalid_input, "need spacing > 0 and t_max >= 0");
  const auto count = static_cast<long>(std::floor(t_max / spacing + 1e-9));
  std::vector<CurveSample> samples;
  for (long j = 0; j <= count; ++j) {
    const double t = static_cast<double>(j) * spacing;
    samples.push_back({t, evaluate_generator(space, gen, t)});
  }
  return Curve(std::move(space), std::move(samples), std::move(gen));
}

Curve Curve::from_points(Space space, const std::vector<Point>& points, double spacing) {
  if (!(spacing > 0.0)) fail(ErrorCode::invalid_input, "spacing must be positive");
  std::vector<CurveSample> samples;
  for (size_t j = 0; j < points.size(); ++j) {
    samples.push_back({static_cast<double>(j) * spacing, points[j]});
  }
  return Curve(std::move(space), std::move(samples));
}

Point Curve::at(double t) const {
  if (t < t_min() || t > t_max()) {
    if (generator_ && t >= 0.0) return evaluate_generator(space_, *generator_, t);
    fail(ErrorCode::insufficient_curve, "parameter " + std::to_string(t) + " outside the curve");
  }
  auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                             [](double v, const CurveSample& s) { return v < s.t; });
  const auto i = static_cast<size_t>(std::distance(samples_.begin(), it)) - 1;
  if (samples_[i].t == t || i + 1 == samples_.size()) return samples_[i].point;
  const CurveSample& a = samples_[i];
  const CurveSample& b = samples_[i + 1];
  const double d = distance(space_, a.point, b.point);
  return point_toward(space_, a.point, b.point, (t - a.t) * (d / (b.t - a.t)));
}

Curve zigzag_curve(const Space& space, const Point& a, const Point& b, int teeth,
                   double amplitude, const Point& toward) {
  if (teeth < 1) fail(ErrorCode::invalid_input, "zigzag needs at least one tooth");
  if (!std::isfinite(amplitude)) fail(ErrorCode::invalid_input, "zigzag amplitude must be finite");
  if (amplitude < 0.0 && space.kind() == SpaceKind::rtree) {
    fail(ErrorCode::unsupported_space, "outward zigzag teeth are not defined in trees");
  }
  const double d = distance(space, a, b);
  if (!(d > 0.0)) fail(ErrorCode::degenerate_input, "zigzag endpoints coincide");
  const double h = d / teeth;
  std::vector<Point> vertices;
  for (int j = 0; j <= teeth; ++j) {
    Point q = j == teeth ? b : point_toward(space, a, b, sample_distance(space, d, j, teeth));
    if (j % 2 == 1 && j < teeth && amplitude != 0.0 && distance(space, q, toward) > 0.0) {
      if (amplitude > 0.0) {
        q = point_toward(space, q, toward, amplitude * h);
      } else {
        q = step_candidates(space, WholeSpace{}, q, toward, -amplitude * h, 2).front();
      }
    }
    vertices.push_back(std::move(q));
  }
  std::vector<CurveSample> samples{{0.0, vertices[0]}};
  for (size_t j = 1; j < vertices.size(); ++j) {
    const double step = distance(space, samples.back().point, vertices[j]);
    if (step > 0.0) samples.push_back({samples.back().t + step, vertices[j]});
  }
  return Curve(space, std::move(samples));
}

QGReport check_quasi_geodesic(const Curve& curve, double lambda, double epsilon, int grid,
                              std::optional<double> k) {
  if (!(lambda >= 1.0)) fail(ErrorCode::invalid_input, "lambda must be at least 1");
  if (!(epsilon >= 0.0)) fail(ErrorCode::invalid_input, "epsilon must be nonnegative");
  if (k && !(*k > 0.0)) fail(ErrorCode::invalid_input, "locality bound k must be positive");
  QGReport r;
  r.lambda = lambda;
  r.epsilon = epsilon;
  r.k = k;
  r.grid = grid;
  const Parameterized ps = parameter_set(curve, grid);
  const Space& space = curve.space();
  for (size_t i = 0; i < ps.t.size(); ++i) {
    for (size_t j = i + 1; j < ps.t.size(); ++j) {
      const double len = ps.t[j] - ps.t[i];
      if (k && len > *k) break;
      const double d = distance(space, ps.p[i], ps.p[j]);
      const double lower = len / lambda - epsilon;
      const double upper = lambda * len + epsilon;
      const ParamPair pair{ps.t[i], ps.t[j]};
      ++r.pairs_tested;
      if (d / len < r.worst_lower_ratio) {
        r.worst_lower_ratio = d / len;
        r.lower_ratio_witness = pair;
      }
      if (d - lower < r.worst_lower_slack) {
        r.worst_lower_slack = d - lower;
        r.lower_slack_witness = pair;
      }
      if (d - upper > r.worst_upper_excess) {
        r.worst_upper_excess = d - upper;
        r.upper_witness = pair;
      }
      const bool low_bad = d < lower - bound_tol(lower);
      const bool up_bad = d > upper + bound_tol(upper);
      if ((low_bad || up_bad) && !r.first_violation) {
        r.first_violation = Violation{pair, d, low_bad ? "lower" : "upper"};
      }
    }
  }
  r.pass = !r.first_violation.has_value();
  return r;
}

DirectionalityReport check_directional_curve(const Curve& curve, double b, int grid) {
  if (!(b >= 0.0)) fail(ErrorCode::invalid_input, "b must be nonnegative");
  DirectionalityReport r;
  r.b = b;
  const Parameterized ps = parameter_set(curve, grid);
  for (size_t i = 0; i < ps.t.size(); ++i) {
    for (size_t j = i + 1; j < ps.t.size(); ++j) {
      const double len = ps.t[j] - ps.t[i];
      const double d = distance(curve.space(), ps.p[i], ps.p[j]);
      const ParamPair pair{ps.t[i], ps.t[j]};
      ++r.tested;
      const double lower_slack = d - (len - b);
      const double upper_slack = len - d;
      if (lower_slack < r.worst_slack) {
        r.worst_slack = lower_slack;
        r.bound = "lower";
        r.pair = pair;
      }
      if (upper_slack < r.worst_slack) {
        r.worst_slack = upper_slack;
        r.bound = "upper";
        r.pair = pair;
      }
      const bool low_bad = lower_slack < -bound_tol(len - b);
      const bool up_bad = upper_slack < -bound_tol(len);
      if ((low_bad || up_bad) && !r.first_violation) {
        r.first_violation = Violation{pair, d, low_bad ? "lower" : "upper"};
      }
    }
  }
  r.pass = !r.first_violation.has_value();
  return r;
}

DirectionalityReport check_directional_sequence(const Space& space,
                                                const std::vector<Point>& points, double b,
                                                int budget, std::uint64_t seed) {
  if (points.size() < 2) fail(ErrorCode::invalid_input, "directional sequence needs at least 2 points");
  if (!(b >= 0.0)) fail(ErrorCode::invalid_input, "b must be nonnegative");
  if (budget < 0) fail(ErrorCode::invalid_input, "budget must be nonnegative");
  const size_t n = points.size();
  std::vector<double> prefix(n, 0.0);
  for (size_t i = 1; i < n; ++i) prefix[i] = prefix[i - 1] + distance(space, points[i - 1], points[i]);

  DirectionalityReport r;
  r.b = b;
  bool fails = false;
  auto consider = [&](double slack, double sum, const std::vector<int>& sub, const char* kind) {
    ++r.tested;
    if (slack < r.worst_slack) {
      r.worst_slack = slack;
      r.subsequence = sub;
      r.bound = kind;
    }
    if (slack < -bound_tol(sum)) fails = true;
  };
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const double sum = prefix[j] - prefix[i];
      consider(distance(space, points[i], points[j]) - sum + b, sum,
               {static_cast<int>(i), static_cast<int>(j)}, "window");
    }
  }
  if (n >= 3) {
    std::mt19937_64 rng(seed);
    const int max_len = static_cast<int>(std::min<size_t>(n, 12));
    std::uniform_int_distribution<int> length(3, max_len);
    std::vector<int> all(n);
    for (size_t i = 0; i < n; ++i) all[i] = static_cast<int>(i);
    for (int trial = 0; trial < budget; ++trial) {
      std::vector<int> sub;
      std::sample(all.begin(), all.end(), std::back_inserter(sub), length(rng), rng);
      double sum = 0.0;
      for (size_t i = 0; i + 1 < sub.size(); ++i) {
        sum += distance(space, points[static_cast<size_t>(sub[i])], points[static_cast<size_t>(sub[i + 1])]);
      }
      const double ends = distance(space, points[static_cast<size_t>(sub.front())],
                                   points[static_cast<size_t>(sub.back())]);
      consider(ends - sum + b, sum, sub, "random");
    }
  }
  r.growth = distance(space, points.front(), points.back());
  r.pass = !fails;
  return r;
}

Promotion promote_constants(double lambda, double M, double k) {
  if (!(lambda >= 1.0)) fail(ErrorCode::invalid_input, "lambda must be at least 1");
  if (!(M >= 0.0)) fail(ErrorCode::invalid_input, "M must be nonnegative");
  if (!(k > 0.0) || !(k > 8.0 * lambda * M)) {
    fail(ErrorCode::precondition_violated, "promotion needs k > 8 lambda M (k = " + std::to_string(k) +
                                               ", 8 lambda M = " + std::to_string(8.0 * lambda * M) + ")");
  }
  return {1.0 / (1.0 / lambda - 4.0 * M / (k / 2.0 + lambda * M)), 2.0 * M};
}

PromotionReport verify_promotion(const Space& space, const Curve& curve, double lambda,
                                 double M, double k, int grid) {
  if (!curve.space().same_geometry(space)) fail(ErrorCode::invalid_input, "curve lives in another space");
  PromotionReport r;
  r.constants = promote_constants(lambda, M, k);
  r.local = check_quasi_geodesic(curve, lambda, 0.0, grid, k);
  if (!r.local.pass) {
    fail(ErrorCode::precondition_violated, "curve is not a k-local lambda-quasi-geodesic on the grid");
  }
  r.global = check_quasi_geodesic(curve, r.constants.lambda_star, r.constants.epsilon, grid);

  const Parameterized ps = parameter_set(curve, grid);
  const Segment chord{ps.p.front(), ps.p.back()};
  for (size_t i = 0; i < ps.t.size(); ++i) {
    const double d = project_to_segment(space, ps.p[i], chord).distance;
    if (d > r.neighborhood_max) {
      r.neighborhood_max = d;
      r.neighborhood_witness_t = ps.t[i];
    }
  }
  const double radius = r.constants.epsilon;
  r.neighborhood_pass = r.neighborhood_max <= radius + bound_tol(radius);
  r.pass = r.global.pass && r.neighborhood_pass;
  return r;
}

namespace {

// Shared limit construction. next(n) yields x_n for n >= 1 or nothing once
// the input is exhausted.
RayApprox extract_ray(const Space& space, const Point& base,
                      const std::function<std::optional<Point>(int)>& next, int k_max,
                      int cap, const std::function<double(int, int)>& bound) {
  if (k_max < 1) fail(ErrorCode::invalid_input, "k_max must be at least 1");
  RayApprox ray;
  ray.base = base;
  std::vector<Point> xs;
  std::vector<double> dist;
  auto get = [&](int n) -> const Point* {
    while (static_cast<int>(xs.size()) < n) {
      if (static_cast<int>(xs.size()) >= cap) return nullptr;
      auto p = next(static_cast<int>(xs.size()) + 1);
      if (!p) return nullptr;
      dist.push_back(distance(space, base, *p));
      xs.push_back(std::move(*p));
    }
    return &xs[static_cast<size_t>(n - 1)];
  };

  for (int k = 1; k <= k_max; ++k) {
    RayPoint rp;
    rp.k = k;
    int n = 1;
    while (get(n) != nullptr && dist[static_cast<size_t>(n - 1)] < k) ++n;
    if (get(n) == nullptr) {
      fail(ErrorCode::insufficient_data, "input never reaches distance " + std::to_string(k) + " from the base point");
    }
    rp.first_n = n;
    Point current = point_toward(space, base, xs[static_cast<size_t>(n - 1)], k);
    rp.stop = "exhausted";
    for (;; ++n) {
      if (n >= cap) {
        rp.stop = "cap";
        break;
      }
      const Point* following = get(n + 1);
      if (following == nullptr) break;
      Point candidate = point_toward(space, base, *following, k);
      const double residual = distance(space, current, candidate);
      rp.residuals.push_back(residual);
      if (bound) rp.bounds.push_back(bound(k, n));
      current = std::move(candidate);
      if (residual < kRayResidualStop) {
        rp.stop = "converged";
        break;
      }
    }
    rp.distance_from_base = distance(space, base, current);
    rp.point = std::move(current);
    ray.points.push_back(std::move(rp));
  }
  const Point& last = ray.points.back().point;
  for (int k = 1; k < k_max; ++k) {
    const Point on = point_toward(space, base, last, k);
    ray.colinearity.push_back(distance(space, ray.points[static_cast<size_t>(k - 1)].point, on));
  }
  return ray;
}

}  // namespace

RayApprox extract_ray_from_quasi_geodesic(const Space& space, const Curve& curve,
                                          double lambda, double alpha, int k_max,
                                          double delta_star) {
  if (!space.is_gromov_hyperbolic()) {
    fail(ErrorCode::unsupported_space, std::string("ray extraction needs a hyperbolic space, got ") +
                                           to_string(space.kind()));
  }
  if (!(lambda >= 1.0)) fail(ErrorCode::invalid_input, "lambda must be at least 1");
  const double beta = 1.0 / lambda + lambda + alpha * (1.0 / lambda - lambda);
  if (!(alpha > 1.0) || !(beta > 0.0)) {
    fail(ErrorCode::invalid_alpha, "need alpha > 1 and beta = 1/lambda + lambda + alpha (1/lambda - lambda) > 0");
  }
  if (!(delta_star >= 0.0)) fail(ErrorCode::invalid_input, "delta* must be nonnegative");
  const double t0 = curve.t_min();
  auto next = [&](int n) -> std::optional<Point> {
    const double t = t0 + std::pow(alpha, n);
    if (t > curve.t_max() && !curve.extendable()) return std::nullopt;
    return curve.at(t);
  };
  auto bound = [&](int k, int n) { return 4.0 * k * delta_star / (beta * std::pow(alpha, n)); };
  RayApprox ray = extract_ray(space, curve.at(t0), next, k_max, kRayIterationCap, bound);
  ray.beta = beta;
  return ray;
}

RayApprox extract_ray_from_directional_sequence(const Space& space,
                                                const std::vector<Point>& points, double b,
                                                int k_max) {
  if (points.size() < 2) fail(ErrorCode::insufficient_data, "sequence needs at least 2 points");
  if (!(b >= 0.0)) fail(ErrorCode::invalid_input, "b must be nonnegative");
  auto next = [&](int n) -> std::optional<Point> {
    if (static_cast<size_t>(n) >= points.size()) return std::nullopt;
    return points[static_cast<size_t>(n)];
  };
  RayApprox ray = extract_ray(space, points[0], next, k_max,
                              static_cast<int>(points.size()), nullptr);

  // Comparison angles at x0 against the sin^2 bound.
  std::vector<int> idx;
  const int count = static_cast<int>(points.size()) - 1;
  constexpr int kMaxAngleIndices = 128;
  if (count <= kMaxAngleIndices) {
    for (int i = 1; i <= count; ++i) idx.push_back(i);
  } else {
    for (int i = 0; i < kMaxAngleIndices; ++i) idx.push_back(1 + i * (count - 1) / (kMaxAngleIndices - 1));
  }
  std::vector<double> d0;
  for (int i : idx) d0.push_back(distance(space, points[0], points[static_cast<size_t>(i)]));
  for (size_t a = 0; a < idx.size(); ++a) {
    for (size_t c = a + 1; c < idx.size(); ++c) {
      if (!(d0[a] > 0.0) || !(d0[c] > 0.0)) continue;
      AngleBound ab;
      ab.m = idx[a];
      ab.n = idx[c];
      ab.angle = comparison_angle_from_sides(
          d0[a], d0[c],
          distance(space, points[static_cast<size_t>(ab.m)], points[static_cast<size_t>(ab.n)]));
      const double s = std::sin(ab.angle / 2.0);
      ab.lhs = s * s;
      ab.rhs = (b / (2.0 * d0[a])) * (b / (2.0 * d0[c]) + 1.0);
      ray.angle_bounds.push_back(ab);
    }
  }
  return ray;
}

Curve l2_example_curve(int N, double base, int refinement) {
  if (N < 1) fail(ErrorCode::invalid_input, "N must be at least 1");
  if (!(base > 1.0)) fail(ErrorCode::invalid_input, "base must exceed 1");
  if (refinement < 0) fail(ErrorCode::invalid_input, "refinement must be nonnegative");
  const auto n = static_cast<size_t>(N);
  std::vector<CurveSample> samples;
  std::vector<double> corner(n, 0.0);
  double a = 0.0;
  samples.push_back({0.0, Point::l2box(corner)});
  for (size_t k = 0; k < n; ++k) {
    const double piece = std::pow(base, static_cast<double>(k + 1));
    for (int j = 1; j <= refinement; ++j) {
      const double f = static_cast<double>(j) / (refinement + 1);
      std::vector<double> x = corner;
      x[k] = f * piece;
      samples.push_back({a + f * piece, Point::l2box(std::move(x))});
    }
    corner[k] = piece;
    a += piece;
    samples.push_back({a, Point::l2box(corner)});
  }
  return Curve(Space::l2box(N, base), std::move(samples));
}

}  // namespace geolab
