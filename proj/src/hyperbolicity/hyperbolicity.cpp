#include "geolab/hyperbolicity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "geolab/curves.hpp"
#include "spaces/detail.hpp"

namespace geolab {

namespace {

constexpr double kPi = std::numbers::pi;

double vector_angle(std::span<const double> apex, std::span<const double> y,
                    std::span<const double> z) {
  const size_t n = apex.size();
  double ny = 0.0;
  double nz = 0.0;
  for (size_t i = 0; i < n; ++i) {
    ny = std::hypot(ny, y[i] - apex[i]);
    nz = std::hypot(nz, z[i] - apex[i]);
  }
  // 2 atan2(|u - v|, |u + v|) for unit u, v.
  double diff = 0.0;
  double sum = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double u = (y[i] - apex[i]) / ny;
    const double v = (z[i] - apex[i]) / nz;
    diff = std::hypot(diff, u - v);
    sum = std::hypot(sum, u + v);
  }
  return 2.0 * std::atan2(diff, sum);
}

std::array<Point, 2> side_ends(const Point& x, const Point& y, const Point& z, int side) {
  switch (side) {
    case 0: return {x, y};
    case 1: return {y, z};
    default: return {z, x};
  }
}

// Sample points p_j of [a, b] at distances sample_distance(d, j, grid).
std::vector<Point> side_samples(const Space& space, const Point& a, const Point& b, int grid,
                                std::vector<double>* at = nullptr) {
  const double d = distance(space, a, b);
  std::vector<Point> out;
  out.reserve(static_cast<size_t>(grid) + 1);
  for (int j = 0; j <= grid; ++j) {
    const double s = sample_distance(space, d, j, grid);
    out.push_back(point_toward(space, a, b, s));
    if (at != nullptr) at->push_back(s);
  }
  return out;
}

double polyline_distance(const Space& space, const Point& p, const std::vector<Point>& poly) {
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i + 1 < poly.size(); ++i) {
    best = std::min(best, project_to_segment(space, p, {poly[i], poly[i + 1]}).distance);
  }
  if (poly.size() == 1) best = distance(space, p, poly[0]);
  return best;
}

std::vector<Point> vertices_of(const Curve& c) {
  std::vector<Point> out;
  for (const CurveSample& s : c.samples()) out.push_back(s.point);
  return out;
}

// Slimness of three polylines, sampling `sub` points per piece.
double polyline_slimness(const Space& space, const std::array<std::vector<Point>, 3>& sides,
                         int sub) {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    const auto& mine = sides[static_cast<size_t>(i)];
    const auto& other1 = sides[static_cast<size_t>((i + 1) % 3)];
    const auto& other2 = sides[static_cast<size_t>((i + 2) % 3)];
    for (size_t piece = 0; piece + 1 < mine.size(); ++piece) {
      for (int j = 0; j < sub; ++j) {
        const Point p = geodesic_point(space, mine[piece], mine[piece + 1],
                                       static_cast<double>(j) / sub);
        worst = std::max(worst, std::min(polyline_distance(space, p, other1),
                                         polyline_distance(space, p, other2)));
      }
    }
  }
  return worst;
}

}  // namespace

double gromov_product(const Space& space, const Point& x, const Point& y, const Point& z) {
  return 0.5 * (distance(space, x, y) + distance(space, x, z) - distance(space, y, z));
}

double comparison_angle_from_sides(double a, double b, double c) {
  if (!(a > 0.0) || !(b > 0.0)) fail(ErrorCode::degenerate_input, "comparison angle needs positive sides");
  if (a > b) std::swap(a, b);
  // Half-angle form of the cosine law; stable near 0 and pi.
  const double num = std::max(0.0, (c - a + b) * (c + a - b));
  const double den = std::max(0.0, (a + b - c) * (a + b + c));
  return std::clamp(2.0 * std::atan2(std::sqrt(num), std::sqrt(den)), 0.0, kPi);
}

double comparison_angle(const Space& space, const Point& apex, const Point& y, const Point& z) {
  return comparison_angle_from_sides(distance(space, apex, y), distance(space, apex, z),
                                     distance(space, y, z));
}

ComparisonTriangle ComparisonTriangle::plant(double xy, double yz, double zx) {
  if (!(xy >= 0.0) || !(yz >= 0.0) || !(zx >= 0.0)) {
    fail(ErrorCode::invalid_input, "side lengths must be nonnegative");
  }
  const double slack = 1e-12 * std::max({1.0, xy, yz, zx});
  if (xy > yz + zx + slack || yz > xy + zx + slack || zx > xy + yz + slack) {
    fail(ErrorCode::invalid_input, "side lengths violate the triangle inequality");
  }
  ComparisonTriangle tri;
  tri.xy = xy;
  tri.yz = yz;
  tri.zx = zx;
  tri.vertex[0] = {0.0, 0.0};
  tri.vertex[1] = {xy, 0.0};
  if (xy > 0.0 && zx > 0.0) {
    const double angle = comparison_angle_from_sides(xy, zx, yz);
    tri.vertex[2] = {zx * std::cos(angle), zx * std::sin(angle)};
  } else {
    tri.vertex[2] = {zx, 0.0};
  }
  return tri;
}

std::array<double, 2> ComparisonTriangle::on_side(int side, double t) const {
  const auto& a = vertex[static_cast<size_t>(side)];
  const auto& b = vertex[static_cast<size_t>((side + 1) % 3)];
  return {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
}

double alexandrov_angle(const Space& space, const Point& apex, const Point& y, const Point& z) {
  space.validate(apex);
  space.validate(y);
  space.validate(z);
  if (apex == y || apex == z || distance(space, apex, y) == 0.0 ||
      distance(space, apex, z) == 0.0) {
    fail(ErrorCode::degenerate_input, "alexandrov angle needs apex distinct from both points");
  }
  switch (space.kind()) {
    case SpaceKind::euclidean:
    case SpaceKind::l2box:
      return vector_angle(apex.coords(), y.coords(), z.coords());
    case SpaceKind::hyperbolic: {
      const auto dy = detail::half_plane::direction(apex.half_plane(), y.half_plane());
      const auto dz = detail::half_plane::direction(apex.half_plane(), z.half_plane());
      return std::abs(std::arg(dy * std::conj(dz)));
    }
    case SpaceKind::rtree:
      return gromov_product(space, apex, y, z) > 0.0 ? 0.0 : kPi;
  }
  return 0.0;
}

double alexandrov_angle_by_scaling(const Space& space, const Point& apex, const Point& y,
                                   const Point& z, double tol, int max_halvings) {
  double h = std::min(distance(space, apex, y), distance(space, apex, z));
  if (!(h > 0.0)) fail(ErrorCode::degenerate_input, "alexandrov angle needs apex distinct from both points");
  double prev = -1.0;
  double angle = 0.0;
  for (int i = 0; i <= max_halvings; ++i, h *= 0.5) {
    const Point p = point_toward(space, apex, y, h);
    const Point q = point_toward(space, apex, z, h);
    angle = comparison_angle_from_sides(h, h, distance(space, p, q));
    if (prev >= 0.0 && std::abs(angle - prev) < tol) break;
    prev = angle;
  }
  return angle;
}

SlimnessReport slim_defect(const Space& space, const Point& x, const Point& y, const Point& z,
                           int grid) {
  if (grid < 2) fail(ErrorCode::invalid_input, "grid must be at least 2");
  SlimnessReport report;
  report.grid = grid;
  report.witness = x;
  bool first = true;
  for (int side = 0; side < 3; ++side) {
    const auto [a, b] = side_ends(x, y, z, side);
    const auto [c1, c2] = side_ends(x, y, z, (side + 1) % 3);
    const auto [e1, e2] = side_ends(x, y, z, (side + 2) % 3);
    std::vector<double> at;
    const std::vector<Point> pts = side_samples(space, a, b, grid, &at);
    for (size_t j = 0; j < pts.size(); ++j) {
      const double d = std::min(project_to_segment(space, pts[j], {c1, c2}).distance,
                                project_to_segment(space, pts[j], {e1, e2}).distance);
      if (first || d > report.value) {
        first = false;
        report.value = d;
        report.witness = pts[j];
        report.side = side;
        report.witness_at = at[j];
      }
    }
  }
  return report;
}

std::vector<Triple> sample_triangles(const Space& space, PointSampler& sampler, int trials) {
  std::vector<Triple> out;
  out.reserve(static_cast<size_t>(std::max(trials, 0)));
  for (int i = 0; i < trials; ++i) {
    Point x = sampler.sample(space);
    Point y = sampler.sample(space);
    Point z = sampler.sample(space);
    out.push_back({std::move(x), std::move(y), std::move(z)});
  }
  return out;
}

double estimate_delta(const Space& space, PointSampler sampler, int trials, int grid) {
  if (trials < 1) fail(ErrorCode::invalid_input, "trials must be at least 1");
  double best = 0.0;
  for (const Triple& t : sample_triangles(space, sampler, trials)) {
    best = std::max(best, slim_defect(space, t[0], t[1], t[2], grid).value);
  }
  return best;
}

GromovCriterionReport check_gromov_criterion(const Space& space,
                                             const std::vector<Triple>& triples,
                                             double delta_prime, int levels) {
  if (!(delta_prime >= 0.0)) fail(ErrorCode::invalid_input, "delta' must be nonnegative");
  if (levels < 1) fail(ErrorCode::invalid_input, "levels must be at least 1");
  GromovCriterionReport report;
  report.delta_prime = delta_prime;
  report.levels = levels;
  for (size_t i = 0; i < triples.size(); ++i) {
    const auto& [x, y, z] = triples[i];
    const double product = gromov_product(space, x, y, z);
    if (!(product > 0.0)) continue;
    GromovWitness worst{static_cast<int>(i), 0.0, product, -1.0};
    for (int j = 1; j <= levels; ++j) {
      const double r = std::min(product, sample_distance(space, product, j, levels));
      const double d = distance(space, point_toward(space, x, y, r), point_toward(space, x, z, r));
      if (d > worst.distance) {
        worst.distance = d;
        worst.level = r;
      }
    }
    report.supremum = std::max(report.supremum, worst.distance);
    report.witnesses.push_back(worst);
  }
  report.pass = report.supremum <= delta_prime;
  return report;
}

double cat_defect(const Space& space, const Point& x, const Point& y, const Point& z, int grid) {
  if (grid < 2) fail(ErrorCode::invalid_input, "grid must be at least 2");
  const std::array<Point, 3> v{x, y, z};
  const std::array<double, 3> len{distance(space, x, y), distance(space, y, z),
                                  distance(space, z, x)};
  const ComparisonTriangle tri = ComparisonTriangle::plant(len[0], len[1], len[2]);

  struct Sample {
    int side;
    Point p;
    std::array<double, 2> bar;
  };
  std::vector<Sample> samples;
  for (int side = 0; side < 3; ++side) {
    const double d = len[static_cast<size_t>(side)];
    if (!(d > 0.0)) continue;
    const Point& a = v[static_cast<size_t>(side)];
    const Point& b = v[static_cast<size_t>((side + 1) % 3)];
    for (int j = 1; j < grid; ++j) {
      const double s = sample_distance(space, d, j, grid);
      if (!(s > 0.0 && s < d)) continue;
      samples.push_back({side, point_toward(space, a, b, s), tri.on_side(side, s / d)});
    }
  }
  double worst = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < samples.size(); ++i) {
    for (size_t j = i + 1; j < samples.size(); ++j) {
      if (samples[i].side == samples[j].side) continue;
      const double planar = std::hypot(samples[i].bar[0] - samples[j].bar[0],
                                       samples[i].bar[1] - samples[j].bar[1]);
      worst = std::max(worst, distance(space, samples[i].p, samples[j].p) - planar);
    }
  }
  return std::isfinite(worst) ? worst : 0.0;
}

double estimate_quasi_slim_M(const Space& space, double lambda, PointSampler sampler,
                             int trials, int grid) {
  if (!(lambda >= 1.0)) fail(ErrorCode::invalid_input, "lambda must be at least 1");
  if (trials < 1) fail(ErrorCode::invalid_input, "trials must be at least 1");
  constexpr int kTeeth = 8;
  constexpr int kCheckGrid = 64;
  constexpr std::array<double, 8> kAmplitudes{0.125, -0.125, 0.25, -0.25, 0.5, -0.5, 1.0, -1.0};
  const int sub = std::max(2, grid / kTeeth);

  double best = 0.0;
  for (const Triple& t : sample_triangles(space, sampler, trials)) {
    // The geodesic triangle itself is the zero-amplitude rung.
    best = std::max(best, slim_defect(space, t[0], t[1], t[2], grid).value);
    for (double amp : kAmplitudes) {
      if (amp < 0.0 && space.kind() == SpaceKind::rtree) continue;
      std::array<std::vector<Point>, 3> sides;
      bool admissible = true;
      for (int side = 0; side < 3 && admissible; ++side) {
        const Point& a = t[static_cast<size_t>(side)];
        const Point& b = t[static_cast<size_t>((side + 1) % 3)];
        const Point& opposite = t[static_cast<size_t>((side + 2) % 3)];
        if (distance(space, a, b) == 0.0) {
          sides[static_cast<size_t>(side)] = {a};
          continue;
        }
        const Curve c = zigzag_curve(space, a, b, kTeeth, amp, opposite);
        admissible = check_quasi_geodesic(c, lambda, 0.0, kCheckGrid).pass;
        sides[static_cast<size_t>(side)] = vertices_of(c);
      }
      if (admissible) best = std::max(best, polyline_slimness(space, sides, sub));
    }
  }
  return best;
}

}  // namespace geolab
