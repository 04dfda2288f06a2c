#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fixtures.hpp"
#include "geolab/curves.hpp"
#include "geolab/hyperbolicity.hpp"
#include "oracles.hpp"

using namespace geolab;

namespace {

Point e2(double x, double y) { return Point::euclidean({x, y}); }

Curve euclidean_segment(double length) {
  return Curve::from_generator(Space::euclidean(2), {"euclidean_ray", {0, 0, 0.6, 0.8}}, length, 0.5);
}

Curve tree_ray_curve(double t_max) {
  return Curve::from_generator(fixtures::ray_tree(), {"tree_ray", {3}}, t_max, 1.0);
}

}  // namespace

TEST_CASE("curve evaluation") {
  const Curve c = Curve::from_points(Space::euclidean(2), {e2(0, 0), e2(2, 0), e2(2, 2)}, 2.0);
  CHECK(c.at(1.0) == e2(1, 0));
  CHECK(c.at(3.0) == e2(2, 1));
  CHECK(c.at(4.0) == e2(2, 2));
  CHECK_THROWS_AS(c.at(4.5), GeoError);
  CHECK_THROWS_AS(Curve(Space::euclidean(2), {{1.0, e2(0, 0)}, {1.0, e2(1, 0)}}), GeoError);

  const Curve ray = tree_ray_curve(4.0);
  // Vertex 3 -> 2 -> 0 -> 1 is 6 long; beyond that the ray edge.
  CHECK(ray.at(6.0) == Point::tree_vertex(1));
  CHECK(ray.at(10.5) == Point::tree_edge(3, 4.5));
  CHECK(ray.extendable());
}

TEST_CASE("half-plane tube stays within its amplitude of the axis") {
  const Curve c = fixtures::tube_curve(20.0, 0.25);
  const Space h = Space::hyperbolic();
  for (double t = 0.0; t <= 30.0; t += 0.37) {
    const Point p = c.at(t);
    const Point axis = Point::half_plane(0.0, std::exp(t));
    CHECK(distance(h, p, axis) <= fixtures::kTubeAmplitude + 1e-9);
  }
  CHECK(c.at(0.0) == Point::half_plane(0.0, 1.0));
}

TEST_CASE("geodesics are quasi-geodesics for every lambda") {
  for (double lambda : {1.0, 1.5, 3.0}) {
    CHECK(check_quasi_geodesic(euclidean_segment(10.0), lambda, 0.0, 50).pass);
    CHECK(check_quasi_geodesic(tree_ray_curve(12.0), lambda, 0.0, 50).pass);
    const Curve unit = Curve::from_points(
        Space::hyperbolic(),
        {Point::half_plane(0, 1), Point::half_plane(0, std::exp(1.0)), Point::half_plane(0, std::exp(2.0))},
        1.0);
    CHECK(check_quasi_geodesic(unit, lambda, 0.0, 40).pass);
  }
}

TEST_CASE("l2 example curve") {
  const Curve c = l2_example_curve(6);
  CHECK(c.at(0.0) == Point::l2box({0, 0, 0, 0, 0, 0}));
  CHECK(c.samples()[1].t == 10.0);
  CHECK(c.at(10.0) == Point::l2box({10, 0, 0, 0, 0, 0}));
  CHECK(c.samples()[2].t == 110.0);
  CHECK(c.t_max() == 1111110.0);

  const auto pass = check_quasi_geodesic(c, std::sqrt(11.0 / 3.0), 0.0, 500);
  CHECK(pass.pass);
  CHECK(pass.worst_lower_ratio >= 1.0 / std::sqrt(11.0 / 3.0) - 1e-9);

  const auto fail1 = check_quasi_geodesic(c, 1.0, 0.0, 500);
  CHECK_FALSE(fail1.pass);
  REQUIRE(fail1.first_violation);
  CHECK(fail1.first_violation->pair == ParamPair{0.0, 110.0});
  CHECK(fail1.first_violation->distance == doctest::Approx(oracle::planar_distance(0, 0, 10, 100)).epsilon(1e-15));
  CHECK(fail1.first_violation->bound == "lower");
}

TEST_CASE("l2 example curve stays in the box and is 1-Lipschitz") {
  const Curve c = l2_example_curve(6, 10.0, 3);
  const Space& s = c.space();
  std::vector<double> ts;
  for (const auto& sample : c.samples()) ts.push_back(sample.t);
  for (int i = 0; i <= 300; ++i) ts.push_back(c.t_max() * i / 300.0);
  for (double t : ts) CHECK(domain_contains(s, BoxDomain{}, c.at(t)));
  for (size_t i = 0; i < ts.size(); i += 3) {
    for (size_t j = 0; j < ts.size(); j += 5) {
      CHECK(distance(s, c.at(ts[i]), c.at(ts[j])) <= std::abs(ts[i] - ts[j]) * (1 + 1e-12));
    }
  }
}

TEST_CASE("directional curves") {
  CHECK(check_directional_curve(tree_ray_curve(10.0), 0.0, 40).pass);

  const auto rep = check_directional_curve(l2_example_curve(6), 5.0, 500);
  CHECK_FALSE(rep.pass);
  REQUIRE(rep.first_violation);
  CHECK(rep.first_violation->pair == ParamPair{0.0, 110.0});

  // Parameter-compressed geodesic: d = 2 |s - t|.
  const Curve fast = Curve::from_points(Space::euclidean(2), {e2(0, 0), e2(2, 0), e2(4, 0)}, 1.0);
  const auto up = check_directional_curve(fast, 0.0, 10);
  CHECK_FALSE(up.pass);
  CHECK(up.first_violation->bound == "upper");
}

TEST_CASE("directional curves are (1, b)-quasi-geodesics") {
  const Space e = Space::euclidean(2);
  std::vector<Point> pts;
  for (int j = 0; j <= 12; ++j) pts.push_back(e2(j, (j % 2) * 0.2));
  // Arc-length parameterization keeps the curve 1-Lipschitz.
  std::vector<CurveSample> samples{{0.0, pts[0]}};
  for (size_t j = 1; j < pts.size(); ++j) {
    samples.push_back({samples.back().t + distance(e, pts[j - 1], pts[j]), pts[j]});
  }
  const Curve c(e, samples);
  const double b = 0.5;
  REQUIRE(check_directional_curve(c, b, 100).pass);
  CHECK(check_quasi_geodesic(c, 1.0, b, 100).pass);
}

TEST_CASE("directional sequences") {
  const Space t = fixtures::ray_tree();
  std::vector<Point> ray;
  for (int j = 1; j <= 10; ++j) ray.push_back(Point::tree_edge(3, 2.0 * j));
  CHECK(check_directional_sequence(t, ray, 0.0, 50, 1).pass);

  const Space tri = Space::rtree(tripod_tree());
  std::vector<Point> alt;
  for (int j = 0; j < 8; ++j) alt.push_back(Point::tree_vertex(j % 2 == 0 ? 1 : 2));
  const auto bad = check_directional_sequence(tri, alt, 3.0, 20, 1);
  CHECK_FALSE(bad.pass);
  CHECK(bad.worst_slack < 0.0);

  const auto two = check_directional_sequence(tri, {Point::tree_vertex(1), Point::tree_vertex(2)}, 1.5, 10, 1);
  CHECK(two.pass);
  CHECK(two.worst_slack == 1.5);
}

TEST_CASE("promotion constants") {
  const auto p1 = promote_constants(1.0, 0.0, 1.0);
  CHECK(p1.lambda_star == 1.0);
  CHECK(p1.epsilon == 0.0);

  const double r2 = std::sqrt(2.0);
  const auto p2 = promote_constants(r2, 1.0, 12.0);
  CHECK(std::abs(p2.lambda_star - 1.0 / (1.0 / r2 - 4.0 / (6.0 + r2))) < 1e-9);
  CHECK(p2.lambda_star == doctest::Approx(5.966).epsilon(1e-3));
  CHECK(p2.epsilon == 2.0);

  try {
    promote_constants(r2, 1.0, 11.0);
    FAIL("expected precondition error");
  } catch (const GeoError& e) {
    CHECK(e.code() == ErrorCode::precondition_violated);
  }

  // lambda* >= lambda and decreases toward lambda as k grows.
  for (double lambda : {1.0, 1.3, r2, 2.0}) {
    double prev = std::numeric_limits<double>::infinity();
    for (double k = 8.0 * lambda * 0.5 + 1.0; k < 1e7; k *= 2.0) {
      const auto p = promote_constants(lambda, 0.5, k);
      CHECK(p.lambda_star >= lambda);
      CHECK(p.lambda_star <= prev);
      prev = p.lambda_star;
    }
    CHECK(prev - lambda < 1e-4 * lambda);
  }
}

TEST_CASE("verify promotion") {
  const Space h = Space::hyperbolic();
  const double delta = estimate_delta(h, PointSampler(1, 3.0), 20);
  std::vector<Point> axis;
  for (int j = 0; j <= 40; ++j) axis.push_back(Point::half_plane(0.0, std::exp(0.5 * j)));
  const Curve geo = Curve::from_points(h, axis, 0.5);
  const auto trivial = verify_promotion(h, geo, 1.0, delta, 100.0 * delta, 60);
  CHECK(trivial.pass);

  const double M = estimate_quasi_slim_M(h, std::sqrt(2.0), PointSampler(1, 3.0), 20);
  const double k = 8.0 * std::sqrt(2.0) * M * 1.05;
  const Curve tube = fixtures::tube_curve(60.0, 0.25);
  const auto rep = verify_promotion(h, tube, std::sqrt(2.0), M, k, 200);
  CHECK(rep.local.pass);
  CHECK(rep.global.pass);
  CHECK(rep.neighborhood_pass);
  CHECK(rep.neighborhood_max <= fixtures::kTubeAmplitude + 1e-9);

  // Too small a k for the given M is a precondition failure.
  CHECK_THROWS_AS(verify_promotion(h, tube, std::sqrt(2.0), M, 0.5 * k, 200), GeoError);
}

TEST_CASE("ray extraction from a tree ray is exact") {
  const Space t = fixtures::ray_tree();
  const Curve ray = tree_ray_curve(8.0);
  const RayApprox r = extract_ray_from_quasi_geodesic(t, ray, 1.0, 2.0, 10, 0.0);
  REQUIRE(r.points.size() == 10);
  for (const RayPoint& p : r.points) {
    CHECK(p.point == ray.at(p.k));
    CHECK(p.distance_from_base == p.k);
    for (double res : p.residuals) CHECK(res == 0.0);
    CHECK(p.stop == "converged");
  }
  for (double c : r.colinearity) CHECK(c == 0.0);
}

TEST_CASE("ray extraction from the hyperbolic tube recovers the axis") {
  const Space h = Space::hyperbolic();
  const Curve tube = fixtures::tube_curve(64.0, 0.25);
  REQUIRE(check_quasi_geodesic(tube, std::sqrt(2.0), 0.0, 300).pass);
  PointSampler sampler(2, 4.0);
  const double delta_star = check_gromov_criterion(h, sample_triangles(h, sampler, 20), 1.0).supremum;
  const RayApprox r = extract_ray_from_quasi_geodesic(h, tube, std::sqrt(2.0), 2.0, 10, delta_star);
  for (const RayPoint& p : r.points) {
    CHECK(distance(h, p.point, Point::half_plane(0.0, std::exp(p.k))) < 0.05);
    CHECK(std::abs(p.distance_from_base - p.k) < 1e-6);
    CHECK(p.stop == "converged");
    for (size_t i = p.residuals.size() / 2; i + 1 < p.residuals.size(); ++i) {
      if (p.residuals[i] > 0.0) CHECK(p.residuals[i + 1] / p.residuals[i] <= 0.6);
    }
    REQUIRE(p.bounds.size() == p.residuals.size());
  }
  for (size_t i = 0; i < r.colinearity.size(); ++i) CHECK(r.colinearity[i] <= 1e-5);
}

TEST_CASE("ray extraction argument checks") {
  const Curve tube = fixtures::tube_curve(10.0, 0.5);
  try {
    extract_ray_from_quasi_geodesic(Space::hyperbolic(), tube, std::sqrt(2.0), 3.0, 3, 1.0);
    FAIL("expected invalid alpha");
  } catch (const GeoError& e) {
    CHECK(e.code() == ErrorCode::invalid_alpha);
  }
  CHECK_THROWS_AS(extract_ray_from_quasi_geodesic(Space::hyperbolic(), tube, 1.0, 1.0, 3, 1.0), GeoError);
  try {
    extract_ray_from_quasi_geodesic(Space::euclidean(2), euclidean_segment(20.0), 1.0, 2.0, 3, 0.0);
    FAIL("expected unsupported space");
  } catch (const GeoError& e) {
    CHECK(e.code() == ErrorCode::unsupported_space);
  }
}

TEST_CASE("ray extraction from directional sequences") {
  const Space e = Space::euclidean(2);
  std::vector<Point> line;
  for (int n = 0; n <= 20; ++n) line.push_back(e2(0.6 * n, 0.8 * n));
  const RayApprox exact = extract_ray_from_directional_sequence(e, line, 0.0, 10);
  for (const RayPoint& p : exact.points) {
    CHECK(distance(e, p.point, e2(0.6 * p.k, 0.8 * p.k)) < 1e-12);
    for (double res : p.residuals) CHECK(res < 1e-12);
  }

  const double b = 1.0;
  const auto pts = fixtures::jittered_ray(17, b, 30);
  REQUIRE(check_directional_sequence(e, pts, b, 200, 5).pass);
  const RayApprox r = extract_ray_from_directional_sequence(e, pts, b, 10);
  const auto base = pts[0].coords();
  const auto far = r.points.back().point.coords();
  CHECK(std::abs(std::atan2(far[1] - base[1], far[0] - base[0])) < 0.01);
  REQUIRE_FALSE(r.angle_bounds.empty());
  for (const AngleBound& ab : r.angle_bounds) CHECK(ab.lhs <= ab.rhs + 1e-9);
  for (const RayPoint& p : r.points) CHECK(std::abs(p.distance_from_base - p.k) < 1e-6);

  try {
    extract_ray_from_directional_sequence(e, {e2(0, 0), e2(1, 0), e2(2, 0)}, 0.0, 5);
    FAIL("expected insufficient data");
  } catch (const GeoError& err) {
    CHECK(err.code() == ErrorCode::insufficient_data);
  }
}
