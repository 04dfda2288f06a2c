#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fixtures.hpp"
#include "geolab/hyperbolicity.hpp"
#include "oracles.hpp"

using namespace geolab;

namespace {

constexpr double kPi = std::numbers::pi;

Space tripod() { return Space::rtree(tripod_tree()); }

std::vector<Space> all_spaces() {
  return {Space::euclidean(2), Space::hyperbolic(), Space::rtree(random_tree(5, 10, 4)),
          Space::l2box(3, 10.0), fixtures::ray_tree()};
}

Point e2(double x, double y) { return Point::euclidean({x, y}); }

// Distance from p to the segment [a, b] in the plane by dense sampling.
double dense_segment_distance(double px, double py, double ax, double ay, double bx, double by,
                              int n) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    best = std::min(best, oracle::planar_distance(px, py, ax + t * (bx - ax), ay + t * (by - ay)));
  }
  return best;
}

}  // namespace

TEST_CASE("gromov product examples") {
  const Space e1 = Space::euclidean(1);
  CHECK(gromov_product(e1, Point::euclidean({0}), Point::euclidean({3}), Point::euclidean({5})) == 3.0);
  const Space h = Space::hyperbolic();
  const Point x = Point::disk(0.1, 0.2);
  const Point y = Point::disk(-0.4, 0.3);
  CHECK(gromov_product(h, x, y, y) == doctest::Approx(distance(h, x, y)).epsilon(1e-14));

  // Tripod (d | a, b): distance from d to the median found by brute force.
  const Space t = tripod();
  const RTree& tree = t.tree();
  const TreeLocation a{1, -1, 0.0}, b{2, -1, 0.0}, d{3, -1, 0.0};
  double best = std::numeric_limits<double>::infinity();
  double to_median = 0.0;
  for (int e = 0; e < 3; ++e) {
    for (int i = 0; i <= 64; ++i) {
      const TreeLocation m{-1, e, i / 64.0};
      const double total = oracle::tree_distance(tree, m, a) + oracle::tree_distance(tree, m, b) +
                           oracle::tree_distance(tree, m, d);
      if (total < best) {
        best = total;
        to_median = oracle::tree_distance(tree, m, d);
      }
    }
  }
  CHECK(gromov_product(t, Point::tree_vertex(3), Point::tree_vertex(1), Point::tree_vertex(2)) ==
        to_median);
  CHECK(to_median == 1.0);
}

TEST_CASE("gromov product bounds on random triples") {
  for (const Space& s : all_spaces()) {
    PointSampler sampler(41, 3.0);
    for (int i = 0; i < 200; ++i) {
      const Point x = sampler.sample(s), y = sampler.sample(s), z = sampler.sample(s);
      const double g = gromov_product(s, x, y, z);
      const double m = std::min(distance(s, x, y), distance(s, x, z));
      CHECK(g >= -1e-12 * std::max(1.0, m));
      CHECK(g <= m + 1e-12 * std::max(1.0, m));
    }
  }
}

TEST_CASE("comparison angle examples") {
  const Space s = Space::euclidean(2);
  CHECK(comparison_angle(s, e2(0, 0), e2(1, 0), e2(0.5, std::sqrt(3.0) / 2)) ==
        doctest::Approx(kPi / 3).epsilon(1e-12));
  CHECK(comparison_angle(s, e2(0, 0), e2(1, 1), e2(1, 1)) == 0.0);
  CHECK(comparison_angle_from_sides(3, 4, 5) == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK_THROWS_AS(comparison_angle(s, e2(0, 0), e2(0, 0), e2(1, 0)), GeoError);
  try {
    comparison_angle_from_sides(0.0, 1.0, 1.0);
  } catch (const GeoError& e) {
    CHECK(e.code() == ErrorCode::degenerate_input);
  }
}

TEST_CASE("comparison angle is symmetric and continuous") {
  const Space h = Space::hyperbolic();
  PointSampler sampler(8, 2.0);
  for (int i = 0; i < 50; ++i) {
    const Point a = sampler.sample(h), y = sampler.sample(h), z = sampler.sample(h);
    const double ang = comparison_angle(h, a, y, z);
    CHECK(ang == comparison_angle(h, a, z, y));
    const double eta = 1e-7;
    const Point y2 = Point::half_plane(y.half_plane().x + eta * y.half_plane().y, y.half_plane().y);
    const double d_ay = distance(h, a, y);
    if (d_ay > 0.1 && distance(h, a, z) > 0.1 && ang > 0.05 && ang < kPi - 0.05) {
      CHECK(std::abs(comparison_angle(h, a, y2, z) - ang) < 1e-4);
    }
  }
}

TEST_CASE("comparison triangle reproduces side lengths") {
  const auto tri = ComparisonTriangle::plant(3.0, 5.0, 4.0);
  auto dist = [](const std::array<double, 2>& p, const std::array<double, 2>& q) {
    return oracle::planar_distance(p[0], p[1], q[0], q[1]);
  };
  CHECK(std::abs(dist(tri.vertex[0], tri.vertex[1]) - 3.0) < 1e-12);
  CHECK(std::abs(dist(tri.vertex[1], tri.vertex[2]) - 5.0) < 1e-12);
  CHECK(std::abs(dist(tri.vertex[2], tri.vertex[0]) - 4.0) < 1e-12);
  CHECK_THROWS_AS(ComparisonTriangle::plant(1.0, 1.0, 3.0), GeoError);
}

TEST_CASE("alexandrov angle examples") {
  CHECK(alexandrov_angle(Space::euclidean(2), e2(0, 0), e2(1, 0), e2(0, 1)) ==
        doctest::Approx(kPi / 2).epsilon(1e-15));
  const Space t = tripod();
  CHECK(alexandrov_angle(t, Point::tree_vertex(0), Point::tree_vertex(1), Point::tree_vertex(2)) == kPi);
  CHECK(alexandrov_angle(t, Point::tree_vertex(0), Point::tree_vertex(1), Point::tree_edge(0, 0.5)) == 0.0);
  CHECK_THROWS_AS(alexandrov_angle(t, Point::tree_vertex(0), Point::tree_vertex(0), Point::tree_vertex(1)),
                  GeoError);
}

TEST_CASE("alexandrov angle agrees with the scale-halving limit") {
  for (const Space& s : {Space::euclidean(3), Space::hyperbolic(), tripod()}) {
    PointSampler sampler(14, 2.0);
    int checked = 0;
    for (int i = 0; i < 60 && checked < 30; ++i) {
      const Point a = sampler.sample(s), y = sampler.sample(s), z = sampler.sample(s);
      if (distance(s, a, y) < 1e-3 || distance(s, a, z) < 1e-3) continue;
      ++checked;
      CHECK(std::abs(alexandrov_angle(s, a, y, z) - alexandrov_angle_by_scaling(s, a, y, z)) < 1e-5);
    }
    CHECK(checked > 10);
  }
}

TEST_CASE("alexandrov angle never exceeds comparison angles") {
  for (const Space& s : all_spaces()) {
    PointSampler sampler(23, 2.0);
    int checked = 0;
    while (checked < 100) {
      const Point a = sampler.sample(s), y = sampler.sample(s), z = sampler.sample(s);
      if (distance(s, a, y) == 0.0 || distance(s, a, z) == 0.0) continue;
      ++checked;
      const double alex = alexandrov_angle(s, a, y, z);
      CHECK(alex <= comparison_angle(s, a, y, z) + 1e-9);
      // Smaller scales too.
      const Point y2 = geodesic_point(s, a, y, 0.25);
      const Point z2 = geodesic_point(s, a, z, 0.5);
      CHECK(alex <= comparison_angle(s, a, y2, z2) + 1e-9);
    }
  }
}

TEST_CASE("angle triangle inequality") {
  for (const Space& s : all_spaces()) {
    PointSampler sampler(3, 2.0);
    int checked = 0;
    while (checked < 100) {
      const Point a = sampler.sample(s), p = sampler.sample(s), q = sampler.sample(s),
                  r = sampler.sample(s);
      if (distance(s, a, p) == 0.0 || distance(s, a, q) == 0.0 || distance(s, a, r) == 0.0) continue;
      ++checked;
      CHECK(alexandrov_angle(s, a, p, q) <=
            alexandrov_angle(s, a, p, r) + alexandrov_angle(s, a, r, q) + 1e-6);
    }
  }
}

TEST_CASE("slim defect examples") {
  const Space t = tripod();
  const auto r = slim_defect(t, Point::tree_vertex(1), Point::tree_vertex(2), Point::tree_vertex(3), 16);
  CHECK(r.value == 0.0);
  CHECK(r.grid == 16);

  const Space e = Space::euclidean(2);
  CHECK(slim_defect(e, e2(0, 0), e2(1, 0), e2(3, 0), 20).value < 1e-12);

  // Dense double-grid oracle for (0,0), (2,0), (1,1).
  const double vx[3] = {0, 2, 1};
  const double vy[3] = {0, 0, 1};
  double oracle_value = 0.0;
  const int n = 2000;
  for (int side = 0; side < 3; ++side) {
    const int i = side, j = (side + 1) % 3, k = (side + 2) % 3;
    for (int m = 0; m <= n; ++m) {
      const double f = static_cast<double>(m) / n;
      const double px = vx[i] + f * (vx[j] - vx[i]);
      const double py = vy[i] + f * (vy[j] - vy[i]);
      const double d = std::min(dense_segment_distance(px, py, vx[j], vy[j], vx[k], vy[k], n),
                                dense_segment_distance(px, py, vx[k], vy[k], vx[i], vy[i], n));
      oracle_value = std::max(oracle_value, d);
    }
  }
  const auto rep = slim_defect(e, e2(0, 0), e2(2, 0), e2(1, 1), 200);
  CHECK(std::abs(rep.value - oracle_value) < 0.01);
  CHECK(distance(e, rep.witness, rep.witness) == 0.0);
}

TEST_CASE("slim defect witness realizes the reported value") {
  const Space h = Space::hyperbolic();
  const Point x = Point::disk(0.0, 0.0), y = Point::disk(0.9, 0.0), z = Point::disk(0.0, 0.9);
  const auto rep = slim_defect(h, x, y, z, 64);
  const Point ends[3][2] = {{x, y}, {y, z}, {z, x}};
  const int o1 = (rep.side + 1) % 3, o2 = (rep.side + 2) % 3;
  const double d = std::min(project_to_segment(h, rep.witness, {ends[o1][0], ends[o1][1]}).distance,
                            project_to_segment(h, rep.witness, {ends[o2][0], ends[o2][1]}).distance);
  CHECK(d == rep.value);
  CHECK(rep.value > 0.0);
}

TEST_CASE("slim defect is exactly zero on random tree triangles") {
  const Space s = Space::rtree(random_tree(12, 14, 6));
  PointSampler sampler(5);
  for (int i = 0; i < 50; ++i) {
    CHECK(slim_defect(s, sampler.sample(s), sampler.sample(s), sampler.sample(s), 16).value == 0.0);
  }
}

TEST_CASE("estimate_delta") {
  CHECK(estimate_delta(Space::rtree(random_tree(2, 12, 5)), PointSampler(9), 40) == 0.0);
  CHECK(estimate_delta(fixtures::ray_tree(), PointSampler(4, 6.0), 40) == 0.0);

  // Same seed, doubled scale: every sampled triangle scales by exactly 2.
  const Space e = Space::euclidean(2);
  const double d1 = estimate_delta(e, PointSampler(6, 1.0), 30);
  const double d2 = estimate_delta(e, PointSampler(6, 2.0), 30);
  CHECK(d1 > 0.0);
  CHECK(d2 == doctest::Approx(2.0 * d1).epsilon(1e-9));

  // Bounded across scales in the hyperbolic plane.
  const Space h = Space::hyperbolic();
  double prev = 0.0;
  for (double scale : {1.0, 4.0, 8.0, 16.0}) {
    const double d = estimate_delta(h, PointSampler(6, scale), 30);
    CHECK(d < 1.0);
    CHECK(d >= 0.0);
    prev = d;
  }
  CHECK(prev > 0.3);

  // Deterministic for a fixed seed.
  CHECK(estimate_delta(h, PointSampler(77, 3.0), 10) == estimate_delta(h, PointSampler(77, 3.0), 10));
}

TEST_CASE("gromov criterion") {
  SUBCASE("trees pass with delta' = 0") {
    const Space s = Space::rtree(random_tree(3, 12, 4));
    PointSampler sampler(3);
    const auto triples = sample_triangles(s, sampler, 40);
    const auto rep = check_gromov_criterion(s, triples, 0.0);
    CHECK(rep.pass);
    CHECK(rep.supremum == 0.0);
  }
  SUBCASE("far euclidean triple fails near the product level") {
    const Space s = Space::euclidean(2);
    const Triple t{e2(0, 0), e2(100, 1), e2(100, -1)};
    const auto rep = check_gromov_criterion(s, {t}, 1.0);
    CHECK_FALSE(rep.pass);
    REQUIRE(rep.witnesses.size() == 1);
    const auto& w = rep.witnesses[0];
    const double product = std::sqrt(10001.0) - 1.0;
    CHECK(w.product == doctest::Approx(product).epsilon(1e-12));
    CHECK(w.level == doctest::Approx(product).epsilon(1e-12));
    // d(y', z') = 2 r sin(theta) with tan(theta) = 1/100.
    CHECK(w.distance == doctest::Approx(2.0 * w.level * std::sin(std::atan(0.01))).epsilon(1e-9));
    CHECK(rep.supremum == w.distance);
  }
  SUBCASE("y = x is vacuous") {
    const Space s = Space::euclidean(2);
    const auto rep = check_gromov_criterion(s, {Triple{e2(0, 0), e2(0, 0), e2(4, 4)}}, 0.0);
    CHECK(rep.pass);
    CHECK(rep.witnesses.empty());
  }
}

TEST_CASE("cat defect examples") {
  const Space e = Space::euclidean(2);
  CHECK(std::abs(cat_defect(e, e2(0, 0), e2(3, 0), e2(1, 2), 16)) < 1e-9);
  CHECK(std::abs(cat_defect(e, e2(0, 0), e2(4, 0), e2(1, 0), 16)) < 1e-9);
  const Space t = tripod();
  CHECK(cat_defect(t, Point::tree_vertex(1), Point::tree_vertex(2), Point::tree_vertex(3), 8) < 0.0);
}

TEST_CASE("cat defect stays below tolerance on random triangles") {
  for (const Space& s : all_spaces()) {
    PointSampler sampler(19, 4.0);
    for (int i = 0; i < 30; ++i) {
      CHECK(cat_defect(s, sampler.sample(s), sampler.sample(s), sampler.sample(s), 8) <= 1e-7);
    }
  }
}

TEST_CASE("quasi-geodesic slimness estimate") {
  const Space t = Space::rtree(random_tree(4, 10, 3));
  CHECK(estimate_quasi_slim_M(t, 1.0, PointSampler(2), 20) == 0.0);

  const Space h = Space::hyperbolic();
  const double delta = estimate_delta(h, PointSampler(10, 3.0), 20);
  CHECK(estimate_quasi_slim_M(h, 1.0, PointSampler(10, 3.0), 20) == delta);
  double prev = delta;
  for (double lambda : {1.05, 1.2, std::sqrt(2.0), 2.0}) {
    const double m = estimate_quasi_slim_M(h, lambda, PointSampler(10, 3.0), 20);
    CHECK(std::isfinite(m));
    CHECK(m >= prev);
    prev = m;
  }
  CHECK(estimate_quasi_slim_M(h, std::sqrt(2.0), PointSampler(10, 3.0), 20) > delta);
}
