#pragma once

// Concrete geodesic metric spaces: Euclidean R^n, the hyperbolic plane, metric
// trees (R-trees with finitely many branch points, optionally one unbounded
// ray edge) and the truncated l2 box. Every consumer goes through the free
// functions at the bottom of this header.

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "geolab/error.hpp"

namespace geolab {

enum class SpaceKind { euclidean, hyperbolic, rtree, l2box };

const char* to_string(SpaceKind kind);
SpaceKind space_kind_from_string(const std::string& name);

struct VectorCoords {
  std::vector<double> x;
  bool operator==(const VectorCoords&) const = default;
};

// Upper half-plane coordinates (x, y), y > 0.
struct HalfPlaneCoords {
  double x = 0.0;
  double y = 1.0;
  bool operator==(const HalfPlaneCoords&) const = default;
};

// Either a vertex of the tree, or a location on an edge measured from the
// edge's `from` endpoint.
struct TreeLocation {
  int vertex = -1;
  int edge = -1;
  double offset = 0.0;
  bool on_vertex() const { return vertex >= 0; }
  bool operator==(const TreeLocation&) const = default;
};

class Point {
 public:
  Point() = default;

  static Point euclidean(std::vector<double> coords);
  static Point l2box(std::vector<double> coords);
  static Point half_plane(double x, double y);
  // Poincare-disk coordinates (u, v), u^2 + v^2 < 1; stored via the Cayley map.
  static Point disk(double u, double v);
  static Point tree_vertex(int vertex);
  static Point tree_edge(int edge, double offset);

  SpaceKind kind() const { return kind_; }

  // Euclidean and l2box coordinates.
  std::span<const double> coords() const;
  const HalfPlaneCoords& half_plane() const;
  // Poincare-disk image of a hyperbolic point. Far points round onto the
  // unit circle; use half_plane() for computation.
  std::pair<double, double> to_disk() const;
  const TreeLocation& tree() const;

  bool operator==(const Point&) const = default;

 private:
  SpaceKind kind_ = SpaceKind::euclidean;
  std::variant<VectorCoords, HalfPlaneCoords, TreeLocation> data_;
};

std::string to_string(const Point& p);

struct TreeEdge {
  int from = 0;
  int to = 0;  // -1 for the unbounded ray edge
  double length = 1.0;
  bool is_ray() const { return to < 0; }
  bool operator==(const TreeEdge&) const = default;
};

// A finite metric tree plus at most one half-infinite edge hanging off a
// vertex. Validated on construction: positive lengths, connected, acyclic.
class RTree {
 public:
  RTree(int vertex_count, std::vector<TreeEdge> edges);

  int vertex_count() const { return vertex_count_; }
  const std::vector<TreeEdge>& edges() const { return edges_; }
  const TreeEdge& edge(int e) const { return edges_.at(static_cast<size_t>(e)); }
  std::optional<int> ray_edge() const { return ray_edge_; }
  const std::vector<int>& incident(int v) const {
    return incident_.at(static_cast<size_t>(v));
  }

  double vertex_distance(int u, int v) const {
    return dist_[static_cast<size_t>(u) * static_cast<size_t>(vertex_count_) +
                 static_cast<size_t>(v)];
  }
  // Vertices on the path u -> v, both ends included.
  std::vector<int> vertex_path(int u, int v) const;
  int edge_between(int u, int v) const;
  int other_end(int e, int v) const;

 private:
  int vertex_count_;
  std::vector<TreeEdge> edges_;
  std::optional<int> ray_edge_;
  std::vector<std::vector<int>> incident_;
  std::vector<int> parent_;
  std::vector<int> level_;
  std::vector<double> dist_;
};

// Shared immutable handle to a space instance.
class Space {
 public:
  static Space euclidean(int dimension);
  static Space hyperbolic();
  static Space l2box(int dimension, double base = 10.0);
  static Space rtree(RTree tree);

  SpaceKind kind() const { return impl_->kind; }
  int dimension() const { return impl_->dimension; }
  double base() const { return impl_->base; }
  const RTree& tree() const;
  bool is_vector_space() const {
    return kind() == SpaceKind::euclidean || kind() == SpaceKind::l2box;
  }
  // Rips-hyperbolic instances (R-trees and the hyperbolic plane).
  bool is_gromov_hyperbolic() const {
    return kind() == SpaceKind::rtree || kind() == SpaceKind::hyperbolic;
  }

  // Throws invalid_input when p cannot be a point of this space.
  void validate(const Point& p) const;

  // Upper coordinate bound base^i (i = 1..N) of the l2 box.
  double box_bound(int i) const;

  bool same_instance(const Space& other) const { return impl_ == other.impl_; }
  // Same kind, dimension, base and (for trees) the same edge table.
  bool same_geometry(const Space& other) const;

 private:
  struct Impl {
    SpaceKind kind;
    int dimension = 0;
    double base = 10.0;
    std::optional<RTree> tree;
  };
  explicit Space(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

struct Segment {
  Point a;
  Point b;
};

struct WholeSpace {
  bool operator==(const WholeSpace&) const = default;
};
struct MetricBall {
  Point center;
  double radius = 1.0;
  bool operator==(const MetricBall&) const = default;
};
// The l2 box {0 <= x_i <= base^i}.
struct BoxDomain {
  bool operator==(const BoxDomain&) const = default;
};
// Union of the listed tree edges (and their endpoints); must be connected.
struct Subtree {
  std::vector<int> edges;
  bool operator==(const Subtree&) const = default;
};

using ConvexDomain = std::variant<WholeSpace, MetricBall, BoxDomain, Subtree>;

std::string domain_name(const ConvexDomain& domain);

// --- Operations ------------------------------------------------------------

double distance(const Space& space, const Point& x, const Point& y);

// Point z on [x, y] with d(x, z) = t d(x, y); t must lie in [0, 1].
Point geodesic_point(const Space& space, const Point& x, const Point& y, double t);

// Point on [x, y] at distance s from x (s is clamped to [0, d(x, y)]).
Point point_toward(const Space& space, const Point& x, const Point& y, double s);

struct Projection {
  Point point;
  double distance = 0.0;
};

Projection project_to_segment(const Space& space, const Point& p, const Segment& seg);

bool domain_contains(const Space& space, const ConvexDomain& domain, const Point& p);

// Throws invalid_input if the domain does not fit the space.
void validate_domain(const Space& space, const ConvexDomain& domain);

// Moves available from `from` inside `domain`: points at distance `step`
// along evenly spread directions (R^n, hyperbolic plane) or every branch of
// the tree, cut back to the domain boundary when they leave it. Index 0 is
// the extension of the geodesic from `away_from` through `from` whenever
// away_from != from and the space is uniquely extendable (not a tree).
std::vector<Point> step_candidates(const Space& space, const ConvexDomain& domain,
                                   const Point& from, const Point& away_from,
                                   double step, int directions);

// Farthest point of [from, target] still inside the domain (from must be
// inside).
Point clip_to_domain(const Space& space, const ConvexDomain& domain,
                     const Point& from, const Point& target);

// Distance s_i = d * i / n, rounded onto a dyadic grid in R-trees so that
// tree arithmetic on sampled points stays exact.
double sample_distance(const Space& space, double d, int i, int n);

// Seeded random points for empirical estimators. `scale` bounds the sampled
// region: coordinate half-width in R^n, hyperbolic radius around the base
// point i, maximal offset along the ray edge of a tree.
class PointSampler {
 public:
  PointSampler(std::uint64_t seed, double scale = 1.0) : rng_(seed), scale_(scale) {}

  Point sample(const Space& space);
  double scale() const { return scale_; }
  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
  double scale_;
};

// Random finite tree with integer edge lengths in [1, max_length].
RTree random_tree(std::uint64_t seed, int vertex_count, int max_length);

// Tripod: center 0, leaves 1..3, unit edges.
RTree tripod_tree();

}  // namespace geolab
