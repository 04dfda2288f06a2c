#include <algorithm>
#include <cmath>
#include <numbers>

#include "detail.hpp"

namespace geolab {

namespace hp = detail::half_plane;
namespace tr = detail::tree;

Space Space::euclidean(int dimension) {
  if (dimension < 1) fail(ErrorCode::invalid_input, "euclidean dimension must be >= 1");
  return Space(std::make_shared<const Impl>(Impl{SpaceKind::euclidean, dimension, 10.0, {}}));
}

Space Space::hyperbolic() {
  return Space(std::make_shared<const Impl>(Impl{SpaceKind::hyperbolic, 2, 10.0, {}}));
}

Space Space::l2box(int dimension, double base) {
  if (dimension < 1) fail(ErrorCode::invalid_input, "l2box dimension must be >= 1");
  if (!(base > 1.0)) fail(ErrorCode::invalid_input, "l2box base must be > 1");
  return Space(std::make_shared<const Impl>(Impl{SpaceKind::l2box, dimension, base, {}}));
}

Space Space::rtree(RTree tree) {
  return Space(std::make_shared<const Impl>(Impl{SpaceKind::rtree, 1, 10.0, std::move(tree)}));
}

const RTree& Space::tree() const {
  if (!impl_->tree) fail(ErrorCode::invalid_input, "space is not an R-tree");
  return *impl_->tree;
}

bool Space::same_geometry(const Space& other) const {
  if (same_instance(other)) return true;
  if (kind() != other.kind() || dimension() != other.dimension() || base() != other.base()) {
    return false;
  }
  if (kind() != SpaceKind::rtree) return true;
  return tree().vertex_count() == other.tree().vertex_count() &&
         tree().edges() == other.tree().edges();
}

double Space::box_bound(int i) const { return std::pow(base(), i); }

void Space::validate(const Point& p) const {
  if (p.kind() != kind()) {
    fail(ErrorCode::invalid_input, std::string("point of kind ") + to_string(p.kind()) +
                                       " used in a " + to_string(kind()) + " space");
  }
  switch (kind()) {
    case SpaceKind::euclidean:
    case SpaceKind::l2box: {
      const auto c = p.coords();
      if (static_cast<int>(c.size()) != dimension()) {
        fail(ErrorCode::invalid_input, "point dimension does not match the space");
      }
      for (double v : c) {
        if (!std::isfinite(v)) fail(ErrorCode::invalid_input, "non-finite coordinate");
      }
      break;
    }
    case SpaceKind::hyperbolic: {
      const auto& h = p.half_plane();
      if (!std::isfinite(h.x) || !std::isfinite(h.y) || !(h.y > 0.0)) {
        fail(ErrorCode::invalid_input, "hyperbolic point outside the upper half-plane");
      }
      break;
    }
    case SpaceKind::rtree:
      tr::validate(tree(), p.tree());
      break;
  }
}

std::string domain_name(const ConvexDomain& domain) {
  struct Visitor {
    std::string operator()(const WholeSpace&) const { return "whole"; }
    std::string operator()(const MetricBall&) const { return "ball"; }
    std::string operator()(const BoxDomain&) const { return "box"; }
    std::string operator()(const Subtree&) const { return "subtree"; }
  };
  return std::visit(Visitor{}, domain);
}

namespace {

double vector_distance(std::span<const double> a, std::span<const double> b) {
  // Scaled accumulation keeps 1e6-sized box coordinates exact enough.
  double scale = 0.0;
  for (size_t i = 0; i < a.size(); ++i) scale = std::max(scale, std::abs(a[i] - b[i]));
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double r = (a[i] - b[i]) / scale;
    sum += r * r;
  }
  return scale * std::sqrt(sum);
}

Point vector_point(SpaceKind kind, std::vector<double> x) {
  return kind == SpaceKind::l2box ? Point::l2box(std::move(x)) : Point::euclidean(std::move(x));
}

Point vector_lerp(SpaceKind kind, std::span<const double> a, std::span<const double> b, double t) {
  std::vector<double> out(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    const double v = a[i] + t * (b[i] - a[i]);
    // The exact value lies between the endpoints; keep rounding there too.
    out[i] = std::clamp(v, std::min(a[i], b[i]), std::max(a[i], b[i]));
  }
  return vector_point(kind, std::move(out));
}

void check_pair(const Space& space, const Point& x, const Point& y) {
  space.validate(x);
  space.validate(y);
}

Projection project_half_plane(const Space& space, const Point& p, const Point& a, const Point& b) {
  const double d = distance(space, a, b);
  const double c = distance(space, a, p);
  double s = 0.0;
  if (c > 0.0) {
    // Right triangle a, foot, p with hypotenuse c and angle theta at a.
    const auto dir_b = hp::direction(a.half_plane(), b.half_plane());
    const auto dir_p = hp::direction(a.half_plane(), p.half_plane());
    const double theta = std::abs(std::arg(dir_p * std::conj(dir_b)));
    const double cos_t = std::cos(theta);
    if (cos_t > 0.0) {
      const double th = std::tanh(c) * cos_t;
      if (th < 0.9) {
        s = std::atanh(th);
      } else {
        const double h = std::asinh(std::sinh(c) * std::sin(theta));
        s = std::acosh(std::max(1.0, std::cosh(c) / std::cosh(h)));
      }
    }
    s = std::clamp(s, 0.0, d);
  }
  Projection best{point_toward(space, a, b, s), 0.0};
  best.distance = distance(space, p, best.point);
  for (const Point* end : {&a, &b}) {
    const double de = distance(space, p, *end);
    if (de < best.distance) best = {*end, de};
  }
  return best;
}

}  // namespace

double distance(const Space& space, const Point& x, const Point& y) {
  check_pair(space, x, y);
  switch (space.kind()) {
    case SpaceKind::euclidean:
    case SpaceKind::l2box:
      return vector_distance(x.coords(), y.coords());
    case SpaceKind::hyperbolic:
      return hp::distance(x.half_plane(), y.half_plane());
    case SpaceKind::rtree:
      return tr::distance(space.tree(), x.tree(), y.tree());
  }
  return 0.0;
}

Point geodesic_point(const Space& space, const Point& x, const Point& y, double t) {
  if (!(t >= 0.0 && t <= 1.0)) fail(ErrorCode::invalid_input, "geodesic parameter outside [0, 1]");
  check_pair(space, x, y);
  if (t == 0.0) return x;
  if (t == 1.0) return y;
  if (space.is_vector_space()) return vector_lerp(space.kind(), x.coords(), y.coords(), t);
  return point_toward(space, x, y, t * distance(space, x, y));
}

Point point_toward(const Space& space, const Point& x, const Point& y, double s) {
  check_pair(space, x, y);
  switch (space.kind()) {
    case SpaceKind::euclidean:
    case SpaceKind::l2box: {
      const double d = vector_distance(x.coords(), y.coords());
      if (s <= 0.0 || d == 0.0) return x;
      if (s >= d) return y;
      return vector_lerp(space.kind(), x.coords(), y.coords(), s / d);
    }
    case SpaceKind::hyperbolic: {
      const HalfPlaneCoords c = hp::toward(x.half_plane(), y.half_plane(), s);
      return Point::half_plane(c.x, c.y);
    }
    case SpaceKind::rtree: {
      const TreeLocation loc = tr::toward(space.tree(), x.tree(), y.tree(), s);
      return loc.on_vertex() ? Point::tree_vertex(loc.vertex) : Point::tree_edge(loc.edge, loc.offset);
    }
  }
  return x;
}

Projection project_to_segment(const Space& space, const Point& p, const Segment& seg) {
  check_pair(space, seg.a, seg.b);
  space.validate(p);
  const double d = distance(space, seg.a, seg.b);
  if (d == 0.0) return {seg.a, distance(space, p, seg.a)};
  switch (space.kind()) {
    case SpaceKind::euclidean:
    case SpaceKind::l2box: {
      const auto a = seg.a.coords();
      const auto b = seg.b.coords();
      const auto q = p.coords();
      double dot = 0.0;
      double len2 = 0.0;
      for (size_t i = 0; i < a.size(); ++i) {
        dot += (q[i] - a[i]) * (b[i] - a[i]);
        len2 += (b[i] - a[i]) * (b[i] - a[i]);
      }
      const double t = std::clamp(dot / len2, 0.0, 1.0);
      Point foot = geodesic_point(space, seg.a, seg.b, t);
      const double dist = distance(space, p, foot);
      return {std::move(foot), dist};
    }
    case SpaceKind::hyperbolic:
      return project_half_plane(space, p, seg.a, seg.b);
    case SpaceKind::rtree: {
      // The branch point of p off [a, b] sits at (b|p)_a from a.
      const double s = 0.5 * (d + distance(space, seg.a, p) - distance(space, seg.b, p));
      Point foot = point_toward(space, seg.a, seg.b, std::clamp(s, 0.0, d));
      const double dist = distance(space, p, foot);
      return {std::move(foot), dist};
    }
  }
  return {seg.a, 0.0};
}

void validate_domain(const Space& space, const ConvexDomain& domain) {
  if (const auto* ball = std::get_if<MetricBall>(&domain)) {
    space.validate(ball->center);
    if (!(ball->radius >= 0.0)) fail(ErrorCode::invalid_input, "ball radius must be >= 0");
  } else if (std::holds_alternative<BoxDomain>(domain)) {
    if (space.kind() != SpaceKind::l2box) {
      fail(ErrorCode::invalid_input, "box domain requires an l2box space");
    }
  } else if (const auto* sub = std::get_if<Subtree>(&domain)) {
    if (space.kind() != SpaceKind::rtree) {
      fail(ErrorCode::invalid_input, "subtree domain requires an rtree space");
    }
    const RTree& t = space.tree();
    if (sub->edges.empty()) fail(ErrorCode::invalid_input, "subtree domain needs at least one edge");
    for (int e : sub->edges) {
      if (e < 0 || e >= static_cast<int>(t.edges().size())) {
        fail(ErrorCode::invalid_input, "subtree references an unknown edge");
      }
    }
    // Connected: grow from the first edge through shared endpoints.
    std::vector<int> reached{sub->edges.front()};
    std::vector<bool> used(sub->edges.size(), false);
    used[0] = true;
    for (bool grew = true; grew;) {
      grew = false;
      for (size_t i = 0; i < sub->edges.size(); ++i) {
        if (used[i]) continue;
        const TreeEdge& e = t.edge(sub->edges[i]);
        for (int r : reached) {
          const TreeEdge& f = t.edge(r);
          const bool touch = e.from == f.from || e.from == f.to || (!e.is_ray() && (e.to == f.from || e.to == f.to));
          if (touch) {
            used[i] = true;
            reached.push_back(sub->edges[i]);
            grew = true;
            break;
          }
        }
      }
    }
    if (reached.size() != sub->edges.size()) {
      fail(ErrorCode::invalid_input, "subtree domain is not connected");
    }
  }
}

bool domain_contains(const Space& space, const ConvexDomain& domain, const Point& p) {
  validate_domain(space, domain);
  space.validate(p);
  if (std::holds_alternative<WholeSpace>(domain)) return true;
  if (const auto* ball = std::get_if<MetricBall>(&domain)) {
    return distance(space, ball->center, p) <= ball->radius;
  }
  if (std::holds_alternative<BoxDomain>(domain)) {
    const auto c = p.coords();
    for (size_t i = 0; i < c.size(); ++i) {
      if (!(c[i] >= 0.0 && c[i] <= space.box_bound(static_cast<int>(i) + 1))) return false;
    }
    return true;
  }
  const auto& sub = std::get<Subtree>(domain);
  return tr::location_on_edges(space.tree(), p.tree(), sub.edges);
}

Point clip_to_domain(const Space& space, const ConvexDomain& domain, const Point& from,
                     const Point& target) {
  if (domain_contains(space, domain, target)) return target;
  if (!domain_contains(space, domain, from)) {
    fail(ErrorCode::invalid_input, "clip_to_domain needs a starting point inside the domain");
  }
  const double d = distance(space, from, target);

  if (std::holds_alternative<BoxDomain>(domain)) {
    const auto a = from.coords();
    const auto b = target.coords();
    double t = 1.0;
    for (size_t i = 0; i < a.size(); ++i) {
      const double v = b[i] - a[i];
      const double ub = space.box_bound(static_cast<int>(i) + 1);
      if (v > 0.0 && a[i] + v > ub) t = std::min(t, (ub - a[i]) / v);
      if (v < 0.0 && a[i] + v < 0.0) t = std::min(t, -a[i] / v);
    }
    std::vector<double> out(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
      out[i] = std::clamp(a[i] + t * (b[i] - a[i]), 0.0, space.box_bound(static_cast<int>(i) + 1));
    }
    return Point::l2box(std::move(out));
  }

  if (const auto* sub = std::get_if<Subtree>(&domain)) {
    // The in-domain part of [from, target] ends at a vertex.
    const RTree& t = space.tree();
    double best = 0.0;
    for (int v = 0; v < t.vertex_count(); ++v) {
      const Point pv = Point::tree_vertex(v);
      const double dv = distance(space, from, pv);
      if (dv > best && dv + distance(space, pv, target) == d &&
          tr::location_on_edges(t, pv.tree(), sub->edges)) {
        best = dv;
      }
    }
    return point_toward(space, from, target, best);
  }

  // Metric balls: the in-domain part of the segment is [0, s*]; bisect for s*.
  double lo = 0.0;
  double hi = d;
  for (int i = 0; i < 80 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (domain_contains(space, domain, point_toward(space, from, target, mid))) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return point_toward(space, from, target, lo);
}

std::vector<Point> step_candidates(const Space& space, const ConvexDomain& domain,
                                   const Point& from, const Point& away_from, double step,
                                   int directions) {
  if (directions < 2) fail(ErrorCode::invalid_input, "need at least two candidate directions");
  space.validate(from);
  space.validate(away_from);
  std::vector<Point> raw;

  switch (space.kind()) {
    case SpaceKind::euclidean:
    case SpaceKind::l2box: {
      const auto m = from.coords();
      const size_t n = m.size();
      auto push_dir = [&](std::vector<double> dir) {
        std::vector<double> x(n);
        for (size_t i = 0; i < n; ++i) x[i] = m[i] + step * dir[i];
        raw.push_back(vector_point(space.kind(), std::move(x)));
      };
      const double gap = distance(space, from, away_from);
      if (gap > 0.0) {
        const auto l = away_from.coords();
        std::vector<double> dir(n);
        for (size_t i = 0; i < n; ++i) dir[i] = (m[i] - l[i]) / gap;
        push_dir(std::move(dir));
      }
      if (n == 2) {
        for (int j = 0; j < directions; ++j) {
          const double a = 2.0 * std::numbers::pi * j / directions;
          push_dir({std::cos(a), std::sin(a)});
        }
      } else {
        for (size_t i = 0; i < n; ++i) {
          for (double sign : {1.0, -1.0}) {
            std::vector<double> dir(n, 0.0);
            dir[i] = sign;
            push_dir(std::move(dir));
          }
        }
      }
      break;
    }
    case SpaceKind::hyperbolic: {
      const HalfPlaneCoords& m = from.half_plane();
      if (!(away_from == from) && distance(space, from, away_from) > 0.0) {
        const hp::Complex away = -hp::direction(m, away_from.half_plane());
        const HalfPlaneCoords c = hp::shoot(m, away, step);
        raw.push_back(Point::half_plane(c.x, c.y));
      }
      for (int j = 0; j < directions; ++j) {
        const double a = 2.0 * std::numbers::pi * j / directions;
        const HalfPlaneCoords c = hp::shoot(m, std::polar(1.0, a), step);
        raw.push_back(Point::half_plane(c.x, c.y));
      }
      break;
    }
    case SpaceKind::rtree: {
      const RTree& t = space.tree();
      std::function<bool(int)> allowed = [](int) { return true; };
      if (const auto* sub = std::get_if<Subtree>(&domain)) {
        allowed = [sub](int e) {
          return std::find(sub->edges.begin(), sub->edges.end(), e) != sub->edges.end();
        };
      }
      for (const TreeLocation& loc : tr::walk_all(t, from.tree(), step, allowed)) {
        raw.push_back(loc.on_vertex() ? Point::tree_vertex(loc.vertex)
                                      : Point::tree_edge(loc.edge, loc.offset));
      }
      break;
    }
  }

  std::vector<Point> out;
  out.reserve(raw.size());
  for (const Point& c : raw) out.push_back(clip_to_domain(space, domain, from, c));
  return out;
}

double sample_distance(const Space& space, double d, int i, int n) {
  if (i <= 0) return 0.0;
  if (i >= n) return d;
  double s = d * i / n;
  if (space.kind() == SpaceKind::rtree) {
    constexpr double kGrid = 1048576.0;  // 2^20
    s = std::clamp(std::round(s * kGrid) / kGrid, 0.0, d);
  }
  return s;
}

Point PointSampler::sample(const Space& space) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  switch (space.kind()) {
    case SpaceKind::euclidean: {
      std::vector<double> x(static_cast<size_t>(space.dimension()));
      for (double& v : x) v = scale_ * (2.0 * unit(rng_) - 1.0);
      return Point::euclidean(std::move(x));
    }
    case SpaceKind::l2box: {
      std::vector<double> x(static_cast<size_t>(space.dimension()));
      for (size_t i = 0; i < x.size(); ++i) {
        x[i] = unit(rng_) * space.box_bound(static_cast<int>(i) + 1);
      }
      return Point::l2box(std::move(x));
    }
    case SpaceKind::hyperbolic: {
      const double r = scale_ * unit(rng_);
      const double a = 2.0 * std::numbers::pi * unit(rng_);
      const HalfPlaneCoords c = hp::shoot({0.0, 1.0}, std::polar(1.0, a), r);
      return Point::half_plane(c.x, c.y);
    }
    case SpaceKind::rtree: {
      const RTree& t = space.tree();
      const int edge_count = static_cast<int>(t.edges().size());
      if (edge_count == 0) return Point::tree_vertex(0);
      std::uniform_int_distribution<int> pick(0, edge_count - 1);
      const int e = pick(rng_);
      const double len = t.edge(e).is_ray() ? scale_ : t.edge(e).length;
      // Offsets on a 1/8 grid keep tree sums exact.
      const double offset = std::round(unit(rng_) * len * 8.0) / 8.0;
      const TreeLocation loc = tr::normalize(t, TreeLocation{-1, e, std::min(offset, len)});
      return loc.on_vertex() ? Point::tree_vertex(loc.vertex) : Point::tree_edge(loc.edge, loc.offset);
    }
  }
  return {};
}

}  // namespace geolab
