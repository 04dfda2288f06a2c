#include <cmath>
#include <sstream>

#include "detail.hpp"

namespace geolab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_input: return "invalid-input";
    case ErrorCode::degenerate_input: return "degenerate-input";
    case ErrorCode::precondition_violated: return "precondition-violated";
    case ErrorCode::unsupported_space: return "unsupported-space";
    case ErrorCode::insufficient_data: return "insufficient-data";
    case ErrorCode::insufficient_curve: return "insufficient-curve";
    case ErrorCode::invalid_alpha: return "invalid-alpha";
    case ErrorCode::threshold_not_met: return "threshold-not-met";
    case ErrorCode::strategy_fault: return "strategy-fault";
    case ErrorCode::parse_error: return "parse-error";
  }
  return "unknown";
}

const char* to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::euclidean: return "euclidean";
    case SpaceKind::hyperbolic: return "hyperbolic";
    case SpaceKind::rtree: return "rtree";
    case SpaceKind::l2box: return "l2box";
  }
  return "unknown";
}

SpaceKind space_kind_from_string(const std::string& name) {
  if (name == "euclidean") return SpaceKind::euclidean;
  if (name == "hyperbolic") return SpaceKind::hyperbolic;
  if (name == "rtree") return SpaceKind::rtree;
  if (name == "l2box") return SpaceKind::l2box;
  fail(ErrorCode::parse_error, "unknown space kind '" + name + "'");
}

Point Point::euclidean(std::vector<double> coords) {
  Point p;
  p.kind_ = SpaceKind::euclidean;
  p.data_ = VectorCoords{std::move(coords)};
  return p;
}

Point Point::l2box(std::vector<double> coords) {
  Point p;
  p.kind_ = SpaceKind::l2box;
  p.data_ = VectorCoords{std::move(coords)};
  return p;
}

Point Point::half_plane(double x, double y) {
  Point p;
  p.kind_ = SpaceKind::hyperbolic;
  p.data_ = HalfPlaneCoords{x, y};
  return p;
}

Point Point::disk(double u, double v) {
  if (!(u * u + v * v < 1.0)) fail(ErrorCode::invalid_input, "disk point must satisfy |p| < 1");
  const HalfPlaneCoords c = detail::half_plane::from_disk(u, v);
  return half_plane(c.x, c.y);
}

Point Point::tree_vertex(int vertex) {
  Point p;
  p.kind_ = SpaceKind::rtree;
  p.data_ = TreeLocation{vertex, -1, 0.0};
  return p;
}

Point Point::tree_edge(int edge, double offset) {
  Point p;
  p.kind_ = SpaceKind::rtree;
  p.data_ = TreeLocation{-1, edge, offset};
  return p;
}

std::span<const double> Point::coords() const {
  const auto* v = std::get_if<VectorCoords>(&data_);
  if (v == nullptr) fail(ErrorCode::invalid_input, "point has no vector coordinates");
  return v->x;
}

const HalfPlaneCoords& Point::half_plane() const {
  const auto* h = std::get_if<HalfPlaneCoords>(&data_);
  if (h == nullptr) fail(ErrorCode::invalid_input, "point is not a hyperbolic point");
  return *h;
}

std::pair<double, double> Point::to_disk() const {
  return detail::half_plane::to_disk(half_plane());
}

const TreeLocation& Point::tree() const {
  const auto* t = std::get_if<TreeLocation>(&data_);
  if (t == nullptr) fail(ErrorCode::invalid_input, "point is not a tree point");
  return *t;
}

std::string to_string(const Point& p) {
  std::ostringstream os;
  os.precision(17);
  switch (p.kind()) {
    case SpaceKind::euclidean:
    case SpaceKind::l2box: {
      os << '(';
      const auto c = p.coords();
      for (size_t i = 0; i < c.size(); ++i) os << (i ? ", " : "") << c[i];
      os << ')';
      break;
    }
    case SpaceKind::hyperbolic:
      os << "uhp(" << p.half_plane().x << ", " << p.half_plane().y << ')';
      break;
    case SpaceKind::rtree: {
      const TreeLocation& t = p.tree();
      if (t.on_vertex()) {
        os << "v" << t.vertex;
      } else {
        os << "e" << t.edge << '+' << t.offset;
      }
      break;
    }
  }
  return os.str();
}

}  // namespace geolab
