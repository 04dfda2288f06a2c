#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "geolab/spaces.hpp"

namespace geolab::detail {

namespace half_plane {

using Complex = std::complex<double>;

double distance(const HalfPlaneCoords& p, const HalfPlaneCoords& q);

// Unit tangent at p pointing toward q, expressed in the Cayley disk frame
// centered at p (the direction toward +infinity is 1). Requires q != p.
Complex direction(const HalfPlaneCoords& p, const HalfPlaneCoords& q);

// Point at distance s from p along the tangent `dir` (unit complex).
HalfPlaneCoords shoot(const HalfPlaneCoords& p, Complex dir, double s);

HalfPlaneCoords toward(const HalfPlaneCoords& p, const HalfPlaneCoords& q, double s);

HalfPlaneCoords from_disk(double u, double v);
std::pair<double, double> to_disk(const HalfPlaneCoords& p);

}  // namespace half_plane

namespace tree {

double distance(const RTree& t, const TreeLocation& a, const TreeLocation& b);
TreeLocation toward(const RTree& t, const TreeLocation& a, const TreeLocation& b, double s);
TreeLocation normalize(const RTree& t, TreeLocation loc);
void validate(const RTree& t, const TreeLocation& loc);

// Every point reached by walking `step` from `from` without backtracking,
// restricted to edges accepted by `allowed`; walks that hit a dead end stop
// at the dead-end vertex.
std::vector<TreeLocation> walk_all(const RTree& t, const TreeLocation& from, double step,
                                   const std::function<bool(int)>& allowed);

bool location_on_edges(const RTree& t, const TreeLocation& loc,
                       const std::vector<int>& edges);

}  // namespace tree

}  // namespace geolab::detail
