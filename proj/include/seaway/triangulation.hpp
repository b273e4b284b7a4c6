#pragma once

#include "seaway/types.hpp"

#include <cmath>
#include <span>

namespace seaway {

struct Triangle {
  LocalPoint a, b, c;

  double signed_area() const { return 0.5 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x()); }
  double area() const { return std::abs(signed_area()); }
  LocalPoint centroid() const { return (a + b + c) / 3.0; }
};

//! Constrained Delaunay triangulation of one polygon with holes. Every ring
//! edge is a constraint; triangles outside the exterior or inside a hole are
//! discarded. Returned triangles are counter-clockwise.
std::vector<Triangle> constrained_delaunay(const NavPolygon& poly);

//! True when no vertex of the triangulation lies strictly inside the
//! circumcircle of a triangle sharing an unconstrained edge with it.
bool locally_delaunay(std::span<const Triangle> tris, const NavPolygon& poly);

}  // namespace seaway
