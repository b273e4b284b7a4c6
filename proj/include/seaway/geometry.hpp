#pragma once

#include "seaway/types.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>

namespace seaway {

//! Mean Earth radius used by the equirectangular projection, meters.
inline constexpr double kEarthRadius = 6371008.8;

//! Tolerance under which a point counts as lying on a polygon boundary, meters.
inline constexpr double kBoundaryTolerance = 1e-9;

template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar cross2(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return a.x() * b.y() - a.y() * b.x();
}

//! Twice the signed area of (a, b, c); positive when counter-clockwise.
template <typename Scalar>
Scalar orient(const Point2<Scalar>& a, const Point2<Scalar>& b, const Point2<Scalar>& c) {
  return cross2(b - a, c - a);
}

//! Shoelace area; positive for counter-clockwise rings.
template <typename Scalar>
Scalar signed_area(std::span<const Point2<Scalar>> ring) {
  Scalar twice = 0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) twice += cross2(ring[j], ring[i]);
  return twice / 2;
}

inline double signed_area(const Ring& ring) { return signed_area<double>(std::span<const LocalPoint>(ring)); }

//! Distance from p to the closed segment a-b.
template <typename Scalar>
Scalar segment_distance(const Point2<Scalar>& p, const Point2<Scalar>& a, const Point2<Scalar>& b) {
  const Point2<Scalar> ab = b - a;
  const Scalar len2 = ab.squaredNorm();
  if (len2 == Scalar(0)) return (p - a).norm();
  const Scalar t = std::clamp((p - a).dot(ab) / len2, Scalar(0), Scalar(1));
  return (p - (a + t * ab)).norm();
}

//! Equirectangular projection about `origin`.
LocalPoint project(const GeoPoint& p, const GeoPoint& origin);
GeoPoint unproject(const LocalPoint& p, const GeoPoint& origin);

//! The projection formula without the distance limit. Only meaningful for
//! geometry that is clipped to a nearby window afterwards.
LocalPoint project_unbounded(const GeoPoint& p, const GeoPoint& origin);

bool valid(const GeoPoint& p);

//! Polygon area (exterior minus holes), m^2.
double area(const NavPolygon& poly);
Box bounds(const Ring& ring);
Box bounds(const NavPolygon& poly);
Box bounds(std::span<const NavPolygon> polys);

//! Proper or touching intersection of closed segments p1-p2 and q1-q2.
bool segments_intersect(const LocalPoint& p1, const LocalPoint& p2, const LocalPoint& q1, const LocalPoint& q2);

bool ring_self_intersects(const Ring& ring);

//! Inside-or-on test for a single ring, boundary tolerance `tol`.
bool ring_contains(const Ring& ring, const LocalPoint& p, double tol = kBoundaryTolerance);

//! True iff p is inside the exterior and outside every hole; boundaries count as inside.
bool contains(const NavPolygon& poly, const LocalPoint& p);
bool contains(std::span<const NavPolygon> polys, const LocalPoint& p);

//! Douglas-Peucker simplification of a closed ring. Returns the input when the
//! result would drop below three vertices or self-intersect.
Ring simplify(const Ring& ring, double epsilon);

//! Simplifies every ring; falls back to the original polygon if the simplified
//! rings stop forming a valid polygon.
NavPolygon simplify(const NavPolygon& poly, double epsilon);

//! Drops repeated consecutive vertices and the duplicated closing vertex, then
//! orients the exterior CCW and holes CW.
NavPolygon normalized(NavPolygon poly);

//! Throws InvalidInput naming the violated invariant.
void validate(const NavPolygon& poly);

//! True iff the closed segment a-b lies within the union of `polys`. Shared
//! boundaries between adjacent polygons may be crossed.
bool segment_inside(std::span<const NavPolygon> polys, const LocalPoint& a, const LocalPoint& b);

//! Intersection of poly with an axis-aligned rectangle; pieces smaller than
//! 1e-6 m^2 are dropped. Depth attributes are preserved.
std::vector<NavPolygon> clip_to_box(const NavPolygon& poly, const Box& box);

//! Box covered by a geofilter in the frame anchored at `origin`.
Box filter_box(const GeoFilter& filter, const GeoPoint& origin);

std::vector<NavPolygon> clip_to_filter(const NavPolygon& poly, const GeoFilter& filter, const GeoPoint& origin);

}  // namespace seaway
