#include "seaway/geometry.hpp"

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/box.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

namespace seaway {

namespace {

namespace bg = boost::geometry;
using BPoint = bg::model::d2::point_xy<double>;
using BPolygon = bg::model::polygon<BPoint, /*ClockWise=*/false, /*Closed=*/false>;
using BMulti = bg::model::multi_polygon<BPolygon>;
using BBox = bg::model::box<BPoint>;

constexpr double kMinPieceArea = 1e-6;

template <typename BRing>
void to_boost(const Ring& ring, BRing& out) {
  for (const auto& p : ring) out.push_back(BPoint(p.x(), p.y()));
}

template <typename BRing>
Ring from_boost(const BRing& ring) {
  Ring out;
  out.reserve(ring.size());
  for (const auto& p : ring) out.emplace_back(p.x(), p.y());
  return out;
}

}  // namespace

std::vector<NavPolygon> clip_to_box(const NavPolygon& poly, const Box& box) {
  const Box pb = bounds(poly);
  if (!pb.intersects(box)) return {};
  if (box.contains(pb.min) && box.contains(pb.max)) return {poly};

  BPolygon bp;
  to_boost(poly.exterior, bp.outer());
  for (const auto& h : poly.holes) {
    bp.inners().emplace_back();
    to_boost(h, bp.inners().back());
  }
  const BBox bbox(BPoint(box.min.x(), box.min.y()), BPoint(box.max.x(), box.max.y()));
  BMulti pieces;
  bg::intersection(bp, bbox, pieces);

  std::vector<NavPolygon> out;
  for (const auto& piece : pieces) {
    NavPolygon np;
    np.exterior = from_boost(piece.outer());
    for (const auto& inner : piece.inners()) np.holes.push_back(from_boost(inner));
    np.depth_min = poly.depth_min;
    np.depth_max = poly.depth_max;
    np = normalized(std::move(np));
    if (np.exterior.size() < 3 || area(np) < kMinPieceArea) continue;
    out.push_back(std::move(np));
  }
  return out;
}

}  // namespace seaway
