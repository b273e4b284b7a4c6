#include "seaway/geometry.hpp"

#include "detail/segment_walk.hpp"

#include <algorithm>
#include <numeric>

namespace seaway {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// -1 outside, 0 on boundary, +1 inside.
int classify(const Ring& ring, const LocalPoint& p, double tol) {
  const std::size_t n = ring.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const LocalPoint& a = ring[j];
    const LocalPoint& b = ring[i];
    if (segment_distance(p, a, b) <= tol) return 0;
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) inside = !inside;
    }
  }
  return inside ? 1 : -1;
}

struct EdgeRef {
  LocalPoint a, b;
  std::size_t ring;
  std::size_t index;
  double xmin, xmax, ymin, ymax;
};

std::vector<EdgeRef> collect_edges(std::span<const Ring* const> rings) {
  std::vector<EdgeRef> edges;
  for (std::size_t r = 0; r < rings.size(); ++r) {
    const Ring& ring = *rings[r];
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const LocalPoint& a = ring[i];
      const LocalPoint& b = ring[(i + 1) % ring.size()];
      edges.push_back({a, b, r, i, std::min(a.x(), b.x()), std::max(a.x(), b.x()), std::min(a.y(), b.y()),
                       std::max(a.y(), b.y())});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const EdgeRef& l, const EdgeRef& r) { return l.xmin < r.xmin; });
  return edges;
}

bool adjacent(const EdgeRef& e, const EdgeRef& f, std::size_t ring_size) {
  if (e.ring != f.ring) return false;
  const std::size_t d = e.index > f.index ? e.index - f.index : f.index - e.index;
  return d == 1 || d == ring_size - 1;
}

// Sweep over all ring edges; reports the first conflicting pair. Edges of the
// same ring that share a vertex only conflict when they fold back on each other.
bool any_conflict(std::span<const Ring* const> rings) {
  const auto edges = collect_edges(rings);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const EdgeRef& e = edges[i];
    for (std::size_t j = i + 1; j < edges.size() && edges[j].xmin <= e.xmax; ++j) {
      const EdgeRef& f = edges[j];
      if (f.ymin > e.ymax || f.ymax < e.ymin) continue;
      if (adjacent(e, f, rings[e.ring]->size())) {
        if (rings[e.ring]->size() == 3) continue;
        // Shared vertex: conflict only when collinear and pointing back.
        const LocalPoint shared = (e.a == f.b) ? e.a : e.b;
        const LocalPoint u = ((e.a == shared) ? e.b : e.a) - shared;
        const LocalPoint v = ((f.a == shared) ? f.b : f.a) - shared;
        if (cross2(u, v) == 0.0 && u.dot(v) > 0.0) return true;
        continue;
      }
      if (segments_intersect(e.a, e.b, f.a, f.b)) return true;
    }
  }
  return false;
}

void dp_chain(const Ring& ring, std::size_t first, std::size_t last, double eps, std::vector<char>& keep) {
  const std::size_t n = ring.size();
  std::vector<std::pair<std::size_t, std::size_t>> stack{{first, last}};
  while (!stack.empty()) {
    auto [lo, hi] = stack.back();
    stack.pop_back();
    if (hi <= lo + 1) continue;
    const LocalPoint& a = ring[lo % n];
    const LocalPoint& b = ring[hi % n];
    double best = -1.0;
    std::size_t best_i = lo;
    for (std::size_t i = lo + 1; i < hi; ++i) {
      const double d = segment_distance(ring[i % n], a, b);
      if (d > best) {
        best = d;
        best_i = i;
      }
    }
    if (best > eps) {
      keep[best_i % n] = 1;
      stack.emplace_back(lo, best_i);
      stack.emplace_back(best_i, hi);
    }
  }
}

}  // namespace

void GeoFilter::validate() const {
  if (!(lat_min < lat_max) || !(lon_min < lon_max))
    throw InvalidInput("geofilter requires lat_min < lat_max and lon_min < lon_max");
  if (!seaway::valid({lat_min, lon_min}) || !seaway::valid({lat_max, lon_max}))
    throw InvalidInput("geofilter corners out of range");
}

bool valid(const GeoPoint& p) {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 && p.lat <= 90.0 && p.lon >= -180.0 &&
         p.lon <= 180.0;
}

LocalPoint project(const GeoPoint& p, const GeoPoint& origin) {
  if (!valid(p) || !valid(origin)) throw InvalidInput("geodetic coordinate out of range");
  if (std::abs(p.lat - origin.lat) >= 1.0) throw InvalidInput("point too far from projection origin");
  return project_unbounded(p, origin);
}

LocalPoint project_unbounded(const GeoPoint& p, const GeoPoint& origin) {
  const double n = (p.lat - origin.lat) * kDegToRad * kEarthRadius;
  const double e = (p.lon - origin.lon) * kDegToRad * kEarthRadius * std::cos(origin.lat * kDegToRad);
  return local_point(n, e);
}

GeoPoint unproject(const LocalPoint& p, const GeoPoint& origin) {
  const double lat = origin.lat + north(p) / (kDegToRad * kEarthRadius);
  const double lon = origin.lon + east(p) / (kDegToRad * kEarthRadius * std::cos(origin.lat * kDegToRad));
  return {lat, lon};
}

Box filter_box(const GeoFilter& filter, const GeoPoint& origin) {
  Box box;
  box.extend(project(GeoPoint{filter.lat_min, filter.lon_min}, origin));
  box.extend(project(GeoPoint{filter.lat_max, filter.lon_max}, origin));
  return box;
}

double area(const NavPolygon& poly) {
  double a = std::abs(signed_area(poly.exterior));
  for (const Ring& h : poly.holes) a -= std::abs(signed_area(h));
  return a;
}

Box bounds(const Ring& ring) {
  Box b;
  for (const auto& p : ring) b.extend(p);
  return b;
}

Box bounds(const NavPolygon& poly) { return bounds(poly.exterior); }

Box bounds(std::span<const NavPolygon> polys) {
  Box b;
  for (const auto& p : polys) b.extend(bounds(p));
  return b;
}

bool segments_intersect(const LocalPoint& p1, const LocalPoint& p2, const LocalPoint& q1, const LocalPoint& q2) {
  const double d1 = orient(q1, q2, p1);
  const double d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1);
  const double d4 = orient(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  auto on_segment = [](const LocalPoint& a, const LocalPoint& b, const LocalPoint& p) {
    return p.x() >= std::min(a.x(), b.x()) && p.x() <= std::max(a.x(), b.x()) && p.y() >= std::min(a.y(), b.y()) &&
           p.y() <= std::max(a.y(), b.y());
  };
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

bool ring_self_intersects(const Ring& ring) {
  const Ring* rings[] = {&ring};
  return any_conflict(rings);
}

bool ring_contains(const Ring& ring, const LocalPoint& p, double tol) { return classify(ring, p, tol) >= 0; }

bool contains(const NavPolygon& poly, const LocalPoint& p) {
  if (classify(poly.exterior, p, kBoundaryTolerance) < 0) return false;
  for (const Ring& h : poly.holes)
    if (classify(h, p, kBoundaryTolerance) > 0) return false;
  return true;
}

bool contains(std::span<const NavPolygon> polys, const LocalPoint& p) {
  return std::any_of(polys.begin(), polys.end(), [&](const NavPolygon& poly) { return contains(poly, p); });
}

Ring simplify(const Ring& ring, double epsilon) {
  if (epsilon < 0.0) throw InvalidInput("simplify epsilon must be non-negative");
  const std::size_t n = ring.size();
  if (epsilon == 0.0 || n <= 3) return ring;

  // Anchor at vertex 0 and the vertex farthest from it, then simplify both chains.
  std::size_t far = 1;
  for (std::size_t i = 2; i < n; ++i)
    if ((ring[i] - ring[0]).squaredNorm() > (ring[far] - ring[0]).squaredNorm()) far = i;

  std::vector<char> keep(n, 0);
  keep[0] = keep[far] = 1;
  dp_chain(ring, 0, far, epsilon, keep);
  dp_chain(ring, far, n, epsilon, keep);

  Ring out;
  for (std::size_t i = 0; i < n; ++i)
    if (keep[i]) out.push_back(ring[i]);
  if (out.size() < 3 || out.size() == n) return ring;
  if (std::abs(signed_area(out)) <= 0.0 || (signed_area(out) > 0) != (signed_area(ring) > 0)) return ring;
  if (ring_self_intersects(out)) return ring;
  return out;
}

NavPolygon simplify(const NavPolygon& poly, double epsilon) {
  NavPolygon out = poly;
  out.exterior = simplify(poly.exterior, epsilon);
  for (auto& h : out.holes) h = simplify(h, epsilon);
  try {
    validate(out);
  } catch (const InvalidInput&) {
    return poly;
  }
  return out;
}

NavPolygon normalized(NavPolygon poly) {
  auto clean = [](Ring& ring, bool ccw) {
    Ring out;
    for (const auto& p : ring)
      if (out.empty() || out.back() != p) out.push_back(p);
    while (out.size() > 1 && out.front() == out.back()) out.pop_back();
    if (out.size() >= 3 && (signed_area(out) > 0) != ccw) std::reverse(out.begin(), out.end());
    ring = std::move(out);
  };
  clean(poly.exterior, true);
  for (auto& h : poly.holes) clean(h, false);
  return poly;
}

void validate(const NavPolygon& poly) {
  if (!(poly.depth_min >= 0.0 && poly.depth_min <= poly.depth_max))
    throw InvalidInput("polygon depths must satisfy 0 <= depth_min <= depth_max");
  auto check_ring = [](const Ring& r, const char* what) {
    if (r.size() < 3) throw InvalidInput(std::string(what) + " ring has fewer than 3 vertices");
    for (const auto& p : r)
      if (!p.allFinite()) throw InvalidInput(std::string(what) + " ring has non-finite vertex");
    if (signed_area(r) == 0.0) throw InvalidInput(std::string(what) + " ring is degenerate");
  };
  check_ring(poly.exterior, "exterior");
  if (signed_area(poly.exterior) < 0.0) throw InvalidInput("exterior ring must be counter-clockwise");
  for (const auto& h : poly.holes) {
    check_ring(h, "hole");
    if (signed_area(h) > 0.0) throw InvalidInput("hole ring must be clockwise");
  }

  std::vector<const Ring*> rings{&poly.exterior};
  for (const auto& h : poly.holes) rings.push_back(&h);
  if (any_conflict(rings)) throw InvalidInput("polygon rings self-intersect or touch");

  // No edges cross, so one vertex decides containment.
  for (std::size_t i = 0; i < poly.holes.size(); ++i) {
    if (classify(poly.exterior, poly.holes[i].front(), 0.0) <= 0)
      throw InvalidInput("hole not strictly inside exterior");
    for (std::size_t j = 0; j < poly.holes.size(); ++j)
      if (i != j && classify(poly.holes[j], poly.holes[i].front(), 0.0) >= 0)
        throw InvalidInput("holes overlap");
  }
}

bool segment_inside(std::span<const NavPolygon> polys, const LocalPoint& a, const LocalPoint& b) {
  if (!contains(polys, a) || !contains(polys, b)) return false;
  std::vector<double> ts;
  auto visit_ring = [&](const Ring& ring) {
    for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++)
      detail::crossing_params(a, b, ring[j], ring[i], ts);
  };
  for (const auto& poly : polys) {
    visit_ring(poly.exterior);
    for (const auto& h : poly.holes) visit_ring(h);
  }
  return detail::sub_segments_inside(a, b, ts, [&](const LocalPoint& p) { return contains(polys, p); });
}

std::vector<NavPolygon> clip_to_filter(const NavPolygon& poly, const GeoFilter& filter, const GeoPoint& origin) {
  return clip_to_box(poly, filter_box(filter, origin));
}

}  // namespace seaway
