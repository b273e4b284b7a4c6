#include "seaway/sampling.hpp"

#include "seaway/log.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace seaway {

namespace {

// Area of the intersection of two CCW triangles by Sutherland-Hodgman.
double overlap_area(const Triangle& s, const Triangle& t) {
  std::vector<LocalPoint> poly{s.a, s.b, s.c};
  const std::array<LocalPoint, 3> clip{t.a, t.b, t.c};
  std::vector<LocalPoint> out;
  for (int k = 0; k < 3 && !poly.empty(); ++k) {
    const LocalPoint& p = clip[k];
    const LocalPoint& q = clip[(k + 1) % 3];
    out.clear();
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const LocalPoint& u = poly[i];
      const LocalPoint& v = poly[(i + 1) % poly.size()];
      const double du = orient<double>(p, q, u);
      const double dv = orient<double>(p, q, v);
      if (du >= 0) out.push_back(u);
      if ((du >= 0) != (dv >= 0)) out.push_back(u + (v - u) * (du / (du - dv)));
    }
    std::swap(poly, out);
  }
  if (poly.size() < 3) return 0.0;
  return std::abs(signed_area<double>(std::span<const LocalPoint>(poly)));
}

Box tri_box(const Triangle& t) {
  Box b;
  b.extend(t.a);
  b.extend(t.b);
  b.extend(t.c);
  return b;
}

void check_overlap(const TriangulatedRegion& r, std::span<const NavPolygon> polys) {
  const std::size_t n = r.triangles.size();
  std::vector<Box> boxes(n);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) {
    boxes[i] = tri_box(r.triangles[i]);
    order[i] = i;
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return boxes[a].min.x() < boxes[b].min.x(); });

  std::map<std::pair<std::uint32_t, std::uint32_t>, double> shared;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = order[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::size_t b = order[j];
      if (boxes[b].min.x() > boxes[a].max.x()) break;
      if (r.source[a] == r.source[b] || !boxes[a].intersects(boxes[b])) continue;
      const double o = overlap_area(r.triangles[a], r.triangles[b]);
      if (o > 0.0) shared[std::minmax(r.source[a], r.source[b])] += o;
    }
  }
  for (const auto& [pair, o] : shared) {
    const double smaller = std::min(area(polys[pair.first]), area(polys[pair.second]));
    if (o > 1e-6 * smaller)
      throw InvalidInput("polygons " + std::to_string(pair.first) + " and " + std::to_string(pair.second) +
                         " overlap by " + std::to_string(o) + " m^2");
  }
}

}  // namespace

std::size_t TriangulatedRegion::locate(double target) const {
  const auto it = std::upper_bound(cum_area.begin(), cum_area.end(), target);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cum_area.begin()), cum_area.size() - 1);
}

TriangulatedRegion triangulate(std::span<const NavPolygon> polys) {
  TriangulatedRegion r;
  for (std::size_t k = 0; k < polys.size(); ++k) {
    if (area(polys[k]) < 1e-6) {
      warn("skipping degenerate polygon " + std::to_string(k));
      ++r.skipped;
      continue;
    }
    for (const Triangle& t : constrained_delaunay(polys[k])) {
      const double a = t.signed_area();
      if (a <= 1e-12) continue;
      r.triangles.push_back(t);
      r.source.push_back(static_cast<std::uint32_t>(k));
      r.total_area += a;
      r.cum_area.push_back(r.total_area);
    }
  }
  check_overlap(r, polys);
  return r;
}

SampleStream::SampleStream(const TriangulatedRegion& region, std::uint64_t seed) : region_(&region), rng_(seed) {
  if (region.empty()) throw InvalidInput("cannot sample an empty region");
}

LocalPoint SampleStream::draw() {
  last_ = region_->locate(rng_.uniform() * region_->total_area);
  const double r1 = rng_.uniform();
  const double r2 = rng_.uniform();
  return sample_triangle(region_->triangles[last_], r1, r2);
}

RejectionStream::RejectionStream(const NavIndex& region, std::uint64_t seed) : region_(&region), rng_(seed) {
  if (region.empty() || region.area() <= 0.0) throw InvalidInput("cannot sample an empty region");
}

RejectionDraw RejectionStream::draw() {
  const Box& box = region_->bounds();
  const LocalPoint size = box.size();
  RejectionDraw d;
  while (true) {
    ++d.attempts;
    const double u = rng_.uniform();
    const double v = rng_.uniform();
    d.point = box.min + LocalPoint(u * size.x(), v * size.y());
    if (region_->contains(d.point)) return d;
  }
}

}  // namespace seaway
