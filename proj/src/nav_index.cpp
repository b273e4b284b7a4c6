#include "seaway/nav_index.hpp"

#include "detail/segment_walk.hpp"

#include <algorithm>

namespace seaway {

namespace {

// Two-pass CSR construction: count, then fill.
template <typename RangeOf>
void build_buckets(std::size_t n_items, std::size_t n_buckets, RangeOf&& range_of,
                   std::vector<std::uint32_t>& start, std::vector<std::uint32_t>& items) {
  start.assign(n_buckets + 1, 0);
  for (std::size_t i = 0; i < n_items; ++i) range_of(i, [&](std::size_t b) { ++start[b + 1]; });
  for (std::size_t b = 0; b < n_buckets; ++b) start[b + 1] += start[b];
  items.assign(start.back(), 0);
  std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
  for (std::size_t i = 0; i < n_items; ++i)
    range_of(i, [&](std::size_t b) { items[fill[b]++] = static_cast<std::uint32_t>(i); });
}

}  // namespace

NavIndex::NavIndex(std::vector<NavPolygon> polys) : polys_(std::move(polys)) {
  for (std::uint32_t k = 0; k < polys_.size(); ++k) {
    const NavPolygon& poly = polys_[k];
    area_ += seaway::area(poly);
    box_.extend(seaway::bounds(poly));
    auto add_ring = [&](const Ring& ring) {
      for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) edges_.push_back({ring[j], ring[i], k});
    };
    add_ring(poly.exterior);
    for (const auto& h : poly.holes) add_ring(h);
  }
  if (edges_.empty()) return;

  const double tol = kBoundaryTolerance;
  const LocalPoint extent = box_.size().cwiseMax(LocalPoint::Constant(1e-6));

  slabs_ = static_cast<int>(std::clamp<std::size_t>(edges_.size(), 1, 16384));
  slab_height_ = extent.y() / slabs_;
  build_buckets(
      edges_.size(), static_cast<std::size_t>(slabs_),
      [&](std::size_t i, auto&& emit) {
        const Edge& e = edges_[i];
        const int lo = slab_of(std::min(e.a.y(), e.b.y()) - tol);
        const int hi = slab_of(std::max(e.a.y(), e.b.y()) + tol);
        for (int s = lo; s <= hi; ++s) emit(static_cast<std::size_t>(s));
      },
      slab_edges_.start, slab_edges_.items);

  cell_ = std::max(std::sqrt(extent.prod() / static_cast<double>(edges_.size())) * 2.0,
                   std::max(extent.x(), extent.y()) / 1024.0);
  nx_ = std::max(1, static_cast<int>(std::ceil(extent.x() / cell_)));
  ny_ = std::max(1, static_cast<int>(std::ceil(extent.y() / cell_)));
  build_buckets(
      edges_.size(), static_cast<std::size_t>(nx_) * ny_,
      [&](std::size_t i, auto&& emit) {
        const Edge& e = edges_[i];
        const int x0 = cell_x(std::min(e.a.x(), e.b.x()) - tol), x1 = cell_x(std::max(e.a.x(), e.b.x()) + tol);
        const int y0 = cell_y(std::min(e.a.y(), e.b.y()) - tol), y1 = cell_y(std::max(e.a.y(), e.b.y()) + tol);
        for (int y = y0; y <= y1; ++y)
          for (int x = x0; x <= x1; ++x) emit(static_cast<std::size_t>(y) * nx_ + x);
      },
      cell_edges_.start, cell_edges_.items);
}

int NavIndex::slab_of(double y) const {
  return std::clamp(static_cast<int>(std::floor((y - box_.min.y()) / slab_height_)), 0, slabs_ - 1);
}

int NavIndex::cell_x(double x) const {
  return std::clamp(static_cast<int>(std::floor((x - box_.min.x()) / cell_)), 0, nx_ - 1);
}

int NavIndex::cell_y(double y) const {
  return std::clamp(static_cast<int>(std::floor((y - box_.min.y()) / cell_)), 0, ny_ - 1);
}

bool NavIndex::contains(const LocalPoint& p) const {
  if (edges_.empty()) return false;
  const double tol = kBoundaryTolerance;
  if (p.x() < box_.min.x() - tol || p.x() > box_.max.x() + tol || p.y() < box_.min.y() - tol ||
      p.y() > box_.max.y() + tol)
    return false;

  thread_local std::vector<std::uint8_t> parity;
  parity.assign(polys_.size(), 0);
  const int s = slab_of(p.y());
  for (std::uint32_t k = slab_edges_.start[s]; k < slab_edges_.start[s + 1]; ++k) {
    const Edge& e = edges_[slab_edges_.items[k]];
    if (segment_distance(p, e.a, e.b) <= tol) return true;
    if ((e.a.y() > p.y()) != (e.b.y() > p.y())) {
      const double x = e.a.x() + (p.y() - e.a.y()) * (e.b.x() - e.a.x()) / (e.b.y() - e.a.y());
      if (p.x() < x) parity[e.poly] ^= 1;
    }
  }
  return std::any_of(parity.begin(), parity.end(), [](std::uint8_t v) { return v != 0; });
}

bool NavIndex::segment_inside(const LocalPoint& a, const LocalPoint& b) const {
  if (!contains(a) || !contains(b)) return false;
  const double tol = kBoundaryTolerance;
  const int x0 = cell_x(std::min(a.x(), b.x()) - tol), x1 = cell_x(std::max(a.x(), b.x()) + tol);
  const int y0 = cell_y(std::min(a.y(), b.y()) - tol), y1 = cell_y(std::max(a.y(), b.y()) + tol);

  thread_local std::vector<std::uint32_t> candidates;
  candidates.clear();
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x <= x1; ++x) {
      const std::size_t c = static_cast<std::size_t>(y) * nx_ + x;
      candidates.insert(candidates.end(), cell_edges_.items.begin() + cell_edges_.start[c],
                        cell_edges_.items.begin() + cell_edges_.start[c + 1]);
    }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  thread_local std::vector<double> ts;
  ts.clear();
  for (std::uint32_t id : candidates) detail::crossing_params(a, b, edges_[id].a, edges_[id].b, ts);
  return detail::sub_segments_inside(a, b, ts, [&](const LocalPoint& p) { return contains(p); });
}

}  // namespace seaway
