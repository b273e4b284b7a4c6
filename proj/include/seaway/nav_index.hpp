#pragma once

#include "seaway/geometry.hpp"

#include <cstdint>

namespace seaway {

//! Edge-bucketed view of a polygon set answering the same containment and
//! segment queries as the free functions in geometry.hpp, without scanning
//! every edge. Immutable after construction.
class NavIndex {
 public:
  NavIndex() = default;
  explicit NavIndex(std::vector<NavPolygon> polys);

  const std::vector<NavPolygon>& polygons() const { return polys_; }
  const Box& bounds() const { return box_; }
  //! Sum of polygon areas, m^2.
  double area() const { return area_; }
  //! Region area over bounding-box area.
  double area_ratio() const { return box_.area() > 0.0 ? area_ / box_.area() : 0.0; }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return polys_.empty(); }

  bool contains(const LocalPoint& p) const;
  bool segment_inside(const LocalPoint& a, const LocalPoint& b) const;

 private:
  struct Edge {
    LocalPoint a, b;
    std::uint32_t poly;
  };

  struct Buckets {
    std::vector<std::uint32_t> start;
    std::vector<std::uint32_t> items;
  };

  std::vector<NavPolygon> polys_;
  std::vector<Edge> edges_;
  Box box_;
  double area_ = 0.0;

  double slab_height_ = 1.0;
  int slabs_ = 0;
  Buckets slab_edges_;

  double cell_ = 1.0;
  int nx_ = 0, ny_ = 0;
  Buckets cell_edges_;

  int slab_of(double y) const;
  int cell_x(double x) const;
  int cell_y(double y) const;
};

}  // namespace seaway
