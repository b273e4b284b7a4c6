#pragma once

#include "seaway/nav_index.hpp"
#include "seaway/rng.hpp"
#include "seaway/triangulation.hpp"

#include <cstdint>

namespace seaway {

//! Triangles pooled from independently triangulated polygons, with a
//! cumulative-area table for area-weighted selection.
struct TriangulatedRegion {
  std::vector<Triangle> triangles;
  std::vector<double> cum_area;
  std::vector<std::uint32_t> source;  // polygon index of each triangle
  double total_area = 0.0;
  std::size_t skipped = 0;  // degenerate polygons left out

  bool empty() const { return triangles.empty(); }
  //! Index of the triangle whose cumulative-area interval holds `target`.
  std::size_t locate(double target) const;
};

//! Triangulates each polygon and pools the result. Polygons with area below
//! 1e-6 m^2 are skipped with a warning; overlapping inputs throw InvalidInput.
TriangulatedRegion triangulate(std::span<const NavPolygon> polys);

//! Uniform point in triangle (a, b, c) from two unit variates.
template <typename Scalar>
Point2<Scalar> sample_triangle(const Point2<Scalar>& a, const Point2<Scalar>& b, const Point2<Scalar>& c,
                               Scalar r1, Scalar r2) {
  using std::sqrt;
  const Scalar s = sqrt(r1);
  return (Scalar(1) - s) * a + s * (Scalar(1) - r2) * b + s * r2 * c;
}

inline LocalPoint sample_triangle(const Triangle& t, double r1, double r2) {
  return sample_triangle<double>(t.a, t.b, t.c, r1, r2);
}

class SampleStream {
 public:
  SampleStream(const TriangulatedRegion& region, std::uint64_t seed);

  LocalPoint draw();
  //! Triangle chosen by the most recent draw.
  std::size_t last_triangle() const { return last_; }
  const CounterRng& rng() const { return rng_; }

 private:
  const TriangulatedRegion* region_;
  CounterRng rng_;
  std::size_t last_ = 0;
};

struct RejectionDraw {
  LocalPoint point;
  std::uint64_t attempts = 0;
};

class RejectionStream {
 public:
  //! Precondition: the region has positive area inside its bounding box.
  RejectionStream(const NavIndex& region, std::uint64_t seed);

  RejectionDraw draw();
  const CounterRng& rng() const { return rng_; }

 private:
  const NavIndex* region_;
  CounterRng rng_;
};

}  // namespace seaway
