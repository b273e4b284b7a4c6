#include "doctest.h"
#include "support.hpp"

#include "seaway/sampling.hpp"

#include <random>

using namespace seaway;
using namespace testing;

namespace {

double triangle_sum(const TriangulatedRegion& r) {
  double s = 0;
  for (const auto& t : r.triangles) s += 0.5 * std::abs((t.b - t.a).x() * (t.c - t.a).y() - (t.b - t.a).y() * (t.c - t.a).x());
  return s;
}

double polygon_sum(std::span<const NavPolygon> polys) {
  double s = 0;
  for (const auto& p : polys) {
    s += std::abs(shoelace(p.exterior));
    for (const auto& h : p.holes) s -= std::abs(shoelace(h));
  }
  return s;
}

// Every triangle is CCW, non-degenerate, and sits inside its source polygon.
void check_triangles(const TriangulatedRegion& r, std::span<const NavPolygon> polys) {
  REQUIRE(r.triangles.size() == r.cum_area.size());
  for (std::size_t i = 0; i < r.triangles.size(); ++i) {
    const Triangle& t = r.triangles[i];
    REQUIRE(t.signed_area() > 1e-12);
    if (i > 0) REQUIRE(r.cum_area[i] > r.cum_area[i - 1]);
    const NavPolygon& src = polys[r.source[i]];
    const LocalPoint c = t.centroid();
    REQUIRE(crossing_oracle(src, c.x(), c.y()));
    REQUIRE(contains(src, t.a));
    REQUIRE(contains(src, t.b));
    REQUIRE(contains(src, t.c));
  }
  REQUIRE(r.cum_area.back() == r.total_area);
}

// Square ring with `k` evenly spaced vertices per side, all collinear.
Ring dense_square(double x0, double y0, double side, int k) {
  Ring r;
  for (int i = 0; i < k; ++i) r.push_back({x0 + side * i / k, y0});
  for (int i = 0; i < k; ++i) r.push_back({x0 + side, y0 + side * i / k});
  for (int i = 0; i < k; ++i) r.push_back({x0 + side - side * i / k, y0 + side});
  for (int i = 0; i < k; ++i) r.push_back({x0, y0 + side - side * i / k});
  return r;
}

}  // namespace

TEST_CASE("triangulate: unit square gives two halves") {
  const std::vector<NavPolygon> polys{unit_square()};
  const auto r = triangulate(polys);
  REQUIRE(r.triangles.size() == 2);
  CHECK(r.triangles[0].area() == doctest::Approx(0.5));
  CHECK(r.triangles[1].area() == doctest::Approx(0.5));
  CHECK(r.total_area == doctest::Approx(1.0));
}

TEST_CASE("triangulate: L-shaped hexagon conserves area") {
  const Ring l{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
  REQUIRE(shoelace(l) == doctest::Approx(3.0));
  const std::vector<NavPolygon> polys{polygon(l)};
  const auto r = triangulate(polys);
  CHECK(r.triangles.size() == 4);
  CHECK(std::abs(triangle_sum(r) - 3.0) <= 1e-9 * 3.0);
  check_triangles(r, polys);
}

TEST_CASE("triangulate: square with centered hole") {
  const std::vector<NavPolygon> polys{polygon(rect(0, 0, 1, 1), {rect(0.4, 0.4, 0.6, 0.6)})};
  const auto r = triangulate(polys);
  CHECK(std::abs(triangle_sum(r) - 0.96) <= 1e-9 * 0.96);
  for (const auto& t : r.triangles) {
    const LocalPoint c = t.centroid();
    CHECK_FALSE((c.x() > 0.4 && c.x() < 0.6 && c.y() > 0.4 && c.y() < 0.6));
  }
  check_triangles(r, polys);
  CHECK(locally_delaunay(r.triangles, polys[0]));
}

TEST_CASE("triangulate: random star polygons with holes conserve area and stay Delaunay") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Ring> holes;
    const int n_holes = trial % 4;
    for (int h = 0; h < n_holes; ++h) {
      const double a = 2 * M_PI * h / std::max(n_holes, 1);
      holes.push_back(star(rng, 12, 4, 8, 25 * std::cos(a), 25 * std::sin(a)));
    }
    const std::vector<NavPolygon> polys{normalized(polygon(star(rng, 50 + trial * 10, 40, 100), holes))};
    REQUIRE_NOTHROW(validate(polys[0]));
    const auto r = triangulate(polys);
    const double expected = polygon_sum(polys);
    REQUIRE(std::abs(triangle_sum(r) - expected) <= 1e-9 * expected);
    REQUIRE(std::abs(r.total_area - expected) <= 1e-9 * expected);
    check_triangles(r, polys);
    CHECK(locally_delaunay(r.triangles, polys[0]));
  }
}

TEST_CASE("triangulate: collinear boundary vertices and rectilinear shapes") {
  const std::vector<NavPolygon> dense{polygon(dense_square(0, 0, 10, 25), {dense_square(3, 3, 2, 7)})};
  REQUIRE_NOTHROW(validate(normalized(dense[0])));
  const auto r = triangulate(dense);
  CHECK(std::abs(triangle_sum(r) - 96.0) <= 1e-9 * 96.0);
  check_triangles(r, dense);

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const std::vector<NavPolygon> polys{random_rectilinear(rng, 12)};
    const auto t = triangulate(polys);
    const double expected = polygon_sum(polys);
    REQUIRE(std::abs(triangle_sum(t) - expected) <= 1e-9 * expected);
    check_triangles(t, polys);
  }
}

TEST_CASE("triangulate: large ring with many holes") {
  std::mt19937_64 rng(99);
  std::vector<Ring> holes;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) holes.push_back(star(rng, 16, 20, 35, -500 + 200 * i, -500 + 200 * j));
  const std::vector<NavPolygon> polys{normalized(polygon(star(rng, 3000, 900, 1000), holes))};
  REQUIRE_NOTHROW(validate(polys[0]));
  const auto r = triangulate(polys);
  const double expected = polygon_sum(polys);
  CHECK(std::abs(r.total_area - expected) <= 1e-9 * expected);
  check_triangles(r, polys);
}

TEST_CASE("triangulate: adjacent polygons pool, overlapping ones are rejected") {
  const std::vector<NavPolygon> adjacent{polygon(rect(0, 0, 1, 1)), polygon(rect(1, 0, 3, 1))};
  const auto r = triangulate(adjacent);
  CHECK(r.total_area == doctest::Approx(3.0));
  CHECK(r.source.front() == 0);
  CHECK(r.source.back() == 1);

  const std::vector<NavPolygon> overlapping{polygon(rect(0, 0, 1, 1)), polygon(rect(0.5, 0, 2, 1))};
  CHECK_THROWS_AS(triangulate(overlapping), InvalidInput);
}

TEST_CASE("triangulate: degenerate polygon skipped") {
  const std::vector<NavPolygon> polys{unit_square(), polygon(rect(5, 5, 5 + 1e-4, 5 + 1e-4))};
  const auto r = triangulate(polys);
  CHECK(r.skipped == 1);
  CHECK(r.total_area == doctest::Approx(1.0));
}

TEST_CASE("sample_triangle: vertex and interior cases") {
  const Triangle t{{0, 0}, {1, 0}, {0, 1}};
  for (double r2 : {0.0, 0.3, 1.0}) CHECK(sample_triangle(t, 0.0, r2) == t.a);
  CHECK(sample_triangle(t, 1.0, 0.0) == t.b);
  CHECK(sample_triangle(t, 1.0, 1.0) == t.c);
  const LocalPoint p = sample_triangle(t, 0.25, 0.5);
  CHECK(p.x() == doctest::Approx(0.25));
  CHECK(p.y() == doctest::Approx(0.25));
  // Same formula at single precision through the scalar template.
  const Point2<float> q = sample_triangle<float>({0, 0}, {1, 0}, {0, 1}, 0.25f, 0.5f);
  CHECK(q.x() == doctest::Approx(0.25f));
}

TEST_CASE("draw: selection proportional to triangle area") {
  TriangulatedRegion r;
  r.triangles = {{{0, 0}, {2, 0}, {0, 1}}, {{10, 0}, {16, 0}, {10, 1}}};
  r.cum_area = {1.0, 4.0};
  r.total_area = 4.0;
  r.source = {0, 0};
  SampleStream s(r, 123);
  const int n = 100000;
  int first = 0;
  for (int i = 0; i < n; ++i) {
    s.draw();
    first += s.last_triangle() == 0;
  }
  const double p = 0.25;
  const double sigma = std::sqrt(p * (1 - p) / n);
  CHECK(std::abs(double(first) / n - p) <= std::min(0.01, 3 * sigma));
}

TEST_CASE("draw: chi-square uniformity over a 10x10 partition of the unit square") {
  const std::vector<NavPolygon> polys{unit_square()};
  const auto r = triangulate(polys);
  SampleStream s(r, 2024);
  const int n = 100000;
  std::vector<int> counts(100, 0);
  for (int i = 0; i < n; ++i) {
    const LocalPoint p = s.draw();
    const int cx = std::min(9, int(p.x() * 10)), cy = std::min(9, int(p.y() * 10));
    ++counts[cy * 10 + cx];
  }
  const double expected = n / 100.0;
  double chi2 = 0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  CHECK(chi2 < 148.2);
}

TEST_CASE("draw: samples stay inside and streams are reproducible") {
  std::mt19937_64 rng(8);
  const std::vector<NavPolygon> polys{normalized(polygon(star(rng, 200, 50, 100), {star(rng, 10, 10, 20)}))};
  const auto r = triangulate(polys);
  SampleStream a(r, 77), b(r, 77), c(r, 78);
  bool differs = false;
  for (int i = 0; i < 100000; ++i) {
    const LocalPoint p = a.draw();
    REQUIRE(contains(polys, p));
    REQUIRE(p == b.draw());
    differs |= (p != c.draw());
  }
  CHECK(differs);

  const std::vector<NavPolygon> single{polygon({{0, 0}, {3, 1}, {1, 2}})};
  const auto one = triangulate(single);
  SampleStream d(one, 1);
  for (int i = 0; i < 10000; ++i) REQUIRE(contains(single, d.draw()));
}

TEST_CASE("draw_rejection: full box accepts immediately") {
  const NavIndex box({polygon(rect(0, 0, 4, 2))});
  RejectionStream s(box, 5);
  for (int i = 0; i < 1000; ++i) REQUIRE(s.draw().attempts == 1);
}

TEST_CASE("draw_rejection: quarter area ratio needs four attempts on average") {
  // Bounding box is the unit square; area is 1/8 + (1/7)(7/8) = 1/4.
  const std::vector<NavPolygon> polys{polygon({{0, 0}, {1, 0}, {1, 0.125}, {1.0 / 7, 0.125}, {1.0 / 7, 1}, {0, 1}})};
  const NavIndex index(polys);
  REQUIRE(index.area_ratio() == doctest::Approx(0.25).epsilon(1e-12));
  RejectionStream s(index, 31);
  const int n = 100000;
  double attempts = 0;
  for (int i = 0; i < n; ++i) {
    const auto d = s.draw();
    REQUIRE(contains(polys, d.point));
    attempts += double(d.attempts);
  }
  CHECK(attempts / n == doctest::Approx(4.0).epsilon(0.1 / 4.0));
  CHECK(std::abs(n / attempts - 0.25) <= 0.02);
}

TEST_CASE("empty regions cannot be sampled") {
  TriangulatedRegion empty;
  CHECK_THROWS_AS(SampleStream(empty, 1), InvalidInput);
  CHECK_THROWS_AS(RejectionStream(NavIndex{}, 1), InvalidInput);
}
