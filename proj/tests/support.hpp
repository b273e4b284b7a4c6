#pragma once

#include "seaway/geometry.hpp"

#include <random>
#include <vector>

namespace testing {

using seaway::LocalPoint;
using seaway::NavPolygon;
using seaway::Ring;

// Counter-clockwise axis-aligned rectangle in (east, north) = (x, y).
inline Ring rect(double x0, double y0, double x1, double y1) { return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}; }

inline Ring reversed(Ring r) {
  std::reverse(r.begin(), r.end());
  return r;
}

inline NavPolygon polygon(Ring exterior, std::vector<Ring> holes = {}, double dmin = 10.0, double dmax = 20.0) {
  NavPolygon p;
  p.exterior = std::move(exterior);
  for (auto& h : holes) p.holes.push_back(reversed(std::move(h)));
  p.depth_min = dmin;
  p.depth_max = dmax;
  return p;
}

inline NavPolygon unit_square() { return polygon(rect(0, 0, 1, 1)); }

// Plain even-odd crossing count, no tolerance. Independent of the library.
inline bool crossing_oracle(const Ring& r, double x, double y) {
  bool in = false;
  for (std::size_t i = 0, j = r.size() - 1; i < r.size(); j = i++) {
    const double xi = r[i].x(), yi = r[i].y(), xj = r[j].x(), yj = r[j].y();
    if ((yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi) in = !in;
  }
  return in;
}

inline bool crossing_oracle(const NavPolygon& p, double x, double y) {
  if (!crossing_oracle(p.exterior, x, y)) return false;
  for (const auto& h : p.holes)
    if (crossing_oracle(h, x, y)) return false;
  return true;
}

// Shoelace over raw coordinates.
inline double shoelace(const Ring& r) {
  double s = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const auto& p = r[i];
    const auto& q = r[(i + 1) % r.size()];
    s += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * s;
}

// Random rectilinear polygon: union of occupied cells of a grid, traced as a
// staircase column profile so the result is a simple polygon.
inline NavPolygon random_rectilinear(std::mt19937_64& rng, int columns = 8) {
  std::uniform_int_distribution<int> lo(0, 4), hi(6, 10);
  Ring bottom, top;
  for (int c = 0; c < columns; ++c) {
    const double y0 = lo(rng), y1 = hi(rng);
    bottom.push_back({double(c), y0});
    bottom.push_back({double(c + 1), y0});
    top.push_back({double(c), y1});
    top.push_back({double(c + 1), y1});
  }
  Ring ring(bottom);
  ring.insert(ring.end(), top.rbegin(), top.rend());
  return seaway::normalized(polygon(ring));
}

// Star-shaped polygon with `n` vertices and radii in [r0, r1].
inline Ring star(std::mt19937_64& rng, int n, double r0, double r1, double cx = 0, double cy = 0) {
  std::uniform_real_distribution<double> rad(r0, r1);
  Ring r;
  for (int i = 0; i < n; ++i) {
    const double a = 2 * M_PI * i / n;
    const double rr = rad(rng);
    r.push_back({cx + rr * std::cos(a), cy + rr * std::sin(a)});
  }
  return r;
}

}  // namespace testing
