#pragma once

#include "seaway/geometry.hpp"

#include <algorithm>
#include <vector>

namespace seaway::detail {

//! Appends the parameters t in (0, 1) at which a + t (b - a) meets edge p-q.
//! Collinear overlaps contribute both overlap ends.
inline void crossing_params(const LocalPoint& a, const LocalPoint& b, const LocalPoint& p, const LocalPoint& q,
                            std::vector<double>& ts) {
  const LocalPoint d = b - a;
  const LocalPoint e = q - p;
  const LocalPoint w = p - a;
  const double denom = cross2(d, e);
  const double scale = d.norm() * e.norm();
  if (scale == 0.0) return;
  if (std::abs(denom) > 1e-12 * scale) {
    const double t = cross2(w, e) / denom;
    const double s = cross2(w, d) / denom;
    if (s >= 0.0 && s <= 1.0 && t > 0.0 && t < 1.0) ts.push_back(t);
    return;
  }
  if (std::abs(cross2(w, d)) > 1e-12 * d.norm() * std::max(w.norm(), 1.0)) return;
  const double len2 = d.squaredNorm();
  for (const LocalPoint& v : {p, q}) {
    const double t = (v - a).dot(d) / len2;
    if (t > 0.0 && t < 1.0) ts.push_back(t);
  }
}

//! With both endpoints inside, the segment stays inside the union iff the
//! midpoint of every piece between consecutive boundary contacts is inside.
template <typename Contains>
bool sub_segments_inside(const LocalPoint& a, const LocalPoint& b, std::vector<double>& ts, Contains&& contains) {
  if (ts.empty()) return true;
  ts.push_back(0.0);
  ts.push_back(1.0);
  std::sort(ts.begin(), ts.end());
  const LocalPoint d = b - a;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    if (ts[i + 1] - ts[i] <= 1e-12) continue;
    if (!contains(LocalPoint(a + 0.5 * (ts[i] + ts[i + 1]) * d))) return false;
  }
  return true;
}

}  // namespace seaway::detail
