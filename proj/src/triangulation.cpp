#include "seaway/triangulation.hpp"

#include "seaway/geometry.hpp"

#include <array>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>

namespace seaway {

namespace {

using Vec = Eigen::Vector2d;

double orient2(const Vec& a, const Vec& b, const Vec& c) { return orient<double>(a, b, c); }

// Positive when d is strictly inside the circumcircle of CCW (a, b, c).
double incircle(const Vec& a, const Vec& b, const Vec& c, const Vec& d) {
  const double adx = a.x() - d.x(), ady = a.y() - d.y();
  const double bdx = b.x() - d.x(), bdy = b.y() - d.y();
  const double cdx = c.x() - d.x(), cdy = c.y() - d.y();
  const double ad = adx * adx + ady * ady;
  const double bd = bdx * bdx + bdy * bdy;
  const double cd = cdx * cdx + cdy * cdy;
  return adx * (bdy * cd - bd * cdy) - ady * (bdx * cd - bd * cdx) + ad * (bdx * cdy - bdy * cdx);
}

inline int next(int i) { return i == 2 ? 0 : i + 1; }
inline int prev(int i) { return i == 0 ? 2 : i - 1; }

// Triangle i stores vertex v[k] and, across the edge opposite v[k], the
// neighbor nb[k] and whether that edge is a constraint.
struct Tri {
  std::array<int, 3> v{};
  std::array<int, 3> nb{-1, -1, -1};
  std::array<bool, 3> fixed{false, false, false};
  int index_of(int vertex) const { return v[0] == vertex ? 0 : v[1] == vertex ? 1 : v[2] == vertex ? 2 : -1; }
  int slot_of(int neighbor) const { return nb[0] == neighbor ? 0 : nb[1] == neighbor ? 1 : nb[2] == neighbor ? 2 : -1; }
};

class Cdt {
 public:
  explicit Cdt(std::vector<Vec> points) : pts_(std::move(points)) {
    // Super triangle around the unit-normalized cloud.
    const int n = static_cast<int>(pts_.size());
    pts_.push_back({-40.0, -40.0});
    pts_.push_back({40.0, -40.0});
    pts_.push_back({0.0, 40.0});
    super_ = n;
    tris_.push_back({{n, n + 1, n + 2}});
    vtri_.assign(pts_.size(), -1);
    vtri_[n] = vtri_[n + 1] = vtri_[n + 2] = 0;
  }

  void insert_all() {
    for (int i = 0; i < super_; ++i) insert(i);
  }

  void constrain(int a, int b) {
    std::vector<std::pair<int, int>> pending{{a, b}};
    while (!pending.empty()) {
      auto [u, w] = pending.back();
      pending.pop_back();
      if (u == w) continue;
      if (auto mid = recover(u, w)) {
        pending.emplace_back(u, *mid);
        pending.emplace_back(*mid, w);
      }
    }
  }

  //! Keeps triangles enclosed by an odd number of constraint crossings.
  std::vector<std::array<int, 3>> interior() const {
    std::vector<int> depth(tris_.size(), -1);
    std::deque<int> queue;
    for (int t = 0; t < static_cast<int>(tris_.size()); ++t) {
      const auto& tri = tris_[t];
      if (tri.v[0] >= super_ || tri.v[1] >= super_ || tri.v[2] >= super_) {
        depth[t] = 0;
        queue.push_back(t);
      }
    }
    // 0-1 BFS: crossing a constraint costs one.
    while (!queue.empty()) {
      const int t = queue.front();
      queue.pop_front();
      for (int k = 0; k < 3; ++k) {
        const int n = tris_[t].nb[k];
        if (n < 0) continue;
        const int d = depth[t] + (tris_[t].fixed[k] ? 1 : 0);
        if (depth[n] < 0 || d < depth[n]) {
          depth[n] = d;
          if (tris_[t].fixed[k])
            queue.push_back(n);
          else
            queue.push_front(n);
        }
      }
    }
    std::vector<std::array<int, 3>> out;
    for (int t = 0; t < static_cast<int>(tris_.size()); ++t)
      if (depth[t] % 2 == 1) out.push_back(tris_[t].v);
    return out;
  }

 private:
  std::vector<Vec> pts_;
  std::vector<Tri> tris_;
  std::vector<int> vtri_;
  int super_ = 0;
  int last_ = 0;

  const Vec& P(int i) const { return pts_[i]; }

  void relink(int tri, int from, int to) {
    if (tri < 0) return;
    const int s = tris_[tri].slot_of(from);
    tris_[tri].nb[s] = to;
  }

  void touch(int t) {
    for (int k = 0; k < 3; ++k) vtri_[tris_[t].v[k]] = t;
  }

  int locate(const Vec& p) {
    int t = last_;
    const std::size_t limit = 4 * tris_.size() + 16;
    for (std::size_t step = 0; step < limit; ++step) {
      const Tri& tri = tris_[t];
      bool moved = false;
      for (int j = 0; j < 3; ++j) {
        const int k = static_cast<int>((j + step) % 3);
        if (orient2(P(tri.v[next(k)]), P(tri.v[prev(k)]), p) < 0.0 && tri.nb[k] >= 0) {
          t = tri.nb[k];
          moved = true;
          break;
        }
      }
      if (!moved) return t;
    }
    for (int s = 0; s < static_cast<int>(tris_.size()); ++s) {
      const Tri& tri = tris_[s];
      if (orient2(P(tri.v[0]), P(tri.v[1]), p) >= 0 && orient2(P(tri.v[1]), P(tri.v[2]), p) >= 0 &&
          orient2(P(tri.v[2]), P(tri.v[0]), p) >= 0)
        return s;
    }
    throw std::runtime_error("triangulation point location failed");
  }

  void insert(int p) {
    const int t = locate(P(p));
    const Tri& tri = tris_[t];
    for (int k = 0; k < 3; ++k) {
      if (orient2(P(tri.v[next(k)]), P(tri.v[prev(k)]), P(p)) == 0.0) {
        split_edge(t, k, p);
        return;
      }
    }
    split_triangle(t, p);
  }

  void split_triangle(int t, int p) {
    const Tri old = tris_[t];
    const int v0 = old.v[0], v1 = old.v[1], v2 = old.v[2];
    const int t1 = static_cast<int>(tris_.size());
    const int t2 = t1 + 1;
    tris_[t] = Tri{{v0, v1, p}, {t1, t2, old.nb[2]}, {false, false, old.fixed[2]}};
    tris_.push_back(Tri{{v1, v2, p}, {t2, t, old.nb[0]}, {false, false, old.fixed[0]}});
    tris_.push_back(Tri{{v2, v0, p}, {t, t1, old.nb[1]}, {false, false, old.fixed[1]}});
    relink(old.nb[0], t, t1);
    relink(old.nb[1], t, t2);
    touch(t), touch(t1), touch(t2);
    last_ = t;
    legalize(p, {{t, 2}, {t1, 2}, {t2, 2}});
  }

  void split_edge(int t, int k, int p) {
    const Tri told = tris_[t];
    const int c = told.v[k], a = told.v[next(k)], b = told.v[prev(k)];
    const int n = told.nb[k];
    const int N_bc = told.nb[next(k)], N_ca = told.nb[prev(k)];
    const bool f_bc = told.fixed[next(k)], f_ca = told.fixed[prev(k)];
    const int T2 = static_cast<int>(tris_.size());
    if (n < 0) {
      tris_[t] = Tri{{c, a, p}, {-1, T2, N_ca}, {told.fixed[k], false, f_ca}};
      tris_.push_back(Tri{{c, p, b}, {-1, N_bc, t}, {told.fixed[k], f_bc, false}});
      relink(N_bc, t, T2);
      touch(t), touch(T2);
      last_ = t;
      legalize(p, {{t, 2}, {T2, 1}});
      return;
    }
    const Tri nold = tris_[n];
    const int j = nold.slot_of(t);
    const int d = nold.v[j];
    const int N_ad = nold.nb[next(j)], N_db = nold.nb[prev(j)];
    const bool f_ad = nold.fixed[next(j)], f_db = nold.fixed[prev(j)];
    const bool f = told.fixed[k];
    const int T4 = T2 + 1;
    tris_[t] = Tri{{c, a, p}, {T4, T2, N_ca}, {f, false, f_ca}};
    tris_.push_back(Tri{{c, p, b}, {n, N_bc, t}, {f, f_bc, false}});
    tris_[n] = Tri{{d, b, p}, {T2, T4, N_db}, {f, false, f_db}};
    tris_.push_back(Tri{{d, p, a}, {t, N_ad, n}, {f, f_ad, false}});
    relink(N_bc, t, T2);
    relink(N_ad, n, T4);
    touch(t), touch(T2), touch(n), touch(T4);
    last_ = t;
    legalize(p, {{t, 2}, {T2, 1}, {n, 2}, {T4, 1}});
  }

  // Flips the edge opposite v[i] of triangle t. Returns the two triangles,
  // the first holding v[i] at slot 0 and the new diagonal opposite slot 1.
  std::pair<int, int> flip(int t, int i) {
    const Tri told = tris_[t];
    const int n = told.nb[i];
    const Tri nold = tris_[n];
    const int j = nold.slot_of(t);
    const int p = told.v[i], a = told.v[next(i)], b = told.v[prev(i)];
    const int q = nold.v[j];
    const int N_bp = told.nb[next(i)], N_pa = told.nb[prev(i)];
    const bool f_bp = told.fixed[next(i)], f_pa = told.fixed[prev(i)];
    const int N_aq = nold.nb[next(j)], N_qb = nold.nb[prev(j)];
    const bool f_aq = nold.fixed[next(j)], f_qb = nold.fixed[prev(j)];
    tris_[t] = Tri{{p, a, q}, {N_aq, n, N_pa}, {f_aq, false, f_pa}};
    tris_[n] = Tri{{q, b, p}, {N_bp, t, N_qb}, {f_bp, false, f_qb}};
    relink(N_aq, n, t);
    relink(N_bp, t, n);
    touch(t), touch(n);
    last_ = t;
    return {t, n};
  }

  void legalize(int p, std::vector<std::pair<int, int>> stack) {
    while (!stack.empty()) {
      auto [t, i] = stack.back();
      stack.pop_back();
      const Tri& tri = tris_[t];
      if (tri.v[i] != p) {
        i = tri.index_of(p);
        if (i < 0) continue;
      }
      const int n = tri.nb[i];
      if (n < 0 || tri.fixed[i]) continue;
      const Tri& ntri = tris_[n];
      const int q = ntri.v[ntri.slot_of(t)];
      if (incircle(P(tri.v[0]), P(tri.v[1]), P(tri.v[2]), P(q)) <= 0.0) continue;
      auto [t1, t2] = flip(t, i);
      // t1 = (p, a, q): edge opposite p is (a, q); t2 = (q, b, p): edge opposite p is (q, b).
      stack.emplace_back(t1, 0);
      stack.emplace_back(t2, 2);
    }
  }

  // Triangle and slot whose edge opposite that slot is (u, w) in either direction.
  std::pair<int, int> find_edge(int u, int w) const {
    const int start = vtri_[u];
    int t = start;
    do {
      const Tri& tri = tris_[t];
      const int i = tri.index_of(u);
      if (tri.v[next(i)] == w) return {t, prev(i)};
      if (tri.v[prev(i)] == w) return {t, next(i)};
      t = tri.nb[prev(i)];
    } while (t >= 0 && t != start);
    // Hull vertex: sweep the other way.
    t = start;
    while (t >= 0) {
      const Tri& tri = tris_[t];
      const int i = tri.index_of(u);
      if (tri.v[next(i)] == w) return {t, prev(i)};
      if (tri.v[prev(i)] == w) return {t, next(i)};
      t = tri.nb[next(i)];
      if (t == start) break;
    }
    return {-1, -1};
  }

  void mark_fixed(int t, int k) {
    tris_[t].fixed[k] = true;
    const int n = tris_[t].nb[k];
    if (n >= 0) tris_[n].fixed[tris_[n].slot_of(t)] = true;
  }

  bool crosses(int a, int b, int p, int q) const {
    const double o1 = orient2(P(a), P(b), P(p)), o2 = orient2(P(a), P(b), P(q));
    const double o3 = orient2(P(p), P(q), P(a)), o4 = orient2(P(p), P(q), P(b));
    return ((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0));
  }

  // Recovers constraint (a, b). Returns a vertex lying on the open segment
  // when one blocks it, in which case the caller splits the constraint.
  std::optional<int> recover(int a, int b) {
    if (auto [t, k] = find_edge(a, b); t >= 0) {
      mark_fixed(t, k);
      return std::nullopt;
    }

    // Find the triangle around a whose far edge the segment a->b enters.
    std::deque<std::pair<int, int>> crossing;
    int t = vtri_[a];
    int left = -1, right = -1;
    {
      const int start = t;
      do {
        const Tri& tri = tris_[t];
        const int i = tri.index_of(a);
        const int v1 = tri.v[next(i)], v2 = tri.v[prev(i)];
        for (int v : {v1, v2})
          if (orient2(P(a), P(b), P(v)) == 0.0 && (P(v) - P(a)).dot(P(b) - P(a)) > 0.0) return v;
        if (orient2(P(a), P(v1), P(b)) > 0.0 && orient2(P(a), P(v2), P(b)) < 0.0) {
          right = v1;
          left = v2;
          break;
        }
        t = tri.nb[prev(i)];
      } while (t >= 0 && t != start);
      if (left < 0) throw std::runtime_error("constraint recovery could not leave its start vertex");
    }

    // Walk along the segment collecting crossed edges.
    while (true) {
      crossing.emplace_back(left, right);
      const Tri& tri = tris_[t];
      const int k = (tri.v[0] != left && tri.v[0] != right) ? 0 : (tri.v[1] != left && tri.v[1] != right) ? 1 : 2;
      const int n = tri.nb[k];
      const Tri& ntri = tris_[n];
      const int w = ntri.v[ntri.slot_of(t)];
      if (w == b) break;
      const double o = orient2(P(a), P(b), P(w));
      if (o == 0.0) return w;
      if (o > 0.0)
        left = w;
      else
        right = w;
      t = n;
    }

    std::vector<std::pair<int, int>> created;
    std::size_t guard = 0;
    const std::size_t limit = 64 * (crossing.size() + 4) * (crossing.size() + 4);
    while (!crossing.empty()) {
      if (++guard > limit) throw std::runtime_error("constraint recovery did not converge");
      auto [u, w] = crossing.front();
      crossing.pop_front();
      auto [et, ek] = find_edge(u, w);
      if (et < 0) continue;
      const Tri& tri = tris_[et];
      const int n = tri.nb[ek];
      const int p = tri.v[ek];
      const int q = tris_[n].v[tris_[n].slot_of(et)];
      // Flippable only if the quad (p, u, q, w) is strictly convex.
      const double s1 = orient2(P(p), P(q), P(u)), s2 = orient2(P(p), P(q), P(w));
      if (!((s1 > 0 && s2 < 0) || (s1 < 0 && s2 > 0))) {
        crossing.emplace_back(u, w);
        continue;
      }
      flip(et, ek);
      if (crosses(a, b, p, q))
        crossing.emplace_back(p, q);
      else
        created.emplace_back(p, q);
    }

    auto [ft, fk] = find_edge(a, b);
    if (ft < 0) throw std::runtime_error("constraint recovery lost its edge");
    mark_fixed(ft, fk);

    // Restore the Delaunay property on the new unconstrained edges.
    bool changed = true;
    std::size_t rounds = 0;
    while (changed && rounds++ < 1000) {
      changed = false;
      for (auto& e : created) {
        if ((e.first == a && e.second == b) || (e.first == b && e.second == a)) continue;
        auto [et, ek] = find_edge(e.first, e.second);
        if (et < 0 || tris_[et].fixed[ek]) continue;
        const Tri& tri = tris_[et];
        const int n = tri.nb[ek];
        if (n < 0) continue;
        const int q = tris_[n].v[tris_[n].slot_of(et)];
        if (incircle(P(tri.v[0]), P(tri.v[1]), P(tri.v[2]), P(q)) > 0.0) {
          const int p = tri.v[ek];
          flip(et, ek);
          e = {p, q};
          changed = true;
        }
      }
    }
    return std::nullopt;
  }
};

}  // namespace

std::vector<Triangle> constrained_delaunay(const NavPolygon& poly) {
  Box box = bounds(poly);
  const LocalPoint center = 0.5 * (box.min + box.max);
  const double scale = std::max(box.size().maxCoeff() * 0.5, 1e-12);

  // Deduplicate vertices and record the constraint edges by index.
  std::map<std::pair<double, double>, int> ids;
  std::vector<LocalPoint> original;
  std::vector<Vec> normalized_pts;
  std::vector<std::pair<int, int>> constraints;
  auto id_of = [&](const LocalPoint& p) {
    auto [it, inserted] = ids.try_emplace({p.x(), p.y()}, static_cast<int>(original.size()));
    if (inserted) {
      original.push_back(p);
      normalized_pts.push_back((p - center) / scale);
    }
    return it->second;
  };
  auto add_ring = [&](const Ring& ring) {
    const int first = id_of(ring.front());
    int prev_id = first;
    for (std::size_t i = 1; i < ring.size(); ++i) {
      const int cur = id_of(ring[i]);
      constraints.emplace_back(prev_id, cur);
      prev_id = cur;
    }
    constraints.emplace_back(prev_id, first);
  };
  add_ring(poly.exterior);
  for (const auto& h : poly.holes) add_ring(h);

  Cdt cdt(std::move(normalized_pts));
  cdt.insert_all();
  for (auto [a, b] : constraints) cdt.constrain(a, b);

  std::vector<Triangle> out;
  for (const auto& v : cdt.interior()) {
    Triangle t{original[v[0]], original[v[1]], original[v[2]]};
    if (t.signed_area() < 0) std::swap(t.b, t.c);
    out.push_back(t);
  }
  return out;
}

bool locally_delaunay(std::span<const Triangle> tris, const NavPolygon& poly) {
  // Constraint edges from the polygon rings, as unordered coordinate pairs.
  auto key = [](const LocalPoint& p, const LocalPoint& q) {
    std::array<double, 4> k{p.x(), p.y(), q.x(), q.y()};
    if (std::tie(k[0], k[1]) > std::tie(k[2], k[3])) {
      std::swap(k[0], k[2]);
      std::swap(k[1], k[3]);
    }
    return k;
  };
  std::map<std::array<double, 4>, std::vector<std::pair<std::size_t, int>>> edges;
  for (std::size_t t = 0; t < tris.size(); ++t) {
    const std::array<LocalPoint, 3> v{tris[t].a, tris[t].b, tris[t].c};
    for (int k = 0; k < 3; ++k) edges[key(v[next(k)], v[prev(k)])].emplace_back(t, k);
  }
  std::map<std::array<double, 4>, bool> constrained;
  auto add_ring = [&](const Ring& r) {
    for (std::size_t i = 0, j = r.size() - 1; i < r.size(); j = i++) constrained[key(r[j], r[i])] = true;
  };
  add_ring(poly.exterior);
  for (const auto& h : poly.holes) add_ring(h);

  for (const auto& [k, users] : edges) {
    if (users.size() != 2 || constrained.count(k)) continue;
    const Triangle& t = tris[users[0].first];
    const Triangle& u = tris[users[1].first];
    const std::array<LocalPoint, 3> uv{u.a, u.b, u.c};
    const LocalPoint& opposite = uv[users[1].second];
    const double scale = std::max({(t.b - t.a).squaredNorm(), (t.c - t.a).squaredNorm(), 1e-300});
    if (incircle(t.a, t.b, t.c, opposite) > 1e-9 * scale * scale) return false;
  }
  return true;
}

}  // namespace seaway
