#include "doctest.h"
#include "support.hpp"

#include "seaway/planner.hpp"

#include <random>

using namespace seaway;
using testing::polygon;
using testing::rect;

namespace {

struct World {
  NavIndex nav;
  TriangulatedRegion region;
  KdeModel kde;
  bool with_kde = false;

  explicit World(std::vector<NavPolygon> polys) : nav(polys), region(triangulate(polys)) {}

  // Hand-built density grid over the region bounds.
  template <typename F>
  void set_density(F&& f, double cell = 20.0) {
    const Box b = nav.bounds();
    kde.grid.origin = b.min;
    kde.grid.cell = cell;
    kde.grid.nx = static_cast<int>(std::ceil(b.size().x() / cell)) + 1;
    kde.grid.ny = static_cast<int>(std::ceil(b.size().y() / cell)) + 1;
    kde.values.resize(kde.grid.ny, kde.grid.nx);
    for (int i = 0; i < kde.grid.nx; ++i)
      for (int j = 0; j < kde.grid.ny; ++j) kde.values(j, i) = f(kde.grid.center(i, j));
    kde.max_value = kde.values.maxCoeff();
    with_kde = true;
  }

  PlanEnv env(std::optional<Encounter> enc = std::nullopt) const {
    PlanEnv e;
    e.nav = &nav;
    e.region = &region;
    if (with_kde) e.density = DensityField(&kde, GeoPoint{});
    e.encounter = enc;
    return e;
  }
};

PlanTree make_tree(const LocalPoint& root, const Box& box, double cell = 200.0) {
  PlanTree t;
  t.index = NodeIndex(box, cell);
  t.add({root, 0.0, 0.0, 0.0, 0.0, -1});
  return t;
}

Box box_of(double x0, double y0, double x1, double y1) {
  Box b;
  b.extend(LocalPoint(x0, y0));
  b.extend(LocalPoint(x1, y1));
  return b;
}

// Recomputes every node's state from its root path and compares with storage.
void check_tree(const PlanTree& tree, const PlanEnv& env, const PlanConfig& cfg) {
  const std::size_t n = tree.nodes.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> chain;
    for (std::int32_t k = static_cast<std::int32_t>(i); k >= 0; k = tree.nodes[static_cast<std::size_t>(k)].parent) {
      chain.push_back(static_cast<std::size_t>(k));
      REQUIRE(chain.size() <= n);
    }
    REQUIRE(chain.back() == 0);
    double length = 0, density = 0, t = 0;
    for (std::size_t k = chain.size() - 1; k > 0; --k) {
      const auto e = edge_cost(tree.nodes[chain[k]].pos, tree.nodes[chain[k - 1]].pos, env.density, cfg.kde_step);
      length += e.length;
      density += e.density;
      t += e.length / cfg.speed_mps();
    }
    const PlanNode& node = tree.nodes[i];
    REQUIRE(node.length == doctest::Approx(length).epsilon(1e-9));
    REQUIRE(node.density == doctest::Approx(density).epsilon(1e-9).scale(1e-6));
    REQUIRE(node.t == doctest::Approx(t).epsilon(1e-9));
    const double cost = i == 0 ? 0.0 : cfg.w1 * (1 - density / length) + cfg.w2 * length;
    REQUIRE(node.cost == doctest::Approx(cost).epsilon(1e-9));
    if (node.parent >= 0) {
      const auto& siblings = tree.children[static_cast<std::size_t>(node.parent)];
      REQUIRE(std::count(siblings.begin(), siblings.end(), i) == 1);
    }
  }
}

}  // namespace

TEST_CASE("goal-biased sampling") {
  World w({polygon(rect(0, 0, 1, 1))});
  const LocalPoint goal(0.25, 0.75);
  PlanConfig cfg;

  SUBCASE("bias 1 always returns the goal") {
    cfg.goal_bias = 1.0;
    GoalSampler s(w.region, goal, cfg);
    for (int i = 0; i < 1000; ++i) CHECK(s.draw() == goal);
  }
  SUBCASE("bias 0 is uniform") {
    cfg.goal_bias = 0.0;
    GoalSampler s(w.region, goal, cfg);
    std::vector<int> counts(100, 0);
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
      const LocalPoint p = s.draw();
      CHECK_FALSE(s.last_was_goal());
      ++counts[std::min(9, static_cast<int>(p.y() * 10)) * 10 + std::min(9, static_cast<int>(p.x() * 10))];
    }
    double chi2 = 0;
    for (int c : counts) chi2 += (c - n / 100.0) * (c - n / 100.0) / (n / 100.0);
    CHECK(chi2 < 148.2);
  }
  SUBCASE("bias 0.05 returns the goal 5% of the time") {
    cfg.goal_bias = 0.05;
    GoalSampler s(w.region, goal, cfg);
    int hits = 0;
    for (int i = 0; i < 100000; ++i) {
      s.draw();
      hits += s.last_was_goal();
    }
    CHECK(std::abs(hits / 1e5 - 0.05) < 0.005);
  }
}

TEST_CASE("nearest") {
  const Box box = box_of(0, 0, 1000, 1000);
  PlanTree tree = make_tree(LocalPoint(500, 500), box, 100);
  CHECK(tree.index.nearest(LocalPoint(10, 10), tree.nodes) == 0);
  CHECK(tree.index.nearest(LocalPoint(-5000, 9000), tree.nodes) == 0);

  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> coarse(0, 40);
  std::uniform_real_distribution<double> fine(-300, 1300);
  for (int i = 1; i < 1000; ++i) {
    // Points on a 25 m lattice produce many exact ties.
    tree.add({LocalPoint(25.0 * coarse(rng), 25.0 * coarse(rng)), 0, 0, 0, 0, 0});
  }
  CHECK(tree.index.nearest(tree.nodes[500].pos, tree.nodes) <= 500);
  CHECK((tree.nodes[tree.index.nearest(tree.nodes[500].pos, tree.nodes)].pos - tree.nodes[500].pos).norm() == 0.0);
  for (int q = 0; q < 1000; ++q) {
    const LocalPoint p = q % 2 ? LocalPoint(fine(rng), fine(rng)) : LocalPoint(12.5 * coarse(rng), 12.5 * coarse(rng));
    std::size_t best = 0;
    for (std::size_t k = 1; k < tree.nodes.size(); ++k)
      if ((tree.nodes[k].pos - p).squaredNorm() < (tree.nodes[best].pos - p).squaredNorm()) best = k;
    REQUIRE(tree.index.nearest(p, tree.nodes) == best);
  }
}

TEST_CASE("near matches a linear scan") {
  const Box box = box_of(0, 0, 2000, 2000);
  PlanTree tree = make_tree(LocalPoint(1000, 1000), box, 150);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 2000);
  for (int i = 1; i < 1000; ++i) tree.add({LocalPoint(u(rng), u(rng)), 0, 0, 0, 0, 0});
  PlanConfig cfg;
  cfg.eta = 150;
  const double r = near_radius(tree.nodes.size(), cfg);
  CHECK(r == doctest::Approx(std::min(3000 * std::sqrt(std::log(1000.0) / 1000.0), 150.0)));
  for (int q = 0; q < 300; ++q) {
    const LocalPoint p(u(rng), u(rng));
    std::vector<std::uint32_t> expected;
    for (std::uint32_t k = 0; k < tree.nodes.size(); ++k)
      if ((tree.nodes[k].pos - p).norm() <= r) expected.push_back(k);
    REQUIRE(near(tree, p, cfg) == expected);
  }
  CHECK(tree.index.within(LocalPoint(1000, 1000), 5000, tree.nodes).size() == 1000);
  CHECK(tree.index.within(LocalPoint(-900, -900), 10, tree.nodes).empty());
  CHECK(near_radius(1, cfg) == 0.0);
}

TEST_CASE("extend") {
  const LocalPoint a(0, 0);
  CHECK(extend(a, LocalPoint(50, 0), 100) == LocalPoint(50, 0));
  CHECK((extend(a, LocalPoint(200, 0), 100) - LocalPoint(100, 0)).norm() < 1e-12);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-500, 500);
  for (int i = 0; i < 1000; ++i) {
    const LocalPoint b(u(rng), u(rng));
    CHECK((extend(a, b, 120) - a).norm() == doctest::Approx(std::min(b.norm(), 120.0)));
  }
  CHECK_THROWS_AS(extend(a, a, 10), InvalidInput);
}

TEST_CASE("feasible") {
  // L-shaped region: horizontal arm along the south, vertical arm on the west.
  World w({polygon({{0, 0}, {2000, 0}, {2000, 500}, {500, 500}, {500, 2000}, {0, 2000}})});
  PlanConfig cfg;
  cfg.min_turn_radius = 500;
  PlanTree tree = make_tree(LocalPoint(100, 250), w.nav.bounds());
  const auto env = w.env();
  const auto a = tree.add({LocalPoint(200, 250), 0, 100, 0, 0, 0});

  CHECK(feasible(tree, a, LocalPoint(300, 250), env, cfg));
  CHECK(feasible(tree, 0, LocalPoint(250, 1500), env, cfg));
  CHECK_FALSE(feasible(tree, a, LocalPoint(1000, 1000), env, cfg));
  CHECK_FALSE(feasible(tree, a, LocalPoint(200, 250), env, cfg));
  // 90 degree turn after 100 m legs; the bound is 2 asin(0.1), about 11.5 degrees.
  CHECK_FALSE(feasible(tree, a, LocalPoint(200, 350), env, cfg));
  CHECK(max_turn(100, 100, 500) == doctest::Approx(2 * std::asin(0.1)));
  CHECK(max_turn(100, 100, 500) * 180 / std::numbers::pi == doctest::Approx(11.48).epsilon(1e-3));
  auto turned = [&](double deg) {
    const double r = deg * std::numbers::pi / 180;
    return LocalPoint(200 + 100 * std::cos(r), 250 + 100 * std::sin(r));
  };
  CHECK(feasible(tree, a, turned(11.0), env, cfg));
  CHECK_FALSE(feasible(tree, a, turned(12.0), env, cfg));
  cfg.min_turn_radius = 0;
  CHECK(feasible(tree, a, LocalPoint(200, 350), env, cfg));

  SUBCASE("a leg through the target's comfort zone is rejected") {
    VesselState target{LocalPoint(600, 250), 270.0, 0.0, 50.0, 5.0};
    Encounter enc{EncounterKind::Overtaking, target, 0.0};
    const auto with_target = w.env(enc);
    CHECK_FALSE(feasible(tree, a, LocalPoint(420, 250), with_target, cfg));
    CHECK(feasible(tree, a, LocalPoint(300, 250), with_target, cfg));
  }
}

TEST_CASE("edge_cost") {
  World w({polygon(rect(0, 0, 1000, 1000))});
  const LocalPoint a(100, 100), b(700, 500);
  const double len = (b - a).norm();

  SUBCASE("no density") {
    const auto e = edge_cost(a, b, w.env().density, 10);
    CHECK(e.length == doctest::Approx(len));
    CHECK(e.density == 0.0);
    PlanConfig cfg;
    CHECK(path_cost(e.length, e.density, cfg) == doctest::Approx(cfg.w1 + cfg.w2 * len));
  }
  SUBCASE("plateau density") {
    w.set_density([](const LocalPoint&) { return 3.0; });
    const auto e = edge_cost(a, b, w.env().density, 10);
    CHECK(e.density == doctest::Approx(len));
    PlanConfig cfg;
    CHECK(path_cost(e.length, e.density, cfg) == doctest::Approx(cfg.w2 * len));
  }
  SUBCASE("linear density is integrated exactly by the midpoint rule") {
    w.set_density([](const LocalPoint& p) { return 1.0 + p.x() / 1000.0; }, 25.0);
    const auto e = edge_cost(a, b, w.env().density, 7);
    const double max = 1.0 + w.kde.grid.center(w.kde.grid.nx - 1, 0).x() / 1000.0;
    const double exact = len * (1.0 + 0.5 * (a.x() + b.x()) / 1000.0) / max;
    CHECK(e.density == doctest::Approx(exact).epsilon(1e-12));
  }
  SUBCASE("w1 = 0 ignores the density") {
    w.set_density([](const LocalPoint& p) { return p.y(); });
    PlanConfig cfg;
    cfg.w1 = 0;
    cfg.w2 = 1;
    const auto e = edge_cost(a, b, w.env().density, 10);
    CHECK(path_cost(e.length, e.density, cfg) == doctest::Approx(len));
  }
}

TEST_CASE("best_parent") {
  World w({polygon(rect(0, 0, 3000, 3000))});
  PlanConfig cfg;
  const auto env = w.env();
  PlanTree tree = make_tree(LocalPoint(100, 100), w.nav.bounds());
  const LocalPoint x_new(1000, 1000);

  SUBCASE("single feasible candidate") {
    const std::uint32_t only[] = {0};
    CHECK(best_parent(tree, only, x_new, env, cfg) == 0u);
  }
  SUBCASE("same geometry, lower accumulated cost wins") {
    const auto p = tree.add({LocalPoint(500, 500), 0, 600, 0, cfg.w1 + cfg.w2 * 600, 0});
    const auto q = tree.add({LocalPoint(500, 500), 0, 566, 0, cfg.w1 + cfg.w2 * 566, 0});
    const std::uint32_t both[] = {p, q};
    CHECK(best_parent(tree, both, x_new, env, cfg) == q);
  }
  SUBCASE("no feasible candidate") {
    World split({polygon(rect(0, 0, 1000, 1000)), polygon(rect(2000, 0, 3000, 1000))});
    PlanTree t = make_tree(LocalPoint(100, 100), split.nav.bounds());
    const std::uint32_t only[] = {0};
    CHECK_FALSE(best_parent(t, only, LocalPoint(2500, 500), split.env(), cfg).has_value());
  }
  SUBCASE("a dense corridor beats a shorter sparse parent when w1 dominates") {
    // Density is high along y = 2000 and zero elsewhere.
    w.set_density([](const LocalPoint& p) { return std::exp(-0.5 * std::pow((p.y() - 2000) / 100, 2)); });
    const auto e = w.env();
    cfg.w1 = 1;
    cfg.w2 = 1e-5;
    // Dense branch: root -> (100, 2000) -> (1600, 2000). Sparse branch: root -> (1000, 700).
    const auto up = tree.add({LocalPoint(100, 2000), 0, 0, 0, 0, 0});
    const auto dense = tree.add({LocalPoint(1600, 2000), 0, 0, 0, 0, static_cast<std::int32_t>(up)});
    const auto sparse = tree.add({LocalPoint(1000, 700), 0, 0, 0, 0, 0});
    // Accumulate branch states directly from edge costs.
    for (auto id : {up, dense, sparse}) {
      auto& n = tree.nodes[id];
      const auto& p = tree.nodes[static_cast<std::size_t>(n.parent)];
      const auto c = edge_cost(p.pos, n.pos, e.density, cfg.kde_step);
      n.length = p.length + c.length;
      n.density = p.density + c.density;
      n.cost = path_cost(n.length, n.density, cfg);
    }
    const LocalPoint target(1700, 1900);
    const std::uint32_t cands[] = {dense, sparse};
    // Exhaustive evaluation of both options.
    double best = 1e300;
    std::uint32_t expected = 0;
    for (auto id : cands) {
      const auto& n = tree.nodes[id];
      const auto c = edge_cost(n.pos, target, e.density, cfg.kde_step);
      const double total_len = n.length + c.length, total_den = n.density + c.density;
      const double cost = cfg.w1 * (1 - total_den / total_len) + cfg.w2 * total_len;
      if (cost < best) {
        best = cost;
        expected = id;
      }
    }
    CHECK(expected == dense);
    CHECK(tree.nodes[dense].length > (target - tree.nodes[sparse].pos).norm() + tree.nodes[sparse].length);
    CHECK(best_parent(tree, cands, target, e, cfg) == expected);
  }
}

TEST_CASE("rewire") {
  World w({polygon(rect(0, 0, 3000, 3000))});
  PlanConfig cfg;
  cfg.w1 = 0;
  cfg.w2 = 1;
  const auto env = w.env();
  PlanTree tree = make_tree(LocalPoint(0 + 100, 100), w.nav.bounds());
  auto add_child = [&](std::uint32_t parent, LocalPoint p) {
    const auto& q = tree.nodes[parent];
    const double l = q.length + (p - q.pos).norm();
    return tree.add({p, l / cfg.speed_mps(), l, 0, l, static_cast<std::int32_t>(parent)});
  };
  // A detour branch root -> (100, 1100) -> (1100, 1100) -> (1100, 1600).
  const auto d1 = add_child(0, LocalPoint(100, 1100));
  const auto d2 = add_child(d1, LocalPoint(1100, 1100));
  const auto d3 = add_child(d2, LocalPoint(1100, 1600));

  SUBCASE("no improvement leaves the tree unchanged") {
    const auto x = add_child(d2, LocalPoint(1200, 1200));
    const auto before = tree.nodes;
    const std::uint32_t cands[] = {d1, d3};
    CHECK(rewire(tree, cands, x, env, cfg) == 0);
    for (std::size_t i = 0; i < before.size(); ++i) {
      CHECK(tree.nodes[i].parent == before[i].parent);
      CHECK(tree.nodes[i].cost == before[i].cost);
    }
  }
  SUBCASE("strict improvement lowers the node and its subtree only") {
    const auto x = add_child(0, LocalPoint(700, 700));
    const auto before = tree.nodes;
    const std::uint32_t cands[] = {d2};
    CHECK(rewire(tree, cands, x, env, cfg) == 1);
    CHECK(tree.nodes[d2].parent == static_cast<std::int32_t>(x));
    CHECK(tree.nodes[d2].cost < before[d2].cost);
    for (std::size_t i = 0; i < before.size(); ++i) CHECK(tree.nodes[i].cost <= before[i].cost);
    CHECK(tree.nodes[d3].cost == doctest::Approx(before[d3].cost - (before[d2].cost - tree.nodes[d2].cost)));
    CHECK(tree.children[d1].empty());
    check_tree(tree, env, cfg);
  }
  SUBCASE("ancestors of the new node are never reparented under it") {
    const auto x = add_child(d3, LocalPoint(1100, 1700));
    const std::uint32_t cands[] = {d1, d2};
    // Forcing a lower stored cost on x would suggest a cycle; the ancestry check refuses it.
    tree.nodes[x].cost = tree.nodes[x].length = 0.0;
    CHECK(rewire(tree, cands, x, env, cfg) == 0);
  }
}

TEST_CASE("extract_waypoints") {
  PlanConfig cfg;
  cfg.goal_tolerance = 40;
  cfg.min_turn_radius = 500;
  const std::vector<LocalPoint> two{{0, 0}, {100, 0}};
  auto w2 = extract_waypoints(two, cfg);
  REQUIRE(w2.size() == 2);
  CHECK(w2[0].radius == 40);
  CHECK(w2[1].radius == 40);
  const std::vector<LocalPoint> three{{0, 0}, {300, 0}, {300, 400}};
  auto w3 = extract_waypoints(three, cfg);
  CHECK(w3[1].radius == doctest::Approx(150));
  cfg.min_turn_radius = 100;
  CHECK(extract_waypoints(three, cfg)[1].radius == doctest::Approx(100));
  cfg.min_turn_radius = 0;
  CHECK(extract_waypoints(three, cfg)[1].radius == doctest::Approx(150));
  for (const auto& wp : w3) CHECK(wp.radius > 0);
  CHECK_THROWS_AS(extract_waypoints(std::vector<LocalPoint>{{0, 0}}, cfg), InvalidInput);
}

TEST_CASE("plan: trivial and invalid requests") {
  World w({polygon(rect(0, 0, 1000, 1000))});
  PlanConfig cfg;
  const auto path = plan(w.env(), cfg, LocalPoint(500, 500), LocalPoint(500, 500));
  CHECK(path.states.size() == 1);
  CHECK(path.length == 0.0);
  CHECK_THROWS_AS(plan(w.env(), cfg, LocalPoint(-5, 500), LocalPoint(500, 500)), InvalidInput);
  CHECK_THROWS_AS(plan(w.env(), cfg, LocalPoint(5, 500), LocalPoint(500, 5000)), InvalidInput);
  cfg.goal_bias = 0.5;
  CHECK_THROWS_AS(plan(w.env(), cfg, LocalPoint(5, 500), LocalPoint(500, 500)), InvalidInput);
}

TEST_CASE("plan: no path carries tree statistics") {
  World w({polygon(rect(0, 0, 1000, 1000)), polygon(rect(1500, 0, 2500, 1000))});
  PlanConfig cfg;
  cfg.max_iter = 300;
  try {
    plan(w.env(), cfg, LocalPoint(100, 500), LocalPoint(2000, 500));
    FAIL("expected NoPath");
  } catch (const NoPath& e) {
    CHECK(e.stats.iterations == 300);
    CHECK(e.stats.nodes > 1);
    CHECK(e.stats.infeasible > 0);
    CHECK(e.stats.closest_to_goal >= 1000.0 - 1e-9);
  }
}

TEST_CASE("plan: convex region converges towards the straight line") {
  World w({polygon(rect(0, 0, 2000, 2000))});
  PlanConfig cfg;
  cfg.w1 = 0;
  cfg.w2 = 1;
  cfg.max_iter = 5000;
  cfg.seed = 7;
  const LocalPoint start(100, 100), goal(1900, 1900);
  const auto path = plan(w.env(), cfg, start, goal);
  const double d = (goal - start).norm();
  CHECK(path.length <= 1.02 * d);
  CHECK(path.states.front() == start);
  CHECK(path.states.back() == goal);
  CHECK(path.cost == doctest::Approx(path.length));
  CHECK_FALSE(verify_path(path.states, w.env(), cfg).has_value());
  for (std::size_t i = 1; i < path.cost_trace.size(); ++i) REQUIRE(path.cost_trace[i] <= path.cost_trace[i - 1]);
  CHECK(path.cost_trace.back() == doctest::Approx(path.cost));
  CHECK(path.waypoints.size() == path.states.size());
  CHECK(path.times.back() == doctest::Approx(path.length / cfg.speed_mps()));
}

TEST_CASE("plan: tree stays consistent with density, turn bound and a target") {
  World w({polygon(rect(0, 0, 3000, 1200), {rect(1300, 300, 1700, 700)})});
  w.set_density([](const LocalPoint& p) { return std::exp(-0.5 * std::pow((p.y() - 950) / 80, 2)) + 1e-3; });
  PlanConfig cfg;
  cfg.max_iter = 1500;
  cfg.min_turn_radius = 150;
  cfg.gamma = 2000;
  cfg.seed = 3;
  const VesselState own{LocalPoint(200, 600), 90.0, 10.0, 100.0, 7.0};
  const VesselState target{LocalPoint(800, 600), 90.0, 4.0, 50.0, 5.0};
  const auto enc = classify(own, target);
  REQUIRE(enc.kind == EncounterKind::Overtaking);
  const auto env = w.env(enc);
  int audits = 0;
  const auto path = plan(env, cfg, own.pos, LocalPoint(2800, 600), [&](const PlanTree& tree, int iter) {
    if (iter % 100 == 0) {
      check_tree(tree, env, cfg);
      ++audits;
    }
  });
  CHECK(audits == 15);
  CHECK_FALSE(verify_path(path.states, env, cfg).has_value());
  for (std::size_t i = 1; i < path.cost_trace.size(); ++i) REQUIRE(path.cost_trace[i] <= path.cost_trace[i - 1]);
}

TEST_CASE("plan: determinism and weight ordering") {
  World w({polygon(rect(0, 0, 3000, 1200))});
  // A well-travelled lane north of the direct line.
  w.set_density([](const LocalPoint& p) { return std::exp(-0.5 * std::pow((p.y() - 950) / 80, 2)) + 1e-3; });
  PlanConfig cfg;
  cfg.max_iter = 3000;
  cfg.seed = 11;
  cfg.w1 = 1;
  cfg.w2 = 1e-4;
  const LocalPoint start(200, 600), goal(2800, 600);
  const auto mixed = plan(w.env(), cfg, start, goal);
  const auto again = plan(w.env(), cfg, start, goal);
  REQUIRE(mixed.states.size() == again.states.size());
  for (std::size_t i = 0; i < mixed.states.size(); ++i) CHECK(mixed.states[i] == again.states[i]);
  CHECK(mixed.cost == again.cost);
  CHECK(mixed.cost == doctest::Approx(cfg.w1 * (1 - mixed.mean_density) + cfg.w2 * mixed.length));

  PlanConfig shortest = cfg;
  shortest.w1 = 0;
  const auto direct = plan(w.env(), shortest, start, goal);
  CHECK(direct.length <= mixed.length);
  CHECK(mixed.mean_density >= direct.mean_density);
  CHECK(mixed.mean_density > 0.5);
}
