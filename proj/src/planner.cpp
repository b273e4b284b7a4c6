#include "seaway/planner.hpp"

#include <algorithm>
#include <limits>

namespace seaway {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxIndexCells = 1u << 20;

bool leg_compliant(const PlanEnv& env, const PlanConfig& cfg, const LocalPoint& a, const LocalPoint& b, double t0,
                   double length) {
  if (!env.encounter) return true;
  return compliant_leg(*env.encounter, a, b, t0, t0 + length / cfg.speed_mps(), cfg.colregs);
}

bool turn_ok(const LocalPoint& prev, const LocalPoint& at, const LocalPoint& next, const PlanConfig& cfg) {
  if (cfg.min_turn_radius <= 0.0) return true;
  return turn_angle(prev, at, next) <= max_turn((at - prev).norm(), (next - at).norm(), cfg.min_turn_radius);
}

}  // namespace

void PlanConfig::validate() const {
  if (!(w1 >= 0.0 && w2 >= 0.0 && w1 + w2 > 0.0)) throw InvalidInput("weights must be non-negative with w1 + w2 > 0");
  if (!(eta > 0.0)) throw InvalidInput("eta must be positive");
  if (!(goal_bias >= 0.0 && goal_bias <= 0.2)) throw InvalidInput("goal_bias must lie in [0, 0.2]");
  if (!(gamma > 0.0)) throw InvalidInput("gamma must be positive");
  if (max_iter < 1) throw InvalidInput("max_iter must be at least 1");
  if (!(min_turn_radius >= 0.0)) throw InvalidInput("min_turn_radius must be non-negative");
  if (!(own_speed > 0.0)) throw InvalidInput("own speed must be positive");
  if (!(goal_tolerance > 0.0)) throw InvalidInput("goal_tolerance must be positive");
  if (!(kde_step > 0.0)) throw InvalidInput("kde_step must be positive");
  colregs.validate();
}

EdgeCost edge_cost(const LocalPoint& a, const LocalPoint& b, const DensityField& density, double step) {
  EdgeCost e;
  e.length = (b - a).norm();
  if (e.length == 0.0) return e;
  const int n = std::max(1, static_cast<int>(std::ceil(e.length / step - 1e-12)));
  const double sub = e.length / n;
  for (int k = 0; k < n; ++k) e.density += density(a + (b - a) * ((k + 0.5) / n)) * sub;
  return e;
}

LocalPoint extend(const LocalPoint& from, const LocalPoint& to, double eta) {
  const double d = (to - from).norm();
  if (d == 0.0) throw InvalidInput("cannot extend towards the same point");
  if (d <= eta) return to;
  return from + (to - from) * (eta / d);
}

double max_turn(double len_in, double len_out, double min_turn_radius) {
  if (min_turn_radius <= 0.0) return std::numbers::pi;
  const double ratio = std::min(len_in, len_out) / (2.0 * min_turn_radius);
  return ratio >= 1.0 ? std::numbers::pi : 2.0 * std::asin(ratio);
}

double turn_angle(const LocalPoint& a, const LocalPoint& b, const LocalPoint& c) {
  const LocalPoint u = b - a, v = c - b;
  return std::abs(std::atan2(cross2(u, v), u.dot(v)));
}

NodeIndex::NodeIndex(const Box& bounds, double cell) : box_(bounds), cell_(cell) {
  if (box_.empty()) box_.extend(LocalPoint::Zero());
  const LocalPoint size = box_.size();
  auto dims = [&] {
    nx_ = std::max(1, static_cast<int>(std::ceil(size.x() / cell_)));
    ny_ = std::max(1, static_cast<int>(std::ceil(size.y() / cell_)));
  };
  dims();
  while (static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_) > kMaxIndexCells) {
    cell_ *= 2.0;
    dims();
  }
  cells_.assign(static_cast<std::size_t>(nx_) * ny_, {});
}

int NodeIndex::cx(double x) const { return std::clamp(static_cast<int>(std::floor((x - box_.min.x()) / cell_)), 0, nx_ - 1); }
int NodeIndex::cy(double y) const { return std::clamp(static_cast<int>(std::floor((y - box_.min.y()) / cell_)), 0, ny_ - 1); }

void NodeIndex::insert(std::uint32_t id, const LocalPoint& p) {
  cells_[static_cast<std::size_t>(cy(p.y())) * nx_ + cx(p.x())].push_back(id);
  ++size_;
}

std::uint32_t NodeIndex::nearest(const LocalPoint& p, std::span<const PlanNode> nodes) const {
  const int qx = cx(p.x()), qy = cy(p.y());
  double best = kInf;
  std::uint32_t best_id = std::numeric_limits<std::uint32_t>::max();
  auto scan = [&](int i, int j) {
    if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return;
    for (std::uint32_t id : cells_[static_cast<std::size_t>(j) * nx_ + i]) {
      const double d = (nodes[id].pos - p).squaredNorm();
      if (d < best || (d == best && id < best_id)) {
        best = d;
        best_id = id;
      }
    }
  };
  const int max_ring = std::max(nx_, ny_);
  for (int k = 0; k <= max_ring; ++k) {
    if (k == 0) {
      scan(qx, qy);
    } else {
      for (int i = qx - k; i <= qx + k; ++i) {
        scan(i, qy - k);
        scan(i, qy + k);
      }
      for (int j = qy - k + 1; j <= qy + k - 1; ++j) {
        scan(qx - k, j);
        scan(qx + k, j);
      }
    }
    // Anything in ring k + 1 or beyond is at least k cells away.
    const double bound = k * cell_;
    if (best_id != std::numeric_limits<std::uint32_t>::max() && best < bound * bound) break;
  }
  return best_id;
}

std::vector<std::uint32_t> NodeIndex::within(const LocalPoint& p, double r, std::span<const PlanNode> nodes) const {
  std::vector<std::uint32_t> out;
  const double r2 = r * r;
  const int i0 = cx(p.x() - r), i1 = cx(p.x() + r), j0 = cy(p.y() - r), j1 = cy(p.y() + r);
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i)
      for (std::uint32_t id : cells_[static_cast<std::size_t>(j) * nx_ + i])
        if ((nodes[id].pos - p).squaredNorm() <= r2) out.push_back(id);
  std::sort(out.begin(), out.end());
  return out;
}

std::uint32_t PlanTree::add(const PlanNode& n) {
  const auto id = static_cast<std::uint32_t>(nodes.size());
  nodes.push_back(n);
  children.emplace_back();
  goal_link.emplace_back();
  if (n.parent >= 0) children[static_cast<std::size_t>(n.parent)].push_back(id);
  index.insert(id, n.pos);
  return id;
}

std::vector<LocalPoint> PlanTree::branch(std::uint32_t id) const {
  std::vector<LocalPoint> out;
  for (std::int32_t k = static_cast<std::int32_t>(id); k >= 0; k = nodes[static_cast<std::size_t>(k)].parent)
    out.push_back(nodes[static_cast<std::size_t>(k)].pos);
  std::reverse(out.begin(), out.end());
  return out;
}

bool PlanTree::is_ancestor(std::uint32_t a, std::uint32_t of) const {
  for (std::int32_t k = static_cast<std::int32_t>(of); k >= 0; k = nodes[static_cast<std::size_t>(k)].parent)
    if (static_cast<std::uint32_t>(k) == a) return true;
  return false;
}

GoalSampler::GoalSampler(const TriangulatedRegion& region, const LocalPoint& goal, const PlanConfig& cfg)
    : stream_(region, cfg.seed), coin_(cfg.seed ^ 0xA5A5A5A5DEADBEEFULL), goal_(goal), bias_(cfg.goal_bias) {}

LocalPoint GoalSampler::draw() {
  last_goal_ = coin_.uniform() < bias_;
  return last_goal_ ? goal_ : stream_.draw();
}

bool feasible(const PlanTree& tree, std::uint32_t parent, const LocalPoint& candidate, const PlanEnv& env,
              const PlanConfig& cfg) {
  const PlanNode& p = tree.nodes[parent];
  if (candidate == p.pos) return false;
  if (!env.nav->segment_inside(p.pos, candidate)) return false;
  if (p.parent >= 0 && !turn_ok(tree.nodes[static_cast<std::size_t>(p.parent)].pos, p.pos, candidate, cfg))
    return false;
  return leg_compliant(env, cfg, p.pos, candidate, p.t, (candidate - p.pos).norm());
}

double near_radius(std::size_t n, const PlanConfig& cfg) {
  if (n < 2) return 0.0;
  const double dn = static_cast<double>(n);
  return std::min(cfg.gamma * std::sqrt(std::log(dn) / dn), cfg.eta);
}

std::vector<std::uint32_t> near(const PlanTree& tree, const LocalPoint& x, const PlanConfig& cfg) {
  return tree.index.within(x, near_radius(tree.nodes.size(), cfg), tree.nodes);
}

std::optional<std::uint32_t> best_parent(const PlanTree& tree, std::span<const std::uint32_t> candidates,
                                         const LocalPoint& x_new, const PlanEnv& env, const PlanConfig& cfg) {
  std::optional<std::uint32_t> best;
  double best_cost = kInf;
  for (std::uint32_t c : candidates) {
    const PlanNode& n = tree.nodes[c];
    if (n.pos == x_new) continue;
    const EdgeCost e = edge_cost(n.pos, x_new, env.density, cfg.kde_step);
    const double cost = path_cost(n.length + e.length, n.density + e.density, cfg);
    if (cost < best_cost && feasible(tree, c, x_new, env, cfg)) {
      best_cost = cost;
      best = c;
    }
  }
  return best;
}

namespace {

// Attempts to reparent y under x; commits only if every check passes.
bool try_reparent(PlanTree& tree, std::uint32_t y, std::uint32_t x, const PlanEnv& env, const PlanConfig& cfg) {
  const PlanNode& xn = tree.nodes[x];
  const PlanNode& yn = tree.nodes[y];
  if (yn.parent < 0 || static_cast<std::uint32_t>(yn.parent) == x || tree.is_ancestor(y, x)) return false;
  const EdgeCost e = edge_cost(xn.pos, yn.pos, env.density, cfg.kde_step);
  if (e.length == 0.0) return false;
  const double new_cost = path_cost(xn.length + e.length, xn.density + e.density, cfg);
  if (!(new_cost < yn.cost)) return false;
  if (!feasible(tree, x, yn.pos, env, cfg)) return false;

  const double dt = xn.t + e.length / cfg.speed_mps() - yn.t;
  const double dl = xn.length + e.length - yn.length;
  const double dd = xn.density + e.density - yn.density;

  // The incoming heading at y changes, so its outgoing legs must still turn within bounds.
  for (std::uint32_t c : tree.children[y])
    if (!turn_ok(xn.pos, yn.pos, tree.nodes[c].pos, cfg)) return false;
  if (const auto& g = tree.goal_link[y]; g && g->sailed && g->leg.length > 0.0 && !turn_ok(xn.pos, yn.pos, tree.goal, cfg))
    return false;

  std::vector<std::uint32_t> subtree{y};
  for (std::size_t k = 0; k < subtree.size(); ++k)
    for (std::uint32_t c : tree.children[subtree[k]]) subtree.push_back(c);

  std::vector<double> costs(subtree.size());
  for (std::size_t k = 0; k < subtree.size(); ++k) {
    const std::uint32_t u = subtree[k];
    const PlanNode& un = tree.nodes[u];
    costs[k] = path_cost(un.length + dl, un.density + dd, cfg);
    if (k > 0 && costs[k] > un.cost) return false;
    if (k > 0) {
      const PlanNode& pn = tree.nodes[static_cast<std::size_t>(un.parent)];
      if (!leg_compliant(env, cfg, pn.pos, un.pos, pn.t + dt, un.length - pn.length)) return false;
    }
    if (const auto& g = tree.goal_link[u]; g && g->leg.length > 0.0) {
      if (path_cost(un.length + dl + g->leg.length, un.density + dd + g->leg.density, cfg) >
          path_cost(un.length + g->leg.length, un.density + g->leg.density, cfg))
        return false;
      if (g->sailed && !leg_compliant(env, cfg, un.pos, tree.goal, un.t + dt, g->leg.length)) return false;
    }
  }

  auto& siblings = tree.children[static_cast<std::size_t>(yn.parent)];
  siblings.erase(std::find(siblings.begin(), siblings.end(), y));
  tree.children[x].push_back(y);
  tree.nodes[y].parent = static_cast<std::int32_t>(x);
  for (std::size_t k = 0; k < subtree.size(); ++k) {
    PlanNode& un = tree.nodes[subtree[k]];
    un.t += dt;
    un.length += dl;
    un.density += dd;
    un.cost = costs[k];
  }
  return true;
}

double goal_cost(const PlanTree& tree, std::uint32_t id, const PlanConfig& cfg) {
  const PlanNode& n = tree.nodes[id];
  const EdgeCost& g = tree.goal_link[id]->leg;
  return path_cost(n.length + g.length, n.density + g.density, cfg);
}

}  // namespace

std::size_t rewire(PlanTree& tree, std::span<const std::uint32_t> candidates, std::uint32_t x_new,
                   const PlanEnv& env, const PlanConfig& cfg) {
  std::size_t changed = 0;
  for (std::uint32_t y : candidates)
    if (y != x_new && try_reparent(tree, y, x_new, env, cfg)) ++changed;
  return changed;
}

std::vector<Waypoint> extract_waypoints(std::span<const LocalPoint> states, const PlanConfig& cfg) {
  if (states.size() < 2) throw InvalidInput("waypoints need at least two states");
  std::vector<Waypoint> out;
  out.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    double r = cfg.goal_tolerance;
    if (i > 0 && i + 1 < states.size()) {
      const double half = 0.5 * std::min((states[i] - states[i - 1]).norm(), (states[i + 1] - states[i]).norm());
      r = cfg.min_turn_radius > 0.0 ? std::min(cfg.min_turn_radius, half) : half;
    }
    out.push_back({states[i], r});
  }
  return out;
}

std::optional<std::string> verify_path(std::span<const LocalPoint> states, const PlanEnv& env, const PlanConfig& cfg) {
  if (states.empty()) return "empty path";
  if (!env.nav->contains(states.front())) return "start outside the navigable region";
  double t = 0.0;
  for (std::size_t i = 0; i + 1 < states.size(); ++i) {
    const LocalPoint& a = states[i];
    const LocalPoint& b = states[i + 1];
    const double len = (b - a).norm();
    const std::string leg = "leg " + std::to_string(i);
    if (len == 0.0) return leg + " has zero length";
    if (!env.nav->segment_inside(a, b)) return leg + " leaves the navigable region";
    if (i > 0 && !turn_ok(states[i - 1], a, b, cfg)) return leg + " exceeds the turn bound";
    if (!leg_compliant(env, cfg, a, b, t, len)) return leg + " violates COLREGs compliance";
    t += len / cfg.speed_mps();
  }
  return std::nullopt;
}

PlannedPath plan(const PlanEnv& env, const PlanConfig& cfg, const LocalPoint& start, const LocalPoint& goal,
                 const PlanObserver& observer) {
  cfg.validate();
  if (!env.nav || !env.region || env.region->empty()) throw InvalidInput("planner needs a non-empty region");
  if (!env.nav->contains(start)) throw InvalidInput("start lies outside the navigable region");
  if (!env.nav->contains(goal)) throw InvalidInput("goal lies outside the navigable region");

  PlannedPath out;
  if (start == goal) {
    out.states = {start};
    out.times = {0.0};
    out.mean_density = env.density(start);
    out.waypoints = {{start, cfg.goal_tolerance}};
    out.cost_trace = {0.0};
    out.tree_size = 1;
    return out;
  }

  PlanTree tree;
  tree.goal = goal;
  Box box = env.nav->bounds();
  box.extend(start);
  box.extend(goal);
  tree.index = NodeIndex(box, cfg.eta);
  tree.add({start, 0.0, 0.0, 0.0, 0.0, -1});

  auto link_goal = [&](std::uint32_t id) {
    const PlanNode& n = tree.nodes[id];
    const double d = (goal - n.pos).norm();
    if (d > cfg.goal_tolerance) return;
    if (d == 0.0)
      tree.goal_link[id] = GoalLink{};
    else
      tree.goal_link[id] = GoalLink{edge_cost(n.pos, goal, env.density, cfg.kde_step), feasible(tree, id, goal, env, cfg)};
    tree.goal_nodes.push_back(id);
  };
  link_goal(0);

  GoalSampler sampler(*env.region, goal, cfg);
  PlanStats stats;
  double best = kInf;
  std::int64_t best_id = -1;
  out.cost_trace.reserve(static_cast<std::size_t>(cfg.max_iter));

  for (int iter = 1; iter <= cfg.max_iter; ++iter) {
    const LocalPoint x_rand = sampler.draw();
    const std::uint32_t nearest = tree.index.nearest(x_rand, tree.nodes);
    if (tree.nodes[nearest].pos != x_rand) {
      const LocalPoint x_new = extend(tree.nodes[nearest].pos, x_rand, cfg.eta);
      // A nearest node whose heading blocks the extension would otherwise
      // stall growth in its Voronoi cell, so the near set is tried as well.
      std::vector<std::uint32_t> x_near = near(tree, x_new, cfg);
      std::vector<std::uint32_t> candidates = x_near;
      if (std::find(candidates.begin(), candidates.end(), nearest) == candidates.end()) candidates.push_back(nearest);
      if (const auto parent = best_parent(tree, candidates, x_new, env, cfg)) {
        const PlanNode& p = tree.nodes[*parent];
        const EdgeCost e = edge_cost(p.pos, x_new, env.density, cfg.kde_step);
        const double length = p.length + e.length, density = p.density + e.density;
        const std::uint32_t id = tree.add({x_new, p.t + e.length / cfg.speed_mps(), length, density,
                                           path_cost(length, density, cfg), static_cast<std::int32_t>(*parent)});
        x_near.erase(std::remove(x_near.begin(), x_near.end(), *parent), x_near.end());
        rewire(tree, x_near, id, env, cfg);
        link_goal(id);
      } else {
        ++stats.infeasible;
      }
    }
    for (std::uint32_t g : tree.goal_nodes) {
      const double c = goal_cost(tree, g, cfg);
      if (c < best || (c == best && static_cast<std::int64_t>(g) < best_id)) {
        best = c;
        best_id = g;
      }
    }
    out.cost_trace.push_back(best);
    if (observer) observer(tree, iter);
  }

  stats.iterations = cfg.max_iter;
  stats.nodes = tree.nodes.size();
  if (best_id < 0) {
    stats.closest_to_goal = kInf;
    for (const auto& n : tree.nodes) stats.closest_to_goal = std::min(stats.closest_to_goal, (n.pos - goal).norm());
    throw NoPath("no path reached the goal after " + std::to_string(cfg.max_iter) + " iterations (" +
                     std::to_string(stats.nodes) + " nodes, closest " + std::to_string(stats.closest_to_goal) + " m)",
                 stats);
  }

  out.states = tree.branch(static_cast<std::uint32_t>(best_id));
  if (out.states.back() != goal && tree.goal_link[static_cast<std::size_t>(best_id)]->sailed) out.states.push_back(goal);
  out.times.push_back(0.0);
  double density = 0.0;
  for (std::size_t i = 0; i + 1 < out.states.size(); ++i) {
    const EdgeCost e = edge_cost(out.states[i], out.states[i + 1], env.density, cfg.kde_step);
    out.length += e.length;
    density += e.density;
    out.times.push_back(out.times.back() + e.length / cfg.speed_mps());
  }
  out.mean_density = density / out.length;
  out.cost = path_cost(out.length, density, cfg);
  out.waypoints = extract_waypoints(out.states, cfg);
  out.iterations = cfg.max_iter;
  out.tree_size = tree.nodes.size();
  return out;
}

}  // namespace seaway
