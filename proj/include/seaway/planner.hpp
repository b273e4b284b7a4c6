#pragma once

#include "seaway/colregs.hpp"
#include "seaway/kde.hpp"
#include "seaway/nav_index.hpp"
#include "seaway/sampling.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

namespace seaway {

struct PlanConfig {
  double w1 = 1.0;
  double w2 = 1e-4;              // per meter
  double eta = 200.0;            // meters
  double goal_bias = 0.05;
  double gamma = 3000.0;         // meters
  int max_iter = 5000;
  double min_turn_radius = 0.0;  // meters, 0 disables the turn bound
  double own_speed = 10.0;       // knots
  double goal_tolerance = 50.0;  // meters
  double kde_step = 10.0;        // meters
  std::uint64_t seed = 1;
  ColregsConfig colregs;

  void validate() const;
  double speed_mps() const { return own_speed * kKnot; }
};

//! Everything the planner reads. All members must outlive the plan call.
struct PlanEnv {
  const NavIndex* nav = nullptr;
  const TriangulatedRegion* region = nullptr;
  DensityField density;
  std::optional<Encounter> encounter;
};

struct EdgeCost {
  double length = 0.0;
  double density = 0.0;  // integral of the normalized density along the edge, meters
};

//! Path cost w1 (1 - mean density) + w2 length, with mean density = density / length.
inline double path_cost(double length, double density, const PlanConfig& cfg) {
  if (length <= 0.0) return 0.0;
  return cfg.w1 * (1.0 - density / length) + cfg.w2 * length;
}

//! Rectangle-rule integral of the density over kde_step sub-segments.
EdgeCost edge_cost(const LocalPoint& a, const LocalPoint& b, const DensityField& density, double step);

//! Point `eta` along a -> b, or b itself if it is closer.
LocalPoint extend(const LocalPoint& from, const LocalPoint& to, double eta);

//! Largest heading change allowed between legs of the given lengths so that an
//! arc of radius `min_turn_radius` fits; pi when there is no bound.
double max_turn(double len_in, double len_out, double min_turn_radius);
//! Absolute heading change from a->b to b->c, radians in [0, pi].
double turn_angle(const LocalPoint& a, const LocalPoint& b, const LocalPoint& c);

struct PlanNode {
  LocalPoint pos = LocalPoint::Zero();
  double t = 0.0;
  double length = 0.0;
  double density = 0.0;
  double cost = 0.0;
  std::int32_t parent = -1;
};

//! Uniform bucket grid over node positions.
class NodeIndex {
 public:
  NodeIndex() = default;
  NodeIndex(const Box& bounds, double cell);

  void insert(std::uint32_t id, const LocalPoint& p);
  //! Closest stored node, ties to the lowest id. Requires a non-empty index.
  std::uint32_t nearest(const LocalPoint& p, std::span<const PlanNode> nodes) const;
  //! Nodes within distance r of p, in increasing id order.
  std::vector<std::uint32_t> within(const LocalPoint& p, double r, std::span<const PlanNode> nodes) const;
  std::size_t size() const { return size_; }

 private:
  Box box_;
  double cell_ = 1.0;
  int nx_ = 1, ny_ = 1;
  std::size_t size_ = 0;
  std::vector<std::vector<std::uint32_t>> cells_;

  int cx(double x) const;
  int cy(double y) const;
};

//! Link from a node within goal_tolerance to the goal. The leg cost is always
//! charged; the leg is only sailed when it passes the feasibility checks,
//! otherwise the path ends at the node.
struct GoalLink {
  EdgeCost leg;
  bool sailed = true;
};

struct PlanTree {
  std::vector<PlanNode> nodes;
  std::vector<std::vector<std::uint32_t>> children;
  std::vector<std::optional<GoalLink>> goal_link;
  std::vector<std::uint32_t> goal_nodes;
  LocalPoint goal = LocalPoint::Zero();
  NodeIndex index;

  std::uint32_t add(const PlanNode& n);
  //! Root-to-node positions.
  std::vector<LocalPoint> branch(std::uint32_t id) const;
  bool is_ancestor(std::uint32_t a, std::uint32_t of) const;
};

//! Goal-biased draw over the triangulated region.
class GoalSampler {
 public:
  GoalSampler(const TriangulatedRegion& region, const LocalPoint& goal, const PlanConfig& cfg);
  LocalPoint draw();
  bool last_was_goal() const { return last_goal_; }

 private:
  SampleStream stream_;
  CounterRng coin_;
  LocalPoint goal_;
  double bias_;
  bool last_goal_ = false;
};

struct Waypoint {
  LocalPoint pos = LocalPoint::Zero();
  double radius = 0.0;  // radius of acceptance, meters
};

struct PlannedPath {
  std::vector<LocalPoint> states;
  std::vector<double> times;
  double length = 0.0;
  double mean_density = 0.0;
  double cost = 0.0;
  std::vector<Waypoint> waypoints;
  int iterations = 0;
  std::size_t tree_size = 0;
  //! Best goal-reaching cost after each iteration, infinity before the first.
  std::vector<double> cost_trace;
};

struct PlanStats {
  int iterations = 0;
  std::size_t nodes = 0;
  std::size_t infeasible = 0;     // candidate edges rejected by the feasibility check
  double closest_to_goal = 0.0;   // meters
};

struct NoPath : std::runtime_error {
  PlanStats stats;
  NoPath(const std::string& what, const PlanStats& s) : std::runtime_error(what), stats(s) {}
};

//! Edge check from an existing node: region containment, turn bound at the
//! node, and COLREGs compliance over the edge's time window.
bool feasible(const PlanTree& tree, std::uint32_t parent, const LocalPoint& candidate, const PlanEnv& env,
              const PlanConfig& cfg);

//! Neighbourhood radius min(gamma sqrt(ln n / n), eta).
double near_radius(std::size_t n, const PlanConfig& cfg);
std::vector<std::uint32_t> near(const PlanTree& tree, const LocalPoint& x, const PlanConfig& cfg);

//! Cheapest feasible parent for x_new among `candidates`, first wins ties.
std::optional<std::uint32_t> best_parent(const PlanTree& tree, std::span<const std::uint32_t> candidates,
                                         const LocalPoint& x_new, const PlanEnv& env, const PlanConfig& cfg);

//! Reparents each candidate under x_new when that lowers its cost, keeps every
//! edge and goal leg in its subtree feasible, and raises no cost in the
//! subtree. Returns the number of reparented nodes.
std::size_t rewire(PlanTree& tree, std::span<const std::uint32_t> candidates, std::uint32_t x_new,
                   const PlanEnv& env, const PlanConfig& cfg);

//! Called after every iteration; used by tests to audit the tree.
using PlanObserver = std::function<void(const PlanTree&, int iteration)>;

//! Grounding-aware RRT*. Throws NoPath when no node links to the goal.
PlannedPath plan(const PlanEnv& env, const PlanConfig& cfg, const LocalPoint& start, const LocalPoint& goal,
                 const PlanObserver& observer = {});

std::vector<Waypoint> extract_waypoints(std::span<const LocalPoint> states, const PlanConfig& cfg);

//! First violated constraint of a path sailed from t = 0, or nullopt.
std::optional<std::string> verify_path(std::span<const LocalPoint> states, const PlanEnv& env, const PlanConfig& cfg);

}  // namespace seaway
