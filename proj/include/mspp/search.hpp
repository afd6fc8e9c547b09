#pragma once

// The multiscale planning loop and the lazy A* it runs on each reduced graph.
//
// Each iteration rebuilds the reduced tree around the current node, runs A*
// from the current vertex to the vertex holding the goal, and commits only
// the first step of that path. Neighbors are generated when a vertex is
// popped from OPEN; vertex values are read (or sampled) the first time a
// g-value is computed for them.

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "mspp/neighbors.hpp"
#include "mspp/node_index.hpp"
#include "mspp/occupancy_tree.hpp"
#include "mspp/reduced_graph.hpp"
#include "mspp/reduced_tree.hpp"
#include "mspp/sampling.hpp"

namespace mspp {

using Path = std::vector<NodeIndex>;

// cost(u -> v) = ||c(u) - c(v)||_2 * (1 + weight * V(v))
struct CostModel {
  double weight = 1.0;
  double edge_cost(const NodeIndex& from, const NodeIndex& to, double to_value) const {
    return center_distance(from, to) * (1.0 + weight * to_value);
  }
};

enum class PlanMode { kExact, kSampling };
enum class NeighborMethod {
  kFast,      // tree lookups at pop time
  kPairwise,  // popped vertex tested against every vertex
};

struct PlannerConfig {
  double eps = 0.5;
  // Window multiplier; unset means max(1, sqrt(d)/2).
  std::optional<double> alpha;
  CostModel cost;
  PlanMode mode = PlanMode::kExact;
  NeighborMethod neighbors = NeighborMethod::kFast;
  double gamma = 0.05;
  std::uint32_t samples = 256;
  std::uint64_t seed = 0;
  SamplingScheme scheme = SamplingScheme::kUnitCell;
  // Loop iterations allowed; unset means 4 x number of unit cells.
  std::optional<std::uint64_t> budget;
  // Rebuild T_i from scratch every iteration and compare with the
  // incrementally maintained one.
  bool check_incremental = false;

  double resolved_alpha(int dim) const;
  std::uint64_t resolved_budget(int dim, int depth) const;
  void validate(int dim) const;
};

struct AStarStats {
  std::size_t pops = 0;
  std::size_t neighbor_calls = 0;
  std::size_t evaluations = 0;    // vertices whose value was read or estimated
  std::size_t fresh_samples = 0;  // of those, vertices sampled for the first time this session
  std::size_t touched = 0;        // |OPEN u CLOSED|
};

struct AStarResult {
  bool found = false;
  Path path;  // vertices from start to goal
  double cost = 0;
  AStarStats stats;
};

enum class PlanStatus { kSuccess, kNoPath, kStartOrGoalBlocked, kBudgetExceeded };

std::string to_string(PlanStatus status);

struct PlanStats {
  std::uint64_t iterations = 0;
  std::uint64_t backtracks = 0;
  std::uint64_t astar_pops = 0;
  std::uint64_t neighbor_calls = 0;
  std::uint64_t evaluations = 0;
  std::uint64_t touched = 0;
  std::uint64_t sampled_nodes = 0;
  std::uint64_t max_vertices = 0;
  std::uint64_t laziness_violations = 0;
  std::uint64_t incremental_checks = 0;
  std::uint64_t incremental_mismatches = 0;
  std::chrono::nanoseconds update_time{0};
  std::chrono::nanoseconds search_time{0};
  std::chrono::nanoseconds total_time{0};
};

struct PlanResult {
  PlanStatus status = PlanStatus::kNoPath;
  Path path;
  double cost = 0;
  PlanStats stats;
  std::string message;
  bool success() const { return status == PlanStatus::kSuccess; }
};

// One planning query. Holds T_i, the sample cache and the backtracking state.
// Single-threaded; sessions over the same tree or predicate are independent.
class PlanningSession {
 public:
  PlanningSession(const OccupancyTree& tree, PlannerConfig config);
  PlanningSession(const ObstaclePredicate& pred, int depth, PlannerConfig config);
  ~PlanningSession();
  PlanningSession(const PlanningSession&) = delete;
  PlanningSession& operator=(const PlanningSession&) = delete;

  PlanResult plan(std::span<const double> start, std::span<const double> goal);

  // Finest node containing a point: a leaf of T, or a unit cell.
  NodeIndex locate(std::span<const double> point) const;
  // Whether a finest node is an obstacle (exact eps test).
  bool finest_is_obstacle(const NodeIndex& idx);

  // Rebuilds T_i around `current` with the session's path and blocked sets.
  void update(const NodeIndex& current);
  // Lazy A* on the current T_i between two vertices.
  AStarResult astar(const NodeIndex& from, const NodeIndex& to);
  // Obstacle value of a vertex as A* sees it (exact or estimated).
  double vertex_value(ReducedTree::Handle h);
  bool vertex_passable(ReducedTree::Handle h);

  const ReducedTree& reduced_tree() const { return reduced_; }
  const PlannerConfig& config() const { return config_; }
  int dim() const { return dim_; }
  int depth() const { return depth_; }

 private:
  UpdateContext make_context(const NodeIndex& current) const;
  AStarResult astar_handles(ReducedTree::Handle from, ReducedTree::Handle to);
  void set_closed(const NodeIndex& finest, bool closed);
  void close_dead_region();

  const OccupancyTree* tree_ = nullptr;
  const ObstaclePredicate* pred_ = nullptr;
  int dim_;
  int depth_;
  PlannerConfig config_;
  double alpha_;
  ReducedTree reduced_;
  std::unique_ptr<HybridClassifier> classifier_;

  Path path_;
  PathCover cover_;
  std::unordered_set<NodeIndex, NodeIndexHash> on_path_;
  std::unordered_set<NodeIndex, NodeIndexHash> blocked_;
  // Tree mode: visited or blocked, except the current node; by tree node id.
  std::vector<std::uint8_t> closed_ids_;
  // Predicate mode on small worlds: the same flags for every node.
  DenseNodeNumbering numbering_;
  std::vector<std::uint8_t> closed_nodes_;
  // Predicate mode otherwise: dead regions left by failed searches.
  std::unordered_set<NodeIndex, NodeIndexHash> dead_;
  std::size_t vertex_count_ = 0;
  NodeIndex current_;

  struct Record;
  std::vector<Record> records_;
  std::uint32_t stamp_ = 0;
};

PlanResult mspp_plan(const OccupancyTree& tree, std::span<const double> start, std::span<const double> goal,
                     const PlannerConfig& config);
PlanResult mspp_plan(const ObstaclePredicate& pred, int depth, std::span<const double> start,
                     std::span<const double> goal, const PlannerConfig& config);

enum class FipViolation { kNone, kAdjacency, kNotLeaf, kObstacle, kEndpoint };

std::string to_string(FipViolation v);

struct FipCheck {
  bool ok = true;
  FipViolation violation = FipViolation::kNone;
  std::size_t position = 0;
  std::string message;
};

// Adjacency, leaves of T, no eps-obstacles, endpoints hold start and goal.
// Endpoints are only checked when the points are given.
FipCheck verify_fip(const OccupancyTree& tree, std::span<const NodeIndex> path, double eps,
                    std::span<const double> start = {}, std::span<const double> goal = {});
// Same clauses for a unit-cell path checked against a predicate.
FipCheck verify_unit_path(const ObstaclePredicate& pred, int depth, std::span<const NodeIndex> path, double eps,
                          std::span<const double> start = {}, std::span<const double> goal = {});

}  // namespace mspp
