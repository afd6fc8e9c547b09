#include "mspp/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include <fmt/format.h>

namespace mspp {

using Clock = std::chrono::steady_clock;

namespace {

// Predicate-mode closed flags use a flat table up to 2^22 unit cells.
constexpr int kMaxDenseNodeBits = 22;

}  // namespace

std::string to_string(PlanStatus status) {
  switch (status) {
    case PlanStatus::kSuccess: return "success";
    case PlanStatus::kNoPath: return "no-path";
    case PlanStatus::kStartOrGoalBlocked: return "start-or-goal-blocked";
    case PlanStatus::kBudgetExceeded: return "budget-exceeded";
  }
  return "unknown";
}

std::string to_string(FipViolation v) {
  switch (v) {
    case FipViolation::kNone: return "none";
    case FipViolation::kAdjacency: return "adjacency";
    case FipViolation::kNotLeaf: return "not-leaf";
    case FipViolation::kObstacle: return "obstacle";
    case FipViolation::kEndpoint: return "endpoint";
  }
  return "unknown";
}

double PlannerConfig::resolved_alpha(int dim) const {
  return alpha ? *alpha : std::max(1.0, min_window_alpha(dim));
}

std::uint64_t PlannerConfig::resolved_budget(int dim, int depth) const {
  return budget ? *budget : std::uint64_t{4} << (dim * depth);
}

void PlannerConfig::validate(int dim) const {
  if (!(eps >= 0.0 && eps < 1.0)) throw Error(fmt::format("eps = {} must lie in [0, 1)", eps));
  const double a = resolved_alpha(dim);
  if (!(a > 0)) throw Error("alpha must be positive");
  // Below sqrt(d)/2 a coarse cell touching the current node can pass the
  // window test, and the committed step would not be at finest resolution.
  if (!window_alpha_admissible(dim, a)) {
    throw Error(fmt::format("alpha = {} is too small for d = {} (needs {} {:.6f})", a, dim, dim == 1 ? ">" : ">=",
                            min_window_alpha(dim)));
  }
  if (!(cost.weight >= 0)) throw Error("cost weight must be non-negative");
  if (mode == PlanMode::kSampling) {
    if (!(gamma > 0)) throw Error("gamma must be positive");
    if (samples < 1) throw Error("samples must be at least 1");
  }
}

struct PlanningSession::Record {
  double g = 0;
  double value = 0;
  ReducedTree::Handle parent = ReducedTree::kNone;
  std::uint32_t stamp = 0;
  std::uint8_t state = 0;  // 0 unseen, 1 open, 2 closed
};

PlanningSession::PlanningSession(const OccupancyTree& tree, PlannerConfig config)
    : tree_(&tree), dim_(tree.dim()), depth_(tree.depth()), config_(std::move(config)),
      alpha_(config_.resolved_alpha(dim_)), reduced_(dim_, depth_), cover_(depth_, dim_) {
  config_.mode = PlanMode::kExact;
  config_.validate(dim_);
  closed_ids_.assign(tree.node_count(), 0);
}

PlanningSession::PlanningSession(const ObstaclePredicate& pred, int depth, PlannerConfig config)
    : pred_(&pred), dim_(pred.dim()), depth_(depth), config_(std::move(config)),
      alpha_(config_.resolved_alpha(dim_)), reduced_(dim_, depth_), cover_(depth_, dim_) {
  config_.mode = PlanMode::kSampling;
  config_.validate(dim_);
  HybridParams params{config_.eps, config_.gamma, config_.samples, config_.seed, config_.scheme};
  classifier_ = std::make_unique<HybridClassifier>(pred, params, depth_);
  if (dim_ * depth_ <= kMaxDenseNodeBits) {
    numbering_ = DenseNodeNumbering(dim_, depth_);
    closed_nodes_.assign(numbering_.size(), 0);
  }
}

PlanningSession::~PlanningSession() = default;

NodeIndex PlanningSession::locate(std::span<const double> point) const {
  if (tree_) return leaf_at(*tree_, point);
  if (static_cast<int>(point.size()) != dim_) {
    throw Error(fmt::format("point has {} coordinates, world has {}", point.size(), dim_));
  }
  std::array<std::int64_t, kMaxDim> lower{};
  const double extent = std::ldexp(1.0, depth_);
  for (int j = 0; j < dim_; ++j) {
    if (!(point[j] >= 0.0 && point[j] < extent)) {
      throw Error(fmt::format("point coordinate {} on axis {} is outside the world [0, {})", point[j], j, extent));
    }
    lower[j] = static_cast<std::int64_t>(std::floor(point[j]));
  }
  return NodeIndex::from_lower(dim_, 0, std::span<const std::int64_t>(lower.data(), dim_));
}

bool PlanningSession::finest_is_obstacle(const NodeIndex& idx) {
  if (tree_) return is_eps_obstacle(*tree_, idx, config_.eps);
  return classifier_->classify(idx).obstacle;
}

UpdateContext PlanningSession::make_context(const NodeIndex& current) const {
  UpdateContext ctx;
  ctx.tree = tree_;
  ctx.current = current;
  ctx.eps = config_.eps;
  ctx.window.alpha = alpha_;
  ctx.path = &cover_;
  if (tree_) {
    ctx.closed_tree_nodes = &closed_ids_;
  } else if (!closed_nodes_.empty()) {
    ctx.closed_nodes = &closed_nodes_;
    ctx.numbering = &numbering_;
  } else {
    // Path nodes are unit cells in predicate mode.
    ctx.closed = [this, current](const NodeIndex& idx) {
      if (idx.k == 0 && (blocked_.contains(idx) || (idx != current && on_path_.contains(idx)))) return true;
      return !dead_.empty() && dead_.contains(idx);
    };
  }
  return ctx;
}

void PlanningSession::update(const NodeIndex& current) {
  vertex_count_ = update_reduced_tree(reduced_, make_context(current));
}

void PlanningSession::set_closed(const NodeIndex& finest, bool closed) {
  const std::uint8_t flag = closed ? 1 : 0;
  if (tree_) {
    closed_ids_[tree_->locate(finest).id] = flag;
  } else if (!closed_nodes_.empty()) {
    closed_nodes_[numbering_.slot(finest)] = flag;
  }
}

void PlanningSession::close_dead_region() {
  // Exact G_i over-approximates free-space connectivity, so everything the
  // failed search reached is cut off from the goal for as long as the path
  // prefix stays closed. Backtracking only reopens the new current node, and
  // any route through a dead region would have to pass through it, so
  // closing the region for good loses no solution. In sampling mode the same
  // holds unless some node was misclassified as an obstacle.
  const auto limit = static_cast<ReducedTree::Handle>(std::min(records_.size(), reduced_.storage_size()));
  for (ReducedTree::Handle h = 0; h < limit; ++h) {
    if (records_[h].stamp != stamp_ || !reduced_.is_vertex(h)) continue;
    const NodeIndex& idx = reduced_.index(h);
    if (tree_) {
      const auto at = tree_->locate(idx);
      if (at.idx == idx) closed_ids_[at.id] = 1;
    } else if (!classifier_->classify(idx).obstacle) {
      if (closed_nodes_.empty()) {
        dead_.insert(idx);
      } else {
        closed_nodes_[numbering_.slot(idx)] = 1;
      }
    }
  }
}

double PlanningSession::vertex_value(ReducedTree::Handle h) {
  if (tree_) return reduced_.value(h);
  return classifier_->classify(reduced_.index(h)).value;
}

bool PlanningSession::vertex_passable(ReducedTree::Handle h) {
  if (tree_) return true;  // eps-obstacles never become vertices in exact mode
  return !classifier_->classify(reduced_.index(h)).obstacle;
}

AStarResult PlanningSession::astar(const NodeIndex& from, const NodeIndex& to) {
  const ReducedTree::Handle a = reduced_.find(from);
  const ReducedTree::Handle b = reduced_.find(to);
  if (a == ReducedTree::kNone || !reduced_.is_vertex(a) || b == ReducedTree::kNone || !reduced_.is_vertex(b)) {
    throw Error("astar: start and goal must be vertices of the reduced tree");
  }
  return astar_handles(a, b);
}

AStarResult PlanningSession::astar_handles(ReducedTree::Handle from, ReducedTree::Handle to) {
  AStarResult result;
  AStarStats& st = result.stats;
  if (from == to) {
    result.found = true;
    result.path = {reduced_.index(from)};
    return result;
  }

  if (records_.size() < reduced_.storage_size()) records_.resize(reduced_.storage_size());
  if (++stamp_ == 0) {
    for (auto& r : records_) r.stamp = 0;
    stamp_ = 1;
  }

  // The pairwise variant tests the popped vertex against every vertex.
  std::vector<ReducedTree::Handle> all_vertices;
  std::vector<NodeIndex> all_indices;  // contiguous copy for the scan
  if (config_.neighbors == NeighborMethod::kPairwise) {
    all_vertices = reduced_.vertex_handles(false);
    all_indices.reserve(all_vertices.size());
    for (ReducedTree::Handle v : all_vertices) all_indices.push_back(reduced_.index(v));
  }

  const NodeIndex& goal_idx = reduced_.index(to);
  struct Entry {
    double f;
    double h;
    double g;
    ReducedTree::Handle node;
  };
  // Ties on f and h go to the lower handle; handles are deterministic.
  auto worse = [](const Entry& x, const Entry& y) {
    if (x.f != y.f) return x.f > y.f;
    if (x.h != y.h) return x.h > y.h;
    return x.node > y.node;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> open(worse);

  const std::size_t sampled_before = classifier_ ? classifier_->sampled() : 0;
  Record& start = records_[from];
  start = Record{0.0, 0.0, ReducedTree::kNone, stamp_, 1};
  ++st.touched;
  const double h0 = center_distance(reduced_.index(from), goal_idx);
  open.push({h0, h0, 0.0, from});

  std::vector<ReducedTree::Handle> neighbors;
  while (!open.empty()) {
    const Entry top = open.top();
    open.pop();
    Record& rec = records_[top.node];
    if (rec.state == 2 || top.g > rec.g) continue;
    rec.state = 2;
    ++st.pops;
    if (top.node == to) {
      result.found = true;
      break;
    }
    ++st.neighbor_calls;
    neighbors.clear();
    if (config_.neighbors == NeighborMethod::kFast) {
      find_neighbors(reduced_, top.node, neighbors);
    } else {
      const NodeIndex& popped = reduced_.index(top.node);
      for (std::size_t i = 0; i < all_vertices.size(); ++i) {
        if (are_neighbors(popped, all_indices[i])) neighbors.push_back(all_vertices[i]);
      }
    }
    const NodeIndex& here = reduced_.index(top.node);
    for (ReducedTree::Handle nb : neighbors) {
      Record& r = records_[nb];
      if (r.stamp != stamp_) {
        r = Record{0.0, 0.0, ReducedTree::kNone, stamp_, 0};
        ++st.evaluations;
        ++st.touched;
        if (tree_) {
          r.value = reduced_.value(nb);
        } else {
          // Tags hold classifier id + 1 so repeat touches skip the lookup.
          std::int32_t id = reduced_.tag(nb) - 1;
          if (id < 0) {
            id = classifier_->classify_id(reduced_.index(nb));
            reduced_.set_tag(nb, id + 1);
          }
          const Classification& c = classifier_->entry(id);
          if (c.obstacle) {
            r.state = 2;
            continue;
          }
          r.value = c.value;
        }
      }
      if (r.state == 2) continue;
      const NodeIndex& there = reduced_.index(nb);
      const double g = rec.g + config_.cost.edge_cost(here, there, r.value);
      if (r.state == 1 && g >= r.g) continue;
      r.g = g;
      r.parent = top.node;
      r.state = 1;
      const double h = center_distance(there, goal_idx);
      open.push({g + h, h, g, nb});
    }
  }
  if (classifier_) st.fresh_samples = classifier_->sampled() - sampled_before;
  if (result.found) {
    result.cost = records_[to].g;
    for (ReducedTree::Handle at = to; at != ReducedTree::kNone; at = records_[at].parent) {
      result.path.push_back(reduced_.index(at));
    }
    std::reverse(result.path.begin(), result.path.end());
  }
  return result;
}

PlanResult PlanningSession::plan(std::span<const double> start, std::span<const double> goal) {
  const auto t0 = Clock::now();
  PlanResult result;
  PlanStats& st = result.stats;
  auto finish = [&](PlanStatus status, std::string message) {
    result.status = status;
    result.message = std::move(message);
    st.total_time = Clock::now() - t0;
    return result;
  };

  const NodeIndex start_node = locate(start);
  const NodeIndex goal_node = locate(goal);
  if (finest_is_obstacle(start_node)) return finish(PlanStatus::kStartOrGoalBlocked, "start lies in an obstacle");
  if (finest_is_obstacle(goal_node)) return finish(PlanStatus::kStartOrGoalBlocked, "goal lies in an obstacle");

  reduced_ = ReducedTree(dim_, depth_);
  path_ = {start_node};
  cover_.clear();
  cover_.add(start_node);
  on_path_ = {start_node};
  blocked_.clear();
  std::fill(closed_ids_.begin(), closed_ids_.end(), 0);
  std::fill(closed_nodes_.begin(), closed_nodes_.end(), 0);
  dead_.clear();
  const std::uint64_t budget = config_.resolved_budget(dim_, depth_);

  for (;;) {
    const NodeIndex current = path_.back();
    if (contains_point(current, goal)) break;
    if (st.iterations >= budget) {
      return finish(PlanStatus::kBudgetExceeded, fmt::format("iteration budget {} exhausted", budget));
    }
    ++st.iterations;

    const auto t_update = Clock::now();
    update(current);
    st.update_time += Clock::now() - t_update;
    st.max_vertices = std::max<std::uint64_t>(st.max_vertices, vertex_count_);
    if (config_.check_incremental) {
      ReducedTree fresh(dim_, depth_);
      update_reduced_tree(fresh, make_context(current));
      ++st.incremental_checks;
      if (!fresh.same_contents(reduced_)) ++st.incremental_mismatches;
    }

    const auto t_search = Clock::now();
    const ReducedTree::Handle from = reduced_.find(current);
    if (from == ReducedTree::kNone || !reduced_.is_vertex(from)) {
      throw Error("internal: current node " + to_string(current) + " is not a vertex of the reduced tree");
    }
    ReducedTree::Handle to = reduced_.root();
    while (reduced_.is_internal(to)) {
      const NodeIndex& at = reduced_.index(to);
      int slot = 0;
      for (int j = 0; j < dim_; ++j) {
        if (goal[j] >= at.center(j)) slot |= 1 << j;
      }
      to = reduced_.child(to, slot);
    }
    AStarResult found;
    if (reduced_.is_vertex(to)) found = astar_handles(from, to);
    st.search_time += Clock::now() - t_search;

    st.astar_pops += found.stats.pops;
    st.neighbor_calls += found.stats.neighbor_calls;
    st.evaluations += found.stats.evaluations;
    st.touched += found.stats.touched;
    st.sampled_nodes += found.stats.fresh_samples;
    if (found.stats.neighbor_calls != found.stats.pops - (found.found ? 1 : 0) ||
        found.stats.evaluations > found.stats.touched) {
      ++st.laziness_violations;
    }

    if (found.found) {
      const NodeIndex next = found.path.at(1);
      if (!are_neighbors(current, next)) {
        throw Error("internal: first step " + to_string(next) + " is not adjacent to " + to_string(current));
      }
      const bool finest = tree_ ? [&] {
        const auto at = tree_->locate(next);
        return at.idx == next && tree_->is_leaf(at.id);
      }()
                                : next.k == 0;
      if (!finest) throw Error("internal: first step " + to_string(next) + " is not at finest resolution");
      path_.push_back(next);
      cover_.add(next);
      on_path_.insert(next);
      set_closed(current, true);
      continue;
    }

    if (path_.size() == 1) {
      return finish(PlanStatus::kNoPath, "no path: every route from the start is exhausted");
    }
    if (found.stats.touched > 0) close_dead_region();
    ++st.backtracks;
    blocked_.insert(current);
    path_.pop_back();
    cover_.remove(current);
    on_path_.erase(current);
    set_closed(current, true);
    set_closed(path_.back(), false);
  }

  result.path = path_;
  for (std::size_t i = 1; i < path_.size(); ++i) {
    const double v = tree_ ? value(*tree_, path_[i]) : classifier_->classify(path_[i]).value;
    result.cost += config_.cost.edge_cost(path_[i - 1], path_[i], v);
  }
  return finish(PlanStatus::kSuccess, "");
}

PlanResult mspp_plan(const OccupancyTree& tree, std::span<const double> start, std::span<const double> goal,
                     const PlannerConfig& config) {
  PlanningSession session(tree, config);
  return session.plan(start, goal);
}

PlanResult mspp_plan(const ObstaclePredicate& pred, int depth, std::span<const double> start,
                     std::span<const double> goal, const PlannerConfig& config) {
  PlanningSession session(pred, depth, config);
  return session.plan(start, goal);
}

namespace {

template <class IsFinest, class IsObstacle>
FipCheck check_path(std::span<const NodeIndex> path, std::span<const double> start, std::span<const double> goal,
                    IsFinest is_finest, IsObstacle is_obstacle) {
  auto fail = [](FipViolation v, std::size_t pos, std::string msg) { return FipCheck{false, v, pos, std::move(msg)}; };
  if (path.empty()) return fail(FipViolation::kEndpoint, 0, "empty path");
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i > 0 && !are_neighbors(path[i - 1], path[i])) {
      return fail(FipViolation::kAdjacency, i,
                  to_string(path[i - 1]) + " and " + to_string(path[i]) + " do not share a face");
    }
    if (!is_finest(path[i])) return fail(FipViolation::kNotLeaf, i, to_string(path[i]) + " is not a leaf");
    if (is_obstacle(path[i])) return fail(FipViolation::kObstacle, i, to_string(path[i]) + " is an obstacle");
  }
  if (!start.empty() && !contains_point(path.front(), start)) {
    return fail(FipViolation::kEndpoint, 0, "first node does not contain the start");
  }
  if (!goal.empty() && !contains_point(path.back(), goal)) {
    return fail(FipViolation::kEndpoint, path.size() - 1, "last node does not contain the goal");
  }
  return {};
}

}  // namespace

FipCheck verify_fip(const OccupancyTree& tree, std::span<const NodeIndex> path, double eps,
                    std::span<const double> start, std::span<const double> goal) {
  return check_path(
      path, start, goal,
      [&](const NodeIndex& idx) {
        if (idx.dim != tree.dim() || !is_valid(idx, tree.depth())) return false;
        const auto at = tree.locate(idx);
        return at.idx == idx && tree.is_leaf(at.id);
      },
      [&](const NodeIndex& idx) { return is_eps_obstacle(tree, idx, eps); });
}

FipCheck verify_unit_path(const ObstaclePredicate& pred, int depth, std::span<const NodeIndex> path, double eps,
                          std::span<const double> start, std::span<const double> goal) {
  return check_path(
      path, start, goal,
      [&](const NodeIndex& idx) { return idx.k == 0 && idx.dim == pred.dim() && is_valid(idx, depth); },
      [&](const NodeIndex& idx) { return is_eps_obstacle_value(exact_value(idx, pred), idx.dim, idx.k, eps); });
}

}  // namespace mspp
