#include "mspp/reduced_graph.hpp"

#include <algorithm>
#include <cmath>

namespace mspp {

bool window_far(const NodeIndex& node, const NodeIndex& current, double alpha) {
  // With A = 4||p - p_i||^2, a = alpha 2^{k+1}, b = sqrt(d) 2^{k_i}, the test
  // is sqrt(A) >= a + b, i.e. A - a^2 - b^2 >= 2ab with the left side >= 0.
  const long double dist2 = static_cast<long double>(center_dist2_doubled(node, current));
  // Power-of-two scaling by multiplication is exact and avoids ldexpl.
  auto pow2 = [](int e) { return e < 63 ? static_cast<long double>(std::uint64_t{1} << e) : std::ldexp(1.0L, e); };
  const long double b2 = static_cast<long double>(node.dim) * pow2(2 * current.k);
  const long double a2 = static_cast<long double>(alpha) * alpha * pow2(2 * node.k + 2);
  const long double lhs = dist2 - a2 - b2;
  if (lhs < 0) return false;
  return lhs * lhs >= 4.0L * a2 * b2;
}

double min_window_alpha(int dim) { return 0.5 * std::sqrt(static_cast<double>(dim)); }

bool window_alpha_admissible(int dim, double alpha) {
  if (dim == 1) return alpha > 0.5;
  return alpha >= min_window_alpha(dim) * (1.0 - 1e-12);
}

bool does_not_contain_path(const NodeIndex& idx, std::span<const NodeIndex> path) {
  for (const NodeIndex& node : path) {
    if (contains_strictly(idx, node.p2)) return false;
  }
  return true;
}

namespace {

// Flat path-cover tables cover worlds of up to 2^22 unit cells.
constexpr int kMaxDenseCoverBits = 22;

}  // namespace

PathCover::PathCover(int depth, int dim) : depth_(depth) {
  if (dim < 1 || dim * depth > kMaxDenseCoverBits) return;
  numbering_ = DenseNodeNumbering(dim, depth);
  dense_.assign(numbering_.size(), 0);
}

void PathCover::clear() {
  counts_.clear();
  std::fill(dense_.begin(), dense_.end(), 0);
}

void PathCover::add(const NodeIndex& idx) {
  NodeIndex at = idx;
  for (;;) {
    if (dense_.empty()) {
      ++counts_[at];
    } else {
      ++dense_[numbering_.slot(at)];
    }
    if (at.k >= depth_) break;
    at = parent(at);
  }
}

void PathCover::remove(const NodeIndex& idx) {
  NodeIndex at = idx;
  for (;;) {
    if (dense_.empty()) {
      auto it = counts_.find(at);
      if (it != counts_.end() && --it->second == 0) counts_.erase(it);
    } else if (auto& c = dense_[numbering_.slot(at)]; c > 0) {
      --c;
    }
    if (at.k >= depth_) break;
    at = parent(at);
  }
}

namespace {

struct Updater {
  ReducedTree& reduced;
  const UpdateContext& ctx;
  int fanout;
  std::size_t vertices = 0;

  bool contains_path(const NodeIndex& idx) const { return ctx.path && ctx.path->contains_path(idx); }

  bool is_closed(const NodeIndex& idx, OccupancyTree::NodeId t) const {
    if (ctx.closed_tree_nodes && ctx.tree && (*ctx.closed_tree_nodes)[t] != 0) return true;
    if (ctx.closed_nodes && ctx.numbering && (*ctx.closed_nodes)[ctx.numbering->slot(idx)] != 0) return true;
    return ctx.closed && ctx.closed(idx);
  }

  void visit(ReducedTree::Handle h, OccupancyTree::NodeId t) {
    const NodeIndex idx = reduced.index(h);
    const bool tree_leaf = ctx.tree ? ctx.tree->is_leaf(t) : idx.k == 0;
    const bool closed_node = is_closed(idx, t);
    // T-leaves stop the descent even when they hold path nodes.
    const bool stop =
        closed_node || tree_leaf || (window_far(idx, ctx.current, ctx.window.alpha) && !contains_path(idx));
    if (stop) {
      if (ctx.stop_trace) ctx.stop_trace->push_back(idx);
      bool drop = closed_node;
      if (ctx.tree) {
        const double v = ctx.tree->value(t);
        drop = drop || is_eps_obstacle_value(v, idx.dim, idx.k, ctx.eps);
        reduced.set_value(h, v);
      }
      if (drop) {
        reduced.remove(h);
      } else {
        reduced.make_vertex(h);
        ++vertices;
      }
      return;
    }
    reduced.split(h);
    if (ctx.tree) reduced.set_value(h, ctx.tree->value(t));
    for (int slot = 0; slot < fanout; ++slot) {
      visit(reduced.child(h, slot), ctx.tree ? ctx.tree->child(t, slot) : 0);
    }
  }
};

}  // namespace

std::size_t update_reduced_tree(ReducedTree& reduced, const UpdateContext& ctx) {
  if (!is_valid(ctx.current, reduced.depth()) || ctx.current.dim != reduced.dim()) {
    throw Error("current node " + to_string(ctx.current) + " is not inside the world");
  }
  if (ctx.tree && (ctx.tree->dim() != reduced.dim() || ctx.tree->depth() != reduced.depth())) {
    throw Error("reduced tree and occupancy tree describe different worlds");
  }
  Updater updater{reduced, ctx, 1 << reduced.dim()};
  updater.visit(reduced.root(), 0);
  return updater.vertices;
}

}  // namespace mspp
