#pragma once

// Vertex selection for the reduced graph G_i: a lockstep descent over the
// occupancy tree T (or over the bare dyadic partition when planning from a
// predicate) that refines cells near the current node and keeps far cells
// coarse. The result is written into a ReducedTree in place, reusing the
// previous iteration's nodes.

#include <functional>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "mspp/node_index.hpp"
#include "mspp/occupancy_tree.hpp"
#include "mspp/reduced_tree.hpp"

namespace mspp {

struct WindowParams {
  double alpha = 1.0;
};

// ||p - p_i||_2 - (sqrt(d)/2) 2^{k_i} >= alpha 2^k, evaluated by squaring
// both sides over doubled integer coordinates.
bool window_far(const NodeIndex& node, const NodeIndex& current, double alpha);

// sqrt(d)/2, the threshold below which a coarse cell adjacent to a unit
// current node can pass the window test.
double min_window_alpha(int dim);
// Whether alpha keeps every cell adjacent to a unit current node from being
// far. For d >= 2 alpha = sqrt(d)/2 already suffices; d = 1 ties at 1/2 and
// needs alpha > 1/2.
bool window_alpha_admissible(int dim, double alpha);

// True iff no path node's center lies strictly inside H(idx). Linear scan.
bool does_not_contain_path(const NodeIndex& idx, std::span<const NodeIndex> path);

// Incremental form of does_not_contain_path: every path node registers
// itself with all its ancestors. A path node's center can only be strictly
// inside a dyadic cell that is that node or one of its ancestors.
class PathCover {
 public:
  // With dim given and a small world the counts live in a flat table.
  explicit PathCover(int depth = 0, int dim = 0);
  void add(const NodeIndex& idx);
  void remove(const NodeIndex& idx);
  bool contains_path(const NodeIndex& idx) const {
    return dense_.empty() ? counts_.contains(idx) : dense_[numbering_.slot(idx)] != 0;
  }
  void clear();

 private:
  int depth_;
  std::unordered_map<NodeIndex, int, NodeIndexHash> counts_;
  DenseNodeNumbering numbering_;
  std::vector<std::int32_t> dense_;
};

struct UpdateContext {
  // Null in predicate mode: the descent then stops only on the window rule
  // or at unit cells, and nodes carry no value.
  const OccupancyTree* tree = nullptr;
  NodeIndex current;
  double eps = 0.5;
  WindowParams window;
  const PathCover* path = nullptr;
  // Closed nodes are dropped together with their subtree: blocked cells,
  // visited path nodes and dead regions. The predicate is asked at every
  // visited node.
  std::function<bool(const NodeIndex&)> closed;
  // Flag-table forms of the same, nonzero meaning closed. Tree mode indexes
  // by occupancy-tree node id; predicate mode by `numbering`.
  const std::vector<std::uint8_t>* closed_tree_nodes = nullptr;
  const std::vector<std::uint8_t>* closed_nodes = nullptr;
  const DenseNodeNumbering* numbering = nullptr;
  // When set, receives every node at which the stopping rule fired.
  std::vector<NodeIndex>* stop_trace = nullptr;
};

// Returns the number of vertices after the update.
std::size_t update_reduced_tree(ReducedTree& reduced, const UpdateContext& ctx);

}  // namespace mspp
