#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mspp/grid_world.hpp"
#include "mspp/node_index.hpp"

namespace mspp {

struct BuildOptions {
  // Replace subtrees whose cells are all free or all obstacle by one leaf.
  bool collapse_uniform = true;
};

// Multiscale obstacle map: a 2^d-ary tree whose node values are the obstacle
// volume fraction of the node's hypercube. Immutable once built.
class OccupancyTree {
 public:
  using NodeId = std::int32_t;

  struct Located {
    NodeId id;
    NodeIndex idx;
  };

  int dim() const { return dim_; }
  int depth() const { return depth_; }
  NodeId root() const { return 0; }
  NodeIndex root_index() const { return NodeIndex::root(dim_, depth_); }
  std::size_t node_count() const { return nodes_.size(); }

  bool is_leaf(NodeId id) const { return nodes_[id].first_child < 0; }
  NodeId child(NodeId id, int slot) const { return nodes_[id].first_child + slot; }
  double value(NodeId id) const { return nodes_[id].value; }

  // Deepest stored node that is idx or one of its ancestors. Throws Error when
  // idx is not a valid cell of this world.
  Located locate(const NodeIndex& idx) const;
  // Deepest stored node whose half-open hypercube contains the point.
  Located locate_point(std::span<const double> point) const;

 private:
  friend OccupancyTree build_from_grid(const GridWorld& world, BuildOptions options);

  struct Node {
    double value = 0.0;
    NodeId first_child = -1;
  };

  int dim_ = 0;
  int depth_ = 0;
  std::vector<Node> nodes_;
};

OccupancyTree build_from_grid(const GridWorld& world, BuildOptions options = {});

// Obstacle probability of any cell of the world; descendants of a collapsed
// leaf report the leaf's (uniform) value.
double value(const OccupancyTree& tree, const NodeIndex& idx);

// V >= 1 - 2^{-dk} * eps
bool is_eps_obstacle_value(double v, int dim, int k, double eps);
bool is_eps_obstacle(const OccupancyTree& tree, const NodeIndex& idx, double eps);

NodeIndex leaf_at(const OccupancyTree& tree, std::span<const double> point);

}  // namespace mspp
