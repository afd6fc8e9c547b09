#include "mspp/occupancy_tree.hpp"

#include <cmath>

#include <fmt/format.h>

namespace mspp {
namespace {

// Obstacle counts per scale. levels[k] holds one count per cell of side 2^k,
// laid out like a grid of depth (depth - k).
struct CountPyramid {
  std::vector<std::vector<std::uint64_t>> levels;

  CountPyramid(const GridWorld& world) {
    const int dim = world.dim();
    const int depth = world.depth();
    levels.resize(depth + 1);
    levels[0].assign(world.cells().begin(), world.cells().end());
    for (int k = 1; k <= depth; ++k) {
      const int child_bits = depth - k + 1;
      const int parent_bits = depth - k;
      const std::uint64_t child_mask = (std::uint64_t{1} << child_bits) - 1;
      const auto& below = levels[k - 1];
      auto& here = levels[k];
      here.assign(std::size_t{1} << (dim * parent_bits), 0);
      for (std::size_t i = 0; i < below.size(); ++i) {
        if (below[i] == 0) continue;
        std::size_t parent = 0;
        for (int j = dim - 1; j >= 0; --j) {
          const std::uint64_t c = (i >> (child_bits * j)) & child_mask;
          parent = (parent << parent_bits) | (c >> 1);
        }
        here[parent] += below[i];
      }
    }
  }
};

}  // namespace

OccupancyTree build_from_grid(const GridWorld& world, BuildOptions options) {
  if (world.dim() < 1 || world.cell_count() != (std::size_t{1} << (world.dim() * world.depth()))) {
    throw Error("malformed grid: cell count does not match 2^(d*depth)");
  }
  const int dim = world.dim();
  const int depth = world.depth();
  const int fanout = 1 << dim;
  const CountPyramid pyramid(world);

  OccupancyTree tree;
  tree.dim_ = dim;
  tree.depth_ = depth;
  tree.nodes_.reserve(1024);

  std::array<std::uint64_t, kMaxDim> coords{};
  // Recursion depth is bounded by the tree depth.
  auto fill = [&](auto&& self, OccupancyTree::NodeId id, int k, const std::array<std::uint64_t, kMaxDim>& c) -> void {
    const int bits = depth - k;
    std::size_t linear = 0;
    for (int j = dim - 1; j >= 0; --j) linear = (linear << bits) | static_cast<std::size_t>(c[j]);
    const std::uint64_t count = pyramid.levels[k][linear];
    const std::uint64_t full = std::uint64_t{1} << (dim * k);
    tree.nodes_[id].value = static_cast<double>(count) / static_cast<double>(full);
    const bool uniform = count == 0 || count == full;
    if (k == 0 || (uniform && options.collapse_uniform)) return;

    const auto first = static_cast<OccupancyTree::NodeId>(tree.nodes_.size());
    tree.nodes_.resize(tree.nodes_.size() + fanout);
    tree.nodes_[id].first_child = first;
    for (int slot = 0; slot < fanout; ++slot) {
      std::array<std::uint64_t, kMaxDim> cc{};
      for (int j = 0; j < dim; ++j) cc[j] = 2 * c[j] + ((slot >> j) & 1);
      self(self, first + slot, k - 1, cc);
    }
  };
  tree.nodes_.emplace_back();
  fill(fill, 0, depth, coords);
  return tree;
}

OccupancyTree::Located OccupancyTree::locate(const NodeIndex& idx) const {
  if (idx.dim != dim_ || !is_valid(idx, depth_)) {
    throw Error("index " + to_string(idx) + " is not a cell of this world");
  }
  Located at{root(), root_index()};
  while (at.idx.k > idx.k && !is_leaf(at.id)) {
    const int slot = child_slot_toward(at.idx, idx.p2);
    at.id = child(at.id, slot);
    at.idx = mspp::child(at.idx, slot);
  }
  return at;
}

OccupancyTree::Located OccupancyTree::locate_point(std::span<const double> point) const {
  if (static_cast<int>(point.size()) != dim_) {
    throw Error(fmt::format("point has {} coordinates, world has {}", point.size(), dim_));
  }
  const double extent = std::ldexp(1.0, depth_);
  for (int j = 0; j < dim_; ++j) {
    if (!(point[j] >= 0.0 && point[j] < extent)) {
      throw Error(fmt::format("point coordinate {} on axis {} is outside the world [0, {})", point[j], j, extent));
    }
  }
  Located at{root(), root_index()};
  while (!is_leaf(at.id)) {
    int slot = 0;
    for (int j = 0; j < dim_; ++j) {
      if (point[j] >= at.idx.center(j)) slot |= 1 << j;
    }
    at.id = child(at.id, slot);
    at.idx = mspp::child(at.idx, slot);
  }
  return at;
}

double value(const OccupancyTree& tree, const NodeIndex& idx) {
  return tree.value(tree.locate(idx).id);
}

bool is_eps_obstacle_value(double v, int dim, int k, double eps) {
  return v >= 1.0 - std::ldexp(eps, -dim * k);
}

bool is_eps_obstacle(const OccupancyTree& tree, const NodeIndex& idx, double eps) {
  return is_eps_obstacle_value(value(tree, idx), tree.dim(), idx.k, eps);
}

NodeIndex leaf_at(const OccupancyTree& tree, std::span<const double> point) {
  return tree.locate_point(point).idx;
}

}  // namespace mspp
