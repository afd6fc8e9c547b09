#pragma once

// Face-adjacency between dyadic cells and neighbor enumeration over a
// ReducedTree.
//
// Two cells are neighbors when their hypercubes share a (d-1)-dimensional
// face: ||p_a - p_b||_inf == 2^{k_a-1} + 2^{k_b-1}, attained on exactly one
// axis. In doubled coordinates the bound is 2^{k_a} + 2^{k_b}.

#include <cstddef>
#include <cstdlib>
#include <utility>
#include <vector>

#include "mspp/node_index.hpp"
#include "mspp/reduced_tree.hpp"

namespace mspp {

inline bool are_neighbors(const NodeIndex& a, const NodeIndex& b) {
  const std::int64_t bound = a.side() + b.side();
  int attained = 0;
  for (int j = 0; j < a.dim; ++j) {
    const std::int64_t delta = std::llabs(std::int64_t{a.p2[j]} - b.p2[j]);
    if (delta > bound) return false;
    if (delta == bound) ++attained;
  }
  return attained == 1;
}

struct NeighborCandidate {
  Direction dir;
  Coord2 point2;  // p + 2^k b, doubled
  bool in_bounds;
};

// The 2d same-size candidate centers in canonical Direction order. Candidates
// outside the root hypercube are kept and flagged.
std::vector<NeighborCandidate> neighbor_candidates(const NodeIndex& idx, int depth);

struct NeighborStats {
  std::size_t descent_steps = 0;
  std::size_t lookups = 0;
};

// Descends to the leaf containing the point, or to the node centered at it.
// Throws Error("out of bounds") for points outside the root.
ReducedTree::Handle find_containing_node(const ReducedTree& tree, const Coord2& point2,
                                         NeighborStats* stats = nullptr);

// Appends the vertex leaves below `node` that touch its face in direction b.
void add_leaf_in_dir(const ReducedTree& tree, ReducedTree::Handle node, Direction b,
                     std::vector<ReducedTree::Handle>& out);

// All vertex neighbors of a vertex, in candidate order.
// Appends to `out` instead of allocating.
void find_neighbors(const ReducedTree& tree, ReducedTree::Handle vertex, std::vector<ReducedTree::Handle>& out,
                    NeighborStats* stats = nullptr);
std::vector<ReducedTree::Handle> find_neighbors(const ReducedTree& tree, ReducedTree::Handle vertex,
                                                NeighborStats* stats = nullptr);
std::vector<NodeIndex> find_neighbors(const ReducedTree& tree, const NodeIndex& idx,
                                      NeighborStats* stats = nullptr);

using EdgeList = std::vector<std::pair<NodeIndex, NodeIndex>>;

// Every neighboring vertex pair, each once as (smaller, larger) in canonical
// order, sorted. Vertices are processed from smallest to largest scale and
// only same-size or larger neighbors are looked up.
EdgeList all_neighbor_pairs(const ReducedTree& tree, NeighborStats* stats = nullptr);

// O(|V|^2) pairwise scan with are_neighbors; same output contract.
EdgeList all_neighbor_pairs_pairwise(const ReducedTree& tree);

}  // namespace mspp
