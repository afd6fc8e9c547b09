#include "mspp/neighbors.hpp"

#include <algorithm>
#include <cstdlib>

namespace mspp {

std::vector<NeighborCandidate> neighbor_candidates(const NodeIndex& idx, int depth) {
  std::vector<NeighborCandidate> out;
  out.reserve(2 * idx.dim);
  const std::int64_t world2 = std::int64_t{2} << depth;
  const std::int64_t step2 = idx.side() * 2;
  for (int ord = 0; ord < 2 * idx.dim; ++ord) {
    const Direction dir = Direction::from_ordinal(idx.dim, ord);
    NeighborCandidate c{dir, idx.p2, true};
    const std::int64_t moved = std::int64_t{idx.p2[dir.axis]} + dir.sign * step2;
    c.in_bounds = moved > 0 && moved < world2;
    c.point2[dir.axis] = static_cast<std::int32_t>(moved);
    out.push_back(c);
  }
  return out;
}

ReducedTree::Handle find_containing_node(const ReducedTree& tree, const Coord2& point2, NeighborStats* stats) {
  const NodeIndex& root = tree.index(tree.root());
  if (!contains_strictly(root, point2)) throw Error("out of bounds");
  if (stats) ++stats->lookups;
  return tree.descend(point2, stats ? &stats->descent_steps : nullptr);
}

void add_leaf_in_dir(const ReducedTree& tree, ReducedTree::Handle node, Direction b,
                     std::vector<ReducedTree::Handle>& out) {
  const int fanout = 1 << tree.dim();
  const int want = b.sign > 0 ? 1 : 0;
  for (int slot = 0; slot < fanout; ++slot) {
    if (((slot >> b.axis) & 1) != want) continue;
    const ReducedTree::Handle c = tree.child(node, slot);
    switch (tree.state(c)) {
      case ReducedTree::State::kVertex:
        out.push_back(c);
        break;
      case ReducedTree::State::kInternal:
        add_leaf_in_dir(tree, c, b, out);
        break;
      case ReducedTree::State::kRemoved:
        break;
    }
  }
}

void find_neighbors(const ReducedTree& tree, ReducedTree::Handle vertex, std::vector<ReducedTree::Handle>& out,
                    NeighborStats* stats) {
  if (!tree.is_vertex(vertex)) throw Error("find_neighbors: " + to_string(tree.index(vertex)) + " is not a vertex");
  const NodeIndex& idx = tree.index(vertex);
  const std::int64_t world2 = std::int64_t{2} << tree.depth();
  const std::int64_t step2 = idx.side() * 2;
  for (int ord = 0; ord < 2 * idx.dim; ++ord) {
    const Direction dir = Direction::from_ordinal(idx.dim, ord);
    const std::int64_t moved = std::int64_t{idx.p2[dir.axis]} + dir.sign * step2;
    if (moved <= 0 || moved >= world2) continue;
    Coord2 point2 = idx.p2;
    point2[dir.axis] = static_cast<std::int32_t>(moved);
    const ReducedTree::Handle found = find_containing_node(tree, point2, stats);
    switch (tree.state(found)) {
      case ReducedTree::State::kVertex:
        out.push_back(found);
        break;
      case ReducedTree::State::kInternal:
        add_leaf_in_dir(tree, found, dir.opposite(), out);
        break;
      case ReducedTree::State::kRemoved:
        break;
    }
  }
}

std::vector<ReducedTree::Handle> find_neighbors(const ReducedTree& tree, ReducedTree::Handle vertex,
                                                NeighborStats* stats) {
  std::vector<ReducedTree::Handle> out;
  find_neighbors(tree, vertex, out, stats);
  return out;
}

std::vector<NodeIndex> find_neighbors(const ReducedTree& tree, const NodeIndex& idx, NeighborStats* stats) {
  const ReducedTree::Handle h = tree.find(idx);
  if (h == ReducedTree::kNone || !tree.is_vertex(h)) {
    throw Error("find_neighbors: " + to_string(idx) + " is not a vertex of the reduced tree");
  }
  std::vector<NodeIndex> out;
  for (ReducedTree::Handle n : find_neighbors(tree, h, stats)) out.push_back(tree.index(n));
  return out;
}

EdgeList all_neighbor_pairs(const ReducedTree& tree, NeighborStats* stats) {
  EdgeList edges;
  const std::int64_t world2 = std::int64_t{2} << tree.depth();
  // vertex_handles() is already ordered by (k, p2): smallest cells first.
  for (ReducedTree::Handle v : tree.vertex_handles()) {
    const NodeIndex& idx = tree.index(v);
    const std::int64_t step2 = idx.side() * 2;
    for (int ord = 0; ord < 2 * idx.dim; ++ord) {
      const Direction dir = Direction::from_ordinal(idx.dim, ord);
      const std::int64_t moved = std::int64_t{idx.p2[dir.axis]} + dir.sign * step2;
      if (moved <= 0 || moved >= world2) continue;
      Coord2 point2 = idx.p2;
      point2[dir.axis] = static_cast<std::int32_t>(moved);
      const ReducedTree::Handle found = find_containing_node(tree, point2, stats);
      // Internal results mean smaller neighbors, which were paired earlier.
      if (!tree.is_vertex(found)) continue;
      const NodeIndex& other = tree.index(found);
      if (other.k == idx.k) {
        if (idx < other) edges.emplace_back(idx, other);
      } else {
        edges.emplace_back(idx, other);
      }
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

EdgeList all_neighbor_pairs_pairwise(const ReducedTree& tree) {
  const std::vector<NodeIndex> verts = tree.vertices();
  EdgeList edges;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    for (std::size_t j = i + 1; j < verts.size(); ++j) {
      if (are_neighbors(verts[i], verts[j])) edges.emplace_back(verts[i], verts[j]);
    }
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

}  // namespace mspp
