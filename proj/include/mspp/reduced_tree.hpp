#pragma once

// The pruned per-iteration tree T_i. Its vertex leaves are the vertices of
// the reduced graph; removed leaves mark regions that are obstacles (or
// otherwise closed) for the current iteration. Child blocks are recycled
// through a free list so consecutive iterations reuse storage.

#include <cstdint>
#include <span>
#include <vector>

#include "mspp/node_index.hpp"

namespace mspp {

class ReducedTree {
 public:
  using Handle = std::int32_t;
  static constexpr Handle kNone = -1;

  enum class State : std::uint8_t { kVertex, kInternal, kRemoved };

  struct Stats {
    std::size_t blocks_created = 0;  // fresh child blocks (storage growth)
    std::size_t blocks_reused = 0;   // child blocks taken from the free list
  };

  ReducedTree() = default;
  ReducedTree(int dim, int depth);

  int dim() const { return dim_; }
  int depth() const { return depth_; }
  Handle root() const { return 0; }

  const NodeIndex& index(Handle h) const { return nodes_[h].idx; }
  State state(Handle h) const { return nodes_[h].state; }
  bool is_vertex(Handle h) const { return nodes_[h].state == State::kVertex; }
  bool is_internal(Handle h) const { return nodes_[h].state == State::kInternal; }
  bool is_removed(Handle h) const { return nodes_[h].state == State::kRemoved; }
  Handle child(Handle h, int slot) const { return nodes_[h].first_child + slot; }

  // Per-node obstacle value; NaN when the node carries none.
  double value(Handle h) const { return nodes_[h].value; }
  void set_value(Handle h, double v) { nodes_[h].value = v; }
  // Caller-owned scratch word, zero when the node is created. It survives
  // make_vertex and is not compared by same_contents.
  std::int32_t tag(Handle h) const { return nodes_[h].tag; }
  void set_tag(Handle h, std::int32_t t) { nodes_[h].tag = t; }

  // Turns a leaf into an internal node whose 2^d children are vertices.
  // No-op on internal nodes.
  void split(Handle h);
  // Drops all descendants and makes h a vertex.
  void make_vertex(Handle h);
  // Drops all descendants and marks h removed.
  void remove(Handle h);

  // Descends from the root toward a doubled point; stops at a leaf or at the
  // node centered exactly at the point. Counts visited nodes into *steps.
  Handle descend(const Coord2& point2, std::size_t* steps = nullptr) const;
  // Handle of the node with exactly this index, or kNone.
  Handle find(const NodeIndex& idx) const;

  // Vertex leaves in canonical (k, p2) order.
  std::vector<NodeIndex> vertices() const;
  std::vector<Handle> vertex_handles(bool canonical_order = true) const;
  std::size_t live_node_count() const;
  std::size_t storage_size() const { return nodes_.size(); }
  const Stats& stats() const { return stats_; }

  // Same live structure, states, indices and values (NaN == NaN).
  bool same_contents(const ReducedTree& other) const;

 private:
  struct Node {
    NodeIndex idx;
    Handle first_child = kNone;
    State state = State::kVertex;
    double value = 0.0;
    std::int32_t tag = 0;
  };

  void release_children(Handle h);

  int dim_ = 0;
  int depth_ = 0;
  int fanout_ = 0;
  std::vector<Node> nodes_;
  std::vector<Handle> free_blocks_;
  Stats stats_;
};

}  // namespace mspp
