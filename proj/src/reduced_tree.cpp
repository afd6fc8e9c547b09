#include "mspp/reduced_tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mspp {
namespace {
constexpr double kNoValue = std::numeric_limits<double>::quiet_NaN();
}

ReducedTree::ReducedTree(int dim, int depth) : dim_(dim), depth_(depth), fanout_(1 << dim) {
  nodes_.push_back(Node{NodeIndex::root(dim, depth), kNone, State::kVertex, kNoValue});
}

void ReducedTree::split(Handle h) {
  if (nodes_[h].state == State::kInternal) return;
  if (nodes_[h].idx.k == 0) throw Error("cannot split unit cell " + to_string(nodes_[h].idx));
  Handle first;
  if (!free_blocks_.empty()) {
    first = free_blocks_.back();
    free_blocks_.pop_back();
    ++stats_.blocks_reused;
  } else {
    first = static_cast<Handle>(nodes_.size());
    nodes_.resize(nodes_.size() + fanout_);
    ++stats_.blocks_created;
  }
  const NodeIndex idx = nodes_[h].idx;
  for (int slot = 0; slot < fanout_; ++slot) {
    nodes_[first + slot] = Node{mspp::child(idx, slot), kNone, State::kVertex, kNoValue};
  }
  nodes_[h].first_child = first;
  nodes_[h].state = State::kInternal;
}

void ReducedTree::release_children(Handle h) {
  const Handle first = nodes_[h].first_child;
  if (first == kNone) return;
  for (int slot = 0; slot < fanout_; ++slot) release_children(first + slot);
  free_blocks_.push_back(first);
  nodes_[h].first_child = kNone;
}

void ReducedTree::make_vertex(Handle h) {
  release_children(h);
  nodes_[h].state = State::kVertex;
}

void ReducedTree::remove(Handle h) {
  release_children(h);
  nodes_[h].state = State::kRemoved;
}

ReducedTree::Handle ReducedTree::descend(const Coord2& point2, std::size_t* steps) const {
  Handle h = root();
  std::size_t visited = 1;
  auto at_point = [&](const NodeIndex& idx) {
    for (int j = 0; j < dim_; ++j) {
      if (idx.p2[j] != point2[j]) return false;
    }
    return true;
  };
  while (nodes_[h].state == State::kInternal && !at_point(nodes_[h].idx)) {
    h = child(h, child_slot_toward(nodes_[h].idx, point2));
    ++visited;
  }
  if (steps) *steps += visited;
  return h;
}

ReducedTree::Handle ReducedTree::find(const NodeIndex& idx) const {
  Handle h = root();
  if (!is_descendant_or_self(idx, nodes_[h].idx)) return kNone;
  while (nodes_[h].idx.k > idx.k) {
    if (nodes_[h].state != State::kInternal) return kNone;
    h = child(h, child_slot_toward(nodes_[h].idx, idx.p2));
  }
  return nodes_[h].idx == idx ? h : kNone;
}

std::vector<ReducedTree::Handle> ReducedTree::vertex_handles(bool canonical_order) const {
  std::vector<Handle> out;
  std::vector<Handle> stack{root()};
  while (!stack.empty()) {
    const Handle h = stack.back();
    stack.pop_back();
    if (nodes_[h].state == State::kVertex) {
      out.push_back(h);
    } else if (nodes_[h].state == State::kInternal) {
      for (int slot = 0; slot < fanout_; ++slot) stack.push_back(child(h, slot));
    }
  }
  if (canonical_order) {
    std::sort(out.begin(), out.end(), [&](Handle a, Handle b) { return nodes_[a].idx < nodes_[b].idx; });
  }
  return out;
}

std::vector<NodeIndex> ReducedTree::vertices() const {
  std::vector<NodeIndex> out;
  for (Handle h : vertex_handles()) out.push_back(nodes_[h].idx);
  return out;
}

std::size_t ReducedTree::live_node_count() const {
  std::size_t count = 0;
  std::vector<Handle> stack{root()};
  while (!stack.empty()) {
    const Handle h = stack.back();
    stack.pop_back();
    ++count;
    if (nodes_[h].state == State::kInternal) {
      for (int slot = 0; slot < fanout_; ++slot) stack.push_back(child(h, slot));
    }
  }
  return count;
}

bool ReducedTree::same_contents(const ReducedTree& other) const {
  if (dim_ != other.dim_ || depth_ != other.depth_) return false;
  std::vector<std::pair<Handle, Handle>> stack{{root(), other.root()}};
  while (!stack.empty()) {
    const auto [a, b] = stack.back();
    stack.pop_back();
    const Node& x = nodes_[a];
    const Node& y = other.nodes_[b];
    if (x.idx != y.idx || x.state != y.state) return false;
    const bool both_nan = std::isnan(x.value) && std::isnan(y.value);
    if (!both_nan && x.value != y.value) return false;
    if (x.state == State::kInternal) {
      for (int slot = 0; slot < fanout_; ++slot) stack.emplace_back(child(a, slot), other.child(b, slot));
    }
  }
  return true;
}

}  // namespace mspp
