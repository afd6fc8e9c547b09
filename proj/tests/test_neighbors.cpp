#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "mspp/neighbors.hpp"
#include "test_util.hpp"

using namespace mspp;
using mspp::testing::faces_touch;
using mspp::testing::random_node;
using mspp::testing::random_reduced_tree;

namespace {

NodeIndex cell(int k, std::vector<double> center) {
  NodeIndex idx;
  idx.k = k;
  idx.dim = static_cast<int>(center.size());
  for (int j = 0; j < idx.dim; ++j) idx.p2[j] = static_cast<std::int32_t>(center[j] * 2);
  return idx;
}

Coord2 point2(std::vector<double> p) {
  Coord2 c{};
  for (std::size_t j = 0; j < p.size(); ++j) c[j] = static_cast<std::int32_t>(p[j] * 2);
  return c;
}

ReducedTree uniform_tree(int dim, int depth) {
  ReducedTree t(dim, depth);
  std::vector<ReducedTree::Handle> stack{t.root()};
  while (!stack.empty()) {
    auto h = stack.back();
    stack.pop_back();
    if (t.index(h).k == 0) continue;
    t.split(h);
    for (int s = 0; s < (1 << dim); ++s) stack.push_back(t.child(h, s));
  }
  return t;
}

std::vector<NodeIndex> sorted(std::vector<NodeIndex> v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::vector<NodeIndex> brute_neighbors(const ReducedTree& t, const NodeIndex& q) {
  std::vector<NodeIndex> out;
  for (const auto& v : t.vertices()) {
    if (are_neighbors(q, v)) out.push_back(v);
  }
  return out;
}

}  // namespace

TEST(AreNeighbors, Examples) {
  EXPECT_TRUE(are_neighbors(cell(0, {0.5, 0.5}), cell(0, {1.5, 0.5})));
  EXPECT_FALSE(are_neighbors(cell(0, {0.5, 0.5}), cell(0, {1.5, 1.5})));
  EXPECT_TRUE(are_neighbors(cell(1, {1, 1}), cell(0, {2.5, 0.5})));
  EXPECT_TRUE(faces_touch(cell(1, {1, 1}), cell(0, {2.5, 0.5})));
  EXPECT_FALSE(are_neighbors(cell(0, {0.5, 0.5}), cell(0, {0.5, 0.5})));
  EXPECT_FALSE(are_neighbors(cell(0, {0.5, 0.5}), cell(0, {2.5, 0.5})));
  // Corner contact only.
  EXPECT_FALSE(are_neighbors(cell(1, {1, 1}), cell(0, {2.5, 2.5})));
}

TEST(AreNeighbors, MatchesFaceSharingAndIsSymmetric) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20000; ++i) {
    const int dim = 1 + i % 4;
    // Small worlds make touching pairs common.
    const NodeIndex a = random_node(dim, 3, rng);
    const NodeIndex b = random_node(dim, 3, rng);
    ASSERT_EQ(are_neighbors(a, b), faces_touch(a, b)) << to_string(a) << " " << to_string(b);
    ASSERT_EQ(are_neighbors(a, b), are_neighbors(b, a));
  }
}

TEST(NeighborCandidates, SquareAtScaleOne) {
  const auto c = neighbor_candidates(cell(1, {1, 1}), 1);
  ASSERT_EQ(c.size(), 4u);
  EXPECT_EQ(c[0].point2, point2({3, 1}));
  EXPECT_EQ(c[1].point2, point2({1, 3}));
  EXPECT_EQ(c[2].point2, point2({-1, 1}));
  EXPECT_EQ(c[3].point2, point2({1, -1}));
  for (const auto& x : c) EXPECT_FALSE(x.in_bounds);
  const auto d = neighbor_candidates(cell(1, {1, 1}), 2);
  EXPECT_TRUE(d[0].in_bounds);
  EXPECT_TRUE(d[1].in_bounds);
  EXPECT_FALSE(d[2].in_bounds);
  EXPECT_FALSE(d[3].in_bounds);
}

TEST(NeighborCandidates, OneDimension) {
  const auto c = neighbor_candidates(cell(0, {0.5}), 3);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].point2, point2({1.5}));
  EXPECT_TRUE(c[0].in_bounds);
  EXPECT_EQ(c[1].point2, point2({-0.5}));
  EXPECT_FALSE(c[1].in_bounds);
}

TEST(NeighborCandidates, DifferOnOneAxisBySide) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const int dim = 1 + i % 5;
    const NodeIndex idx = random_node(dim, 4, rng);
    const auto cands = neighbor_candidates(idx, 4);
    ASSERT_EQ(static_cast<int>(cands.size()), 2 * dim);
    for (const auto& c : cands) {
      int changed = 0;
      for (int j = 0; j < dim; ++j) {
        const std::int64_t delta = std::llabs(std::int64_t{c.point2[j]} - idx.p2[j]);
        if (delta != 0) {
          ++changed;
          EXPECT_EQ(delta, 2 * idx.side());
        }
      }
      EXPECT_EQ(changed, 1);
    }
  }
}

TEST(FindContainingNode, Descent) {
  ReducedTree t(2, 2);
  t.split(t.root());
  const auto lower_left = t.child(t.root(), 0);
  t.split(lower_left);
  // Exact center of an existing leaf.
  EXPECT_EQ(t.index(find_containing_node(t, point2({1.5, 0.5}))), cell(0, {1.5, 0.5}));
  // Candidate inside a larger leaf stops at that leaf.
  EXPECT_EQ(t.index(find_containing_node(t, point2({2.5, 0.5}))), cell(1, {3, 1}));
  // Candidate whose same-size node is subdivided stops at that internal node.
  NeighborStats stats;
  const auto h = find_containing_node(t, point2({1, 1}), &stats);
  EXPECT_EQ(h, lower_left);
  EXPECT_TRUE(t.is_internal(h));
  EXPECT_EQ(stats.descent_steps, 2u);
  EXPECT_THROW(find_containing_node(t, point2({-0.5, 0.5})), Error);
  EXPECT_THROW(find_containing_node(t, point2({4.5, 0.5})), Error);
}

TEST(AddLeafInDir, OneLevelFace) {
  ReducedTree t(2, 1);
  t.split(t.root());
  std::vector<ReducedTree::Handle> out;
  add_leaf_in_dir(t, t.root(), Direction{0, -1}, out);
  std::vector<NodeIndex> got;
  for (auto h : out) got.push_back(t.index(h));
  EXPECT_EQ(sorted(got), sorted({cell(0, {0.5, 0.5}), cell(0, {0.5, 1.5})}));
}

TEST(AddLeafInDir, OneDimensionRightChild) {
  ReducedTree t(1, 1);
  t.split(t.root());
  std::vector<ReducedTree::Handle> out;
  add_leaf_in_dir(t, t.root(), Direction{0, 1}, out);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(t.index(out[0]), cell(0, {1.5}));
}

TEST(AddLeafInDir, UnbalancedSubtreeMatchesBruteForce) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    // The subtree lives in the right half; the query is the left half.
    ReducedTree t(2, 3);
    t.split(t.root());
    const auto sub = t.child(t.root(), 1);  // center (6,2), k=2
    std::vector<ReducedTree::Handle> stack{sub};
    std::bernoulli_distribution coin(0.6);
    while (!stack.empty()) {
      auto h = stack.back();
      stack.pop_back();
      if (t.index(h).k == 0 || !coin(rng)) continue;
      t.split(h);
      for (int s = 0; s < 4; ++s) stack.push_back(t.child(h, s));
    }
    const NodeIndex query = cell(2, {2, 2});
    std::vector<ReducedTree::Handle> out;
    if (t.is_internal(sub)) add_leaf_in_dir(t, sub, Direction{0, -1}, out);
    std::vector<NodeIndex> got;
    for (auto h : out) got.push_back(t.index(h));
    std::vector<NodeIndex> want;
    for (const auto& v : t.vertices()) {
      if (is_descendant_or_self(v, t.index(sub)) && v != t.index(sub) && are_neighbors(query, v)) want.push_back(v);
    }
    EXPECT_EQ(sorted(got), sorted(want));
  }
}

TEST(FindNeighbors, UniformGrid) {
  const ReducedTree t = uniform_tree(2, 2);
  EXPECT_EQ(find_neighbors(t, cell(0, {1.5, 1.5})).size(), 4u);
  EXPECT_EQ(find_neighbors(t, cell(0, {0.5, 0.5})).size(), 2u);
  EXPECT_EQ(find_neighbors(t, cell(0, {3.5, 1.5})).size(), 3u);
}

TEST(FindNeighbors, MixedResolution) {
  // A coarse query cell whose east side faces cells of two smaller scales.
  ReducedTree t(2, 3);
  t.split(t.root());
  const auto east = t.child(t.root(), 1);  // (6,2), k=2
  t.split(east);
  const auto east_low = t.child(east, 0);  // (5,1), k=1
  t.split(east_low);
  const NodeIndex query = cell(2, {2, 2});
  const auto got = sorted(find_neighbors(t, query));
  EXPECT_EQ(got, sorted(brute_neighbors(t, query)));
  EXPECT_EQ(got, sorted({cell(0, {4.5, 0.5}), cell(0, {4.5, 1.5}), cell(1, {5, 3}), cell(2, {2, 6})}));
}

TEST(FindNeighbors, RemovedCellsAreSkipped) {
  ReducedTree t = uniform_tree(2, 2);
  t.remove(t.find(cell(0, {2.5, 1.5})));
  const auto got = find_neighbors(t, cell(0, {1.5, 1.5}));
  EXPECT_EQ(got.size(), 3u);
}

TEST(FindNeighbors, RandomTreesMatchBruteForce) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const int dim = 1 + trial % 3;
    const ReducedTree t = random_reduced_tree(dim, 4, 0.55, 0.1, rng);
    for (const auto& v : t.vertices()) {
      ASSERT_EQ(sorted(find_neighbors(t, v)), sorted(brute_neighbors(t, v))) << to_string(v);
    }
  }
}

TEST(FindNeighbors, NonVertexThrows) {
  ReducedTree t(2, 2);
  t.split(t.root());
  EXPECT_THROW(find_neighbors(t, cell(2, {2, 2})), Error);
  EXPECT_THROW(find_neighbors(t, cell(0, {0.5, 0.5})), Error);
}

TEST(AllNeighborPairs, SingleLeaf) {
  ReducedTree t(3, 2);
  EXPECT_TRUE(all_neighbor_pairs(t).empty());
}

TEST(AllNeighborPairs, UniformGridEdgeCount) {
  for (int depth = 1; depth <= 4; ++depth) {
    const ReducedTree t = uniform_tree(2, depth);
    const std::size_t side = std::size_t{1} << depth;
    EXPECT_EQ(all_neighbor_pairs(t).size(), 2 * side * (side - 1));
  }
}

TEST(AllNeighborPairs, RandomTreesMatchPairwiseScan) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = 2 + trial % 3;
    const ReducedTree t = random_reduced_tree(dim, dim == 4 ? 3 : 4, 0.5, 0.1, rng);
    NeighborStats stats;
    const EdgeList fast = all_neighbor_pairs(t, &stats);
    EXPECT_EQ(fast, all_neighbor_pairs_pairwise(t));
    for (const auto& [a, b] : fast) EXPECT_LT(a, b);
    // Descent work stays within a constant times |V| (depth + 1).
    const std::size_t v = t.vertices().size();
    EXPECT_LE(stats.descent_steps, 2 * static_cast<std::size_t>(dim) * v * (t.depth() + 1));
  }
}
