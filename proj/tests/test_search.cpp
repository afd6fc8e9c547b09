#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mspp/environments.hpp"
#include "mspp/predicates.hpp"
#include "mspp/search.hpp"
#include "test_util.hpp"

using namespace mspp;
using mspp::testing::dijkstra_cost;
using mspp::testing::flood_reachable;
using mspp::testing::random_unit;
using mspp::testing::random_world;

namespace {

std::vector<double> corner_low(int dim) { return std::vector<double>(dim, 0.5); }
std::vector<double> corner_high(int dim, int depth) { return std::vector<double>(dim, std::ldexp(1.0, depth) - 0.5); }

GridWorld with_free_corners(GridWorld w) {
  w.set(0, false);
  w.set(w.cell_count() - 1, false);
  return w;
}

NodeIndex unit(std::vector<std::int64_t> lower) {
  return NodeIndex::from_lower(static_cast<int>(lower.size()), 0, lower);
}

}  // namespace

TEST(PlannerConfig, Validation) {
  PlannerConfig c;
  EXPECT_NO_THROW(c.validate(2));
  EXPECT_DOUBLE_EQ(c.resolved_alpha(2), 1.0);
  EXPECT_DOUBLE_EQ(c.resolved_alpha(5), std::sqrt(5.0) / 2);
  EXPECT_EQ(c.resolved_budget(2, 5), 4u * 1024u);
  c.alpha = 0.9;
  EXPECT_THROW(c.validate(4), Error);
  c.alpha = 0.5;
  EXPECT_THROW(c.validate(1), Error);
  c.alpha.reset();
  c.eps = 1.0;
  EXPECT_THROW(c.validate(2), Error);
  c.eps = 0.5;
  c.cost.weight = -1;
  EXPECT_THROW(c.validate(2), Error);
}

TEST(CostModel, DistanceTimesPenalty) {
  const CostModel cost{2.0};
  EXPECT_DOUBLE_EQ(cost.edge_cost(unit({0, 0}), unit({1, 0}), 0.25), 1.5);
  const NodeIndex big = parent(unit({2, 0}));  // center (3, 1)
  EXPECT_DOUBLE_EQ(cost.edge_cost(unit({1, 0}), big, 0.0), std::hypot(1.5, 0.5));
}

TEST(Plan, StartEqualsGoal) {
  GridWorld w = random_world(2, 3, 0.2, 1);
  w.set(0, false);
  const OccupancyTree tree = build_from_grid(w);
  const std::vector<double> p{0.5, 0.5};
  PlannerConfig c;
  auto r = mspp_plan(tree, p, p, c);
  ASSERT_TRUE(r.success());
  EXPECT_EQ(r.path.size(), 1u);
  EXPECT_EQ(r.stats.iterations, 0u);
  EXPECT_EQ(r.cost, 0.0);
}

TEST(Plan, CorridorOfFourCells) {
  GridWorld w(2, 2);
  for (std::size_t i = 4; i < 16; ++i) w.set(i, true);
  const OccupancyTree tree = build_from_grid(w);
  PlannerConfig c;
  const std::vector<double> s{0.5, 0.5}, g{3.5, 0.5};
  auto r = mspp_plan(tree, s, g, c);
  ASSERT_TRUE(r.success()) << r.message;
  EXPECT_EQ(r.path, (Path{unit({0, 0}), unit({1, 0}), unit({2, 0}), unit({3, 0})}));
  EXPECT_DOUBLE_EQ(r.cost, 3.0);
}

TEST(Plan, EmptyMapMatchesGridShortestPath) {
  const GridWorld w(2, 3);
  const OccupancyTree tree = build_from_grid(w, {false});
  PlannerConfig c;
  c.cost.weight = 0;
  auto r = mspp_plan(tree, corner_low(2), corner_high(2, 3), c);
  ASSERT_TRUE(r.success());
  const auto base = uniform_astar(w, low_corner(w), high_corner(w));
  EXPECT_GE(r.path.size(), 2u * 7u + 1u);
  EXPECT_EQ(r.path.size(), base.path.size());
  EXPECT_TRUE(verify_fip(tree, r.path, c.eps, corner_low(2), corner_high(2, 3)).ok);
}

TEST(Plan, CollapsedEmptyMapIsOneLeaf) {
  const OccupancyTree tree = build_from_grid(GridWorld(2, 3));
  auto r = mspp_plan(tree, corner_low(2), corner_high(2, 3), PlannerConfig{});
  ASSERT_TRUE(r.success());
  EXPECT_EQ(r.path, Path{NodeIndex::root(2, 3)});
}

TEST(Plan, WallMeansFailure) {
  GridWorld w(2, 3);
  for (std::int64_t y = 0; y < 8; ++y) w.set(std::array<std::int64_t, 2>{4, y}, true);
  const OccupancyTree tree = build_from_grid(w);
  auto r = mspp_plan(tree, corner_low(2), corner_high(2, 3), PlannerConfig{});
  EXPECT_EQ(r.status, PlanStatus::kNoPath);
  EXPECT_FALSE(uniform_astar(w, low_corner(w), high_corner(w)).reachable);
}

TEST(Plan, BlockedEndpoints) {
  GridWorld w(2, 3);
  w.set(0, true);
  const OccupancyTree tree = build_from_grid(w);
  auto r = mspp_plan(tree, corner_low(2), corner_high(2, 3), PlannerConfig{});
  EXPECT_EQ(r.status, PlanStatus::kStartOrGoalBlocked);
  auto q = mspp_plan(tree, corner_high(2, 3), corner_low(2), PlannerConfig{});
  EXPECT_EQ(q.status, PlanStatus::kStartOrGoalBlocked);
}

TEST(Plan, BudgetExceeded) {
  const OccupancyTree tree = build_from_grid(GridWorld(2, 4), {false});
  PlannerConfig c;
  c.budget = 3;
  auto r = mspp_plan(tree, corner_low(2), corner_high(2, 4), c);
  EXPECT_EQ(r.status, PlanStatus::kBudgetExceeded);
  EXPECT_EQ(r.stats.iterations, 3u);
}

TEST(Plan, OutsidePointsThrow) {
  const OccupancyTree tree = build_from_grid(GridWorld(2, 2));
  const std::vector<double> s{0.5, 0.5}, g{4.5, 0.5};
  EXPECT_THROW(mspp_plan(tree, s, g, PlannerConfig{}), Error);
}

TEST(Plan, ReachabilityAndSoundnessOnRandomMaps) {
  int solved = 0, unsolved = 0;
  for (int dim = 2; dim <= 3; ++dim) {
    for (double density : {0.1, 0.3, 0.5}) {
      for (int seed = 0; seed < 12; ++seed) {
        const int depth = dim == 2 ? 4 : 3;
        const GridWorld w = with_free_corners(random_world(dim, depth, density, 1000 * dim + seed + 100 * density));
        const OccupancyTree tree = build_from_grid(w);
        PlannerConfig c;
        c.eps = 0.5;
        c.check_incremental = true;
        const auto s = corner_low(dim), g = corner_high(dim, depth);
        auto r = mspp_plan(tree, s, g, c);
        const bool reachable = flood_reachable(w, 0, w.cell_count() - 1);
        ASSERT_EQ(r.success(), reachable) << "d=" << dim << " rho=" << density << " seed=" << seed;
        ASSERT_NE(r.status, PlanStatus::kBudgetExceeded);
        EXPECT_EQ(r.stats.incremental_mismatches, 0u);
        EXPECT_EQ(r.stats.laziness_violations, 0u);
        if (r.success()) {
          ++solved;
          const FipCheck check = verify_fip(tree, r.path, c.eps, s, g);
          EXPECT_TRUE(check.ok) << check.message;
        } else {
          ++unsolved;
        }
      }
    }
  }
  EXPECT_GT(solved, 10);
  EXPECT_GT(unsolved, 3);
}

TEST(Plan, PairwiseNeighborsGiveIdenticalRuns) {
  for (int seed = 0; seed < 10; ++seed) {
    const GridWorld w = with_free_corners(random_world(3, 3, 0.3, 77 + seed));
    const OccupancyTree tree = build_from_grid(w);
    PlannerConfig fast, naive;
    naive.neighbors = NeighborMethod::kPairwise;
    auto a = mspp_plan(tree, corner_low(3), corner_high(3, 3), fast);
    auto b = mspp_plan(tree, corner_low(3), corner_high(3, 3), naive);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.path, b.path);
    EXPECT_EQ(a.stats.astar_pops, b.stats.astar_pops);
    EXPECT_EQ(a.stats.neighbor_calls, b.stats.neighbor_calls);
  }
}

TEST(LazyAStar, SameVertexNeedsNoExpansion) {
  const OccupancyTree tree = build_from_grid(random_world(2, 3, 0.2, 4), {false});
  PlanningSession session(tree, PlannerConfig{});
  const NodeIndex cur = unit({3, 3});
  session.update(cur);
  auto r = session.astar(cur, cur);
  ASSERT_TRUE(r.found);
  EXPECT_EQ(r.path, Path{cur});
  EXPECT_EQ(r.stats.neighbor_calls, 0u);
}

TEST(LazyAStar, CostMatchesDijkstraOnMaterializedGraph) {
  std::mt19937_64 rng(31);
  int compared = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const GridWorld w = random_world(2, 5, 0.25, 500 + trial);
    const OccupancyTree tree = build_from_grid(w);
    PlannerConfig c;
    c.cost.weight = trial % 3 == 0 ? 0.0 : 2.0;
    PlanningSession session(tree, c);
    const NodeIndex cur = random_unit(2, 5, rng);
    if (is_eps_obstacle(tree, cur, c.eps)) continue;
    session.update(cur);
    const auto verts = session.reduced_tree().vertices();
    if (verts.size() < 2) continue;
    const std::size_t from = std::find_if(verts.begin(), verts.end(),
                                          [&](const NodeIndex& v) { return is_descendant_or_self(cur, v); }) -
                             verts.begin();
    ASSERT_LT(from, verts.size());
    const std::size_t to = std::uniform_int_distribution<std::size_t>(0, verts.size() - 1)(rng);
    const auto& rt = session.reduced_tree();
    const double want = dijkstra_cost(
        verts, from, to, c.cost, [&](std::size_t i) { return rt.value(rt.find(verts[i])); },
        [](std::size_t) { return false; });
    const auto got = session.astar(verts[from], verts[to]);
    ASSERT_EQ(got.found, std::isfinite(want));
    if (!got.found) continue;
    ++compared;
    EXPECT_NEAR(got.cost, want, 1e-9 * std::max(1.0, want));
    EXPECT_EQ(got.path.front(), verts[from]);
    EXPECT_EQ(got.path.back(), verts[to]);
    double along = 0;
    for (std::size_t i = 1; i < got.path.size(); ++i) {
      ASSERT_TRUE(are_neighbors(got.path[i - 1], got.path[i]));
      along += c.cost.edge_cost(got.path[i - 1], got.path[i], rt.value(rt.find(got.path[i])));
    }
    EXPECT_NEAR(along, got.cost, 1e-9 * std::max(1.0, along));
    // Laziness: one expansion per non-goal pop, values only for touched vertices.
    EXPECT_EQ(got.stats.neighbor_calls + 1, got.stats.pops);
    EXPECT_LE(got.stats.evaluations, got.stats.touched);
    EXPECT_LE(got.stats.pops, verts.size());
  }
  EXPECT_GT(compared, 30);
}

TEST(LazyAStar, SamplingModeMatchesDijkstraOnEstimatedValues) {
  std::mt19937_64 rng(8);
  int compared = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const GridWorld w = random_world(2, 5, 0.3, 900 + trial);
    const GridPredicate pred(w);
    PlannerConfig c;
    c.samples = 64;
    c.gamma = 0.1;
    c.seed = trial;
    PlanningSession session(pred, 5, c);
    const NodeIndex cur = random_unit(2, 5, rng);
    if (session.finest_is_obstacle(cur)) continue;
    session.update(cur);
    const auto verts = session.reduced_tree().vertices();
    const std::size_t from = std::find(verts.begin(), verts.end(), cur) - verts.begin();
    ASSERT_LT(from, verts.size());
    const std::size_t to = std::uniform_int_distribution<std::size_t>(0, verts.size() - 1)(rng);
    const auto got = session.astar(verts[from], verts[to]);
    // The oracle classifies every vertex up front with the same cache.
    auto& rt = session.reduced_tree();
    std::vector<double> values(verts.size());
    std::vector<bool> blocked(verts.size());
    for (std::size_t i = 0; i < verts.size(); ++i) {
      values[i] = session.vertex_value(rt.find(verts[i]));
      blocked[i] = !session.vertex_passable(rt.find(verts[i])) && i != from;
    }
    if (blocked[to]) {
      EXPECT_FALSE(got.found);
      continue;
    }
    const double want = dijkstra_cost(
        verts, from, to, c.cost, [&](std::size_t i) { return values[i]; }, [&](std::size_t i) { return blocked[i]; });
    ASSERT_EQ(got.found, std::isfinite(want));
    if (!got.found) continue;
    ++compared;
    EXPECT_NEAR(got.cost, want, 1e-9 * std::max(1.0, want));
    EXPECT_LE(got.stats.evaluations, got.stats.touched);
    for (const auto& v : got.path) EXPECT_TRUE(v == verts[from] || !blocked[std::find(verts.begin(), verts.end(), v) - verts.begin()]);
  }
  EXPECT_GT(compared, 10);
}

TEST(SamplingPlan, GridPredicateSolvesLikeExactMode) {
  int solved = 0;
  for (int seed = 0; seed < 20; ++seed) {
    const GridWorld w = with_free_corners(random_world(2, 4, 0.25, 300 + seed));
    const GridPredicate pred(w);
    PlannerConfig c;
    c.samples = 256;
    c.gamma = 0.05;
    c.seed = seed;
    c.check_incremental = true;
    const auto s = corner_low(2), g = corner_high(2, 4);
    auto r = mspp_plan(pred, 4, s, g, c);
    EXPECT_EQ(r.stats.laziness_violations, 0u);
    EXPECT_EQ(r.stats.incremental_mismatches, 0u);
    // k_min = 4 = depth here, so every node is counted exactly and the
    // outcome must match reachability.
    EXPECT_EQ(r.success(), flood_reachable(w, 0, w.cell_count() - 1)) << "seed " << seed;
    if (r.success()) {
      ++solved;
      const FipCheck check = verify_unit_path(pred, 4, r.path, c.eps, s, g);
      EXPECT_TRUE(check.ok) << check.message;
      for (const auto& n : r.path) EXPECT_EQ(n.k, 0);
    }
  }
  EXPECT_GT(solved, 5);
  EXPECT_LT(solved, 20);
}

TEST(SamplingPlan, SpheresWorld) {
  SpheresPredicate pred(3, {Sphere{{8, 8, 8}, 5.0}});
  PlannerConfig c;
  c.samples = 128;
  const auto s = corner_low(3), g = corner_high(3, 4);
  auto r = mspp_plan(pred, 4, s, g, c);
  ASSERT_TRUE(r.success()) << r.message;
  EXPECT_TRUE(verify_unit_path(pred, 4, r.path, c.eps, s, g).ok);
  EXPECT_GT(r.stats.sampled_nodes, 0u);
}

TEST(SamplingPlan, LargeWorldUsesHashedState) {
  // 2^28 unit cells: past the flat-array limits for closed cells and the
  // classifier table.
  SpheresPredicate pred(2, {Sphere{{3.5, 0.5}, 2.2}});
  PlannerConfig c;
  c.samples = 64;
  const std::vector<double> s{0.5, 0.5}, g{6.5, 0.5};
  auto r = mspp_plan(pred, 14, s, g, c);
  ASSERT_TRUE(r.success()) << r.message;
  const FipCheck check = verify_unit_path(pred, 14, r.path, c.eps, s, g);
  EXPECT_TRUE(check.ok) << check.message;
  EXPECT_GT(r.path.size(), 7u);
  EXPECT_EQ(r.stats.laziness_violations, 0u);

  // A blocked cell on a line cuts the goal off; failed searches close whole
  // regions, so the query ends after a few backtracks.
  SpheresPredicate wall(1, {Sphere{{10.5}, 0.6}});
  const std::vector<double> a{0.5}, b{20.5};
  const auto cut = mspp_plan(wall, 24, a, b, c);
  EXPECT_EQ(cut.status, PlanStatus::kNoPath) << cut.message;
  EXPECT_LT(cut.stats.iterations, 40u);
}

TEST(VerifyFip, Clauses) {
  GridWorld w(2, 2);
  w.set(std::array<std::int64_t, 2>{1, 1}, true);
  const OccupancyTree tree = build_from_grid(w);
  const std::vector<double> s{0.5, 0.5};
  EXPECT_TRUE(verify_fip(tree, Path{unit({0, 0})}, 0.5, s, s).ok);

  auto diag = verify_fip(tree, Path{unit({0, 0}), unit({1, 1})}, 0.5);
  EXPECT_FALSE(diag.ok);
  EXPECT_EQ(diag.violation, FipViolation::kAdjacency);
  EXPECT_EQ(diag.position, 1u);

  auto obstacle = verify_fip(tree, Path{unit({1, 0}), unit({1, 1})}, 0.5);
  EXPECT_EQ(obstacle.violation, FipViolation::kObstacle);

  // (3,3) lies in the collapsed free leaf of scale 1 at (3,3).
  auto coarse = verify_fip(tree, Path{unit({3, 3})}, 0.5);
  EXPECT_EQ(coarse.violation, FipViolation::kNotLeaf);

  const std::vector<double> far{3.5, 3.5};
  auto endpoint = verify_fip(tree, Path{unit({0, 0})}, 0.5, s, far);
  EXPECT_EQ(endpoint.violation, FipViolation::kEndpoint);

  EXPECT_FALSE(verify_fip(tree, Path{}, 0.5).ok);
}
