#include "mspp/environments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include <fmt/format.h>

#include "mspp/sampling.hpp"

namespace mspp {

std::string to_string(MapGenerator g) { return g == MapGenerator::kScatter ? "scatter" : "blobs"; }

MapGenerator parse_map_generator(const std::string& name) {
  if (name == "scatter") return MapGenerator::kScatter;
  if (name == "blobs") return MapGenerator::kBlobs;
  throw Error("unknown map generator '" + name + "' (expected scatter or blobs)");
}

std::vector<std::int64_t> low_corner(const GridWorld& world) {
  return std::vector<std::int64_t>(world.dim(), 0);
}

std::vector<std::int64_t> high_corner(const GridWorld& world) {
  return std::vector<std::int64_t>(world.dim(), world.side() - 1);
}

namespace {

// Selection sampling: picks exactly `want` of the cells accepted by `eligible`,
// each subset equally likely.
template <class Eligible>
void scatter(GridWorld& world, std::size_t want, std::size_t population, CounterRng& rng, Eligible eligible) {
  std::size_t remaining = population;
  for (std::size_t i = 0; i < world.cell_count() && want > 0; ++i) {
    if (!eligible(i)) continue;
    if (rng.below(remaining) < want) {
      world.set(i, true);
      --want;
    }
    --remaining;
  }
}

}  // namespace

GridWorld generate_map(const GeneratorSpec& spec) {
  if (!(spec.density >= 0.0 && spec.density <= 1.0)) throw Error("density must lie in [0, 1]");
  if (spec.blob_min < 1 || spec.blob_max < spec.blob_min) throw Error("blob sizes need 1 <= min <= max");
  GridWorld world(spec.dim, spec.depth);
  const std::size_t n = world.cell_count();
  const std::size_t first = 0;
  const std::size_t last = n - 1;
  const std::size_t reserved = spec.free_corners ? (n > 1 ? 2 : 1) : 0;
  if (spec.free_corners && spec.density >= 1.0) throw Error("density 1 leaves no room for free start/goal corners");
  const std::size_t target = static_cast<std::size_t>(std::llround(spec.density * static_cast<double>(n)));
  if (target + reserved > n) {
    throw Error(fmt::format("density {} asks for {} obstacles but only {} cells are available", spec.density, target,
                            n - reserved));
  }
  auto eligible = [&](std::size_t i) { return !(spec.free_corners && (i == first || i == last)); };
  CounterRng rng(splitmix64(spec.seed ^ 0x243f6a8885a308d3ULL));

  if (spec.generator == MapGenerator::kScatter) {
    scatter(world, target, n - reserved, rng, eligible);
    return world;
  }

  std::size_t placed = 0;
  std::size_t stalled = 0;
  const int dim = spec.dim;
  const std::int64_t side = world.side();
  std::array<std::int64_t, kMaxDim> lo{}, extent{}, cell{};
  while (placed < target && stalled < 10000) {
    for (int j = 0; j < dim; ++j) {
      const std::int64_t span = spec.blob_min + static_cast<std::int64_t>(rng.below(spec.blob_max - spec.blob_min + 1));
      extent[j] = std::min(span, side);
      lo[j] = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(side - extent[j] + 1)));
    }
    std::size_t before = placed;
    std::int64_t volume = 1;
    for (int j = 0; j < dim; ++j) volume *= extent[j];
    for (std::int64_t v = 0; v < volume && placed < target; ++v) {
      std::int64_t rest = v;
      for (int j = 0; j < dim; ++j) {
        cell[j] = lo[j] + rest % extent[j];
        rest /= extent[j];
      }
      const std::size_t i = world.linear_index(std::span<const std::int64_t>(cell.data(), dim));
      if (!eligible(i) || world.occupied(i)) continue;
      world.set(i, true);
      ++placed;
    }
    stalled = placed == before ? stalled + 1 : 0;
  }
  if (placed < target) {
    std::size_t population = 0;
    for (std::size_t i = 0; i < n; ++i) population += eligible(i) && !world.occupied(i);
    scatter(world, target - placed, population, rng, [&](std::size_t i) { return eligible(i) && !world.occupied(i); });
  }
  return world;
}

BaselineResult uniform_astar(const GridWorld& world, std::span<const std::int64_t> start,
                             std::span<const std::int64_t> goal, GridHeuristic heuristic) {
  const auto t0 = std::chrono::steady_clock::now();
  if (!world.in_bounds(start) || !world.in_bounds(goal)) throw Error("start or goal cell outside the world");
  if (world.occupied(start) || world.occupied(goal)) throw Error("start or goal cell is an obstacle");

  const int dim = world.dim();
  const int depth = world.depth();
  const std::size_t n = world.cell_count();
  const std::size_t s = world.linear_index(start);
  const std::size_t t = world.linear_index(goal);
  const std::int64_t side = world.side();
  const std::size_t mask = static_cast<std::size_t>(side - 1);

  auto h_of = [&](std::size_t i) {
    double sum = 0;
    for (int j = 0; j < dim; ++j) {
      const double delta = std::fabs(static_cast<double>(static_cast<std::int64_t>((i >> (depth * j)) & mask) - goal[j]));
      sum += heuristic == GridHeuristic::kEuclidean ? delta * delta : delta;
    }
    return heuristic == GridHeuristic::kEuclidean ? std::sqrt(sum) : sum;
  };

  constexpr std::uint32_t kUnseen = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> g(n, kUnseen);
  std::vector<std::uint32_t> parent(n, kUnseen);
  std::vector<std::uint8_t> closed(n, 0);

  struct Entry {
    double f;
    double h;
    std::size_t cell;
    bool operator>(const Entry& o) const {
      if (f != o.f) return f > o.f;
      if (h != o.h) return h > o.h;
      return cell > o.cell;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  g[s] = 0;
  open.push({h_of(s), h_of(s), s});

  BaselineResult result;
  while (!open.empty()) {
    const Entry top = open.top();
    open.pop();
    if (closed[top.cell]) continue;
    closed[top.cell] = 1;
    ++result.expanded;
    if (top.cell == t) {
      result.reachable = true;
      break;
    }
    const std::uint32_t g_next = g[top.cell] + 1;
    for (int j = 0; j < dim; ++j) {
      const std::size_t stride = std::size_t{1} << (depth * j);
      const std::size_t coord = (top.cell >> (depth * j)) & mask;
      for (int sign = -1; sign <= 1; sign += 2) {
        if ((sign < 0 && coord == 0) || (sign > 0 && coord == mask)) continue;
        const std::size_t nb = sign < 0 ? top.cell - stride : top.cell + stride;
        if (closed[nb] || world.occupied(nb) || g_next >= g[nb]) continue;
        g[nb] = g_next;
        parent[nb] = static_cast<std::uint32_t>(top.cell);
        const double h = h_of(nb);
        open.push({g_next + h, h, nb});
      }
    }
  }
  if (result.reachable) {
    result.cost = g[t];
    for (std::size_t at = t;; at = parent[at]) {
      result.path.push_back(at);
      if (at == s) break;
    }
    std::reverse(result.path.begin(), result.path.end());
  }
  result.elapsed = std::chrono::steady_clock::now() - t0;
  return result;
}

}  // namespace mspp
