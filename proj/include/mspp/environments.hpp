#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mspp/grid_world.hpp"

namespace mspp {

enum class MapGenerator {
  kScatter,  // exactly round(rho * N) obstacle cells at uniformly random positions
  kBlobs,    // random axis-aligned boxes until the target count is reached
};

std::string to_string(MapGenerator g);
MapGenerator parse_map_generator(const std::string& name);

struct GeneratorSpec {
  int dim = 2;
  int depth = 5;
  double density = 0.3;
  MapGenerator generator = MapGenerator::kScatter;
  int blob_min = 1;
  int blob_max = 4;
  std::uint64_t seed = 0;
  // Keep the all-zeros corner cell and the all-max corner cell free.
  bool free_corners = true;
};

GridWorld generate_map(const GeneratorSpec& spec);

// Corner cells used as default start/goal.
std::vector<std::int64_t> low_corner(const GridWorld& world);
std::vector<std::int64_t> high_corner(const GridWorld& world);

enum class GridHeuristic { kEuclidean, kManhattan };

struct BaselineResult {
  bool reachable = false;
  std::vector<std::size_t> path;  // linear cell indices, start first
  double cost = 0;
  std::size_t expanded = 0;
  std::chrono::nanoseconds elapsed{0};
};

// A* over free unit cells with 2d-connectivity and unit edge costs. Ties in f
// are broken by smaller h, then by smaller cell index.
BaselineResult uniform_astar(const GridWorld& world, std::span<const std::int64_t> start,
                             std::span<const std::int64_t> goal, GridHeuristic heuristic = GridHeuristic::kEuclidean);

}  // namespace mspp
