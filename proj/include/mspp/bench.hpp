#pragma once

// Run configuration shared by the CLI subcommands, and the benchmark runner
// that produces one CSV row per (algorithm, instance).

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mspp/environments.hpp"
#include "mspp/search.hpp"

namespace mspp {

enum class Algorithm { kAstar, kMsppNaive, kMsppFn, kMsppS };

std::string to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& name);
PlanMode parse_plan_mode(const std::string& name);
std::string to_string(PlanMode m);
SamplingScheme parse_sampling_scheme(const std::string& name);
std::string to_string(SamplingScheme s);

struct RunConfig {
  int dim = 2;
  int depth = 5;
  double eps = 0.5;
  double gamma = 0.05;
  std::uint32_t samples = 256;
  std::optional<double> alpha;
  double weight = 1.0;
  double regions = 2;
  std::optional<std::uint64_t> seed;
  PlanMode mode = PlanMode::kExact;
  SamplingScheme scheme = SamplingScheme::kUnitCell;
  std::vector<Algorithm> algorithms{Algorithm::kMsppFn};
  std::optional<std::uint64_t> budget;

  // Map generation.
  double density = 0.3;
  MapGenerator generator = MapGenerator::kScatter;
  int blob_min = 1;
  int blob_max = 4;
  int instances = 1;  // seeds seed, seed+1, ...

  // Bound curve.
  std::uint64_t n_first = 1;
  std::uint64_t n_last = 300;

  void validate() const;
  std::uint64_t resolved_seed() const;  // seed, else MSPP_SEED, else 0
  PlannerConfig planner() const;
  GeneratorSpec generator_spec(std::uint64_t instance_seed) const;
  BoundParams bound_params(std::uint64_t n) const;
};

// Overlays the keys present in a JSON object. Unknown keys are rejected.
void apply_json(RunConfig& config, const nlohmann::json& j);
void apply_config_file(RunConfig& config, const std::string& path);

struct BenchRow {
  Algorithm algorithm = Algorithm::kMsppFn;
  int dim = 0;
  int depth = 0;
  std::uint64_t seed = 0;
  MapGenerator generator = MapGenerator::kScatter;
  double density = 0;
  std::chrono::nanoseconds map_build{0};
  std::chrono::nanoseconds plan{0};
  std::uint64_t iterations = 0;
  std::uint64_t backtracks = 0;
  std::uint64_t astar_pops = 0;
  std::uint64_t neighbor_calls = 0;
  std::uint64_t evaluations = 0;
  std::uint64_t touched = 0;
  std::uint64_t sampled_nodes = 0;
  bool success = false;
  std::string status;
  std::optional<double> path_cost;
  std::size_t path_nodes = 0;
  bool lazy_ok = true;

  std::chrono::nanoseconds total() const { return map_build + plan; }
};

std::string bench_header();
std::string format_row(const BenchRow& row);

// One instance: generate the map for `seed`, then time map construction and
// planning between opposite corner cells with the given algorithm.
BenchRow run_instance(const RunConfig& config, Algorithm algorithm, std::uint64_t seed);

// All algorithms over config.instances seeds; rows are handed to `sink` in
// order (instance-major, algorithms in config order).
void run_bench(const RunConfig& config, const std::function<void(const BenchRow&)>& sink);

}  // namespace mspp
