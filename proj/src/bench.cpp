#include "mspp/bench.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>

#include <fmt/format.h>

#include "mspp/predicates.hpp"

namespace mspp {

using Clock = std::chrono::steady_clock;

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kAstar: return "astar";
    case Algorithm::kMsppNaive: return "mspp-naive";
    case Algorithm::kMsppFn: return "mspp-fn";
    case Algorithm::kMsppS: return "mspp-s";
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& name) {
  for (Algorithm a : {Algorithm::kAstar, Algorithm::kMsppNaive, Algorithm::kMsppFn, Algorithm::kMsppS}) {
    if (to_string(a) == name) return a;
  }
  throw Error("unknown algorithm '" + name + "' (expected astar, mspp-naive, mspp-fn or mspp-s)");
}

std::string to_string(PlanMode m) { return m == PlanMode::kExact ? "exact" : "sampling"; }

PlanMode parse_plan_mode(const std::string& name) {
  if (name == "exact") return PlanMode::kExact;
  if (name == "sampling") return PlanMode::kSampling;
  throw Error("unknown mode '" + name + "' (expected exact or sampling)");
}

std::string to_string(SamplingScheme s) { return s == SamplingScheme::kUnitCell ? "unit-cell" : "continuous"; }

SamplingScheme parse_sampling_scheme(const std::string& name) {
  if (name == "unit-cell") return SamplingScheme::kUnitCell;
  if (name == "continuous") return SamplingScheme::kContinuous;
  throw Error("unknown sampling scheme '" + name + "' (expected unit-cell or continuous)");
}

void RunConfig::validate() const {
  if (dim < 1 || dim > kMaxDim) throw Error(fmt::format("dim = {} outside [1, {}]", dim, kMaxDim));
  if (depth < 0 || depth > 24) throw Error(fmt::format("depth = {} outside [0, 24]", depth));
  if (dim * depth > 30) throw Error(fmt::format("dim * depth = {} exceeds 30 (grid too large)", dim * depth));
  if (!(regions >= 1)) throw Error("regions must be at least 1");
  if (instances < 1) throw Error("instances must be at least 1");
  if (n_first < 1 || n_last < n_first) throw Error("n-range needs 1 <= first <= last");
  if (algorithms.empty()) throw Error("no algorithm selected");
  if (!(density >= 0 && density <= 1)) throw Error("density must lie in [0, 1]");
  if (blob_min < 1 || blob_max < blob_min) throw Error("blob sizes need 1 <= min <= max");
  planner().validate(dim);
}

std::uint64_t RunConfig::resolved_seed() const {
  if (seed) return *seed;
  if (const char* env = std::getenv("MSPP_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0') throw Error(fmt::format("MSPP_SEED='{}' is not an unsigned integer", env));
    return v;
  }
  return 0;
}

PlannerConfig RunConfig::planner() const {
  PlannerConfig p;
  p.eps = eps;
  p.alpha = alpha;
  p.cost.weight = weight;
  p.mode = mode;
  p.gamma = gamma;
  p.samples = samples;
  p.seed = resolved_seed();
  p.scheme = scheme;
  p.budget = budget;
  return p;
}

GeneratorSpec RunConfig::generator_spec(std::uint64_t instance_seed) const {
  GeneratorSpec g;
  g.dim = dim;
  g.depth = depth;
  g.density = density;
  g.generator = generator;
  g.blob_min = blob_min;
  g.blob_max = blob_max;
  g.seed = instance_seed;
  g.free_corners = true;
  return g;
}

BoundParams RunConfig::bound_params(std::uint64_t n) const {
  return BoundParams{depth, dim, eps, gamma, n, regions};
}

namespace {

template <class T>
void read_key(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

template <class T>
void read_key(const nlohmann::json& j, const char* key, std::optional<T>& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

void apply_json(RunConfig& c, const nlohmann::json& j) {
  if (!j.is_object()) throw Error("config must be a JSON object");
  static const std::vector<std::string> known = {
      "dim",     "depth",     "eps",      "gamma",    "samples",   "alpha",     "weight",   "regions",
      "seed",    "mode",      "scheme",   "algo",     "budget",    "density",   "generator", "blob_min",
      "blob_max", "instances", "n_first", "n_last"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) throw Error("unknown config key '" + key + "'");
  }
  try {
    read_key(j, "dim", c.dim);
    read_key(j, "depth", c.depth);
    read_key(j, "eps", c.eps);
    read_key(j, "gamma", c.gamma);
    read_key(j, "samples", c.samples);
    read_key(j, "alpha", c.alpha);
    read_key(j, "weight", c.weight);
    read_key(j, "regions", c.regions);
    read_key(j, "seed", c.seed);
    read_key(j, "budget", c.budget);
    read_key(j, "density", c.density);
    read_key(j, "blob_min", c.blob_min);
    read_key(j, "blob_max", c.blob_max);
    read_key(j, "instances", c.instances);
    read_key(j, "n_first", c.n_first);
    read_key(j, "n_last", c.n_last);
    if (j.contains("mode")) c.mode = parse_plan_mode(j.at("mode").get<std::string>());
    if (j.contains("scheme")) c.scheme = parse_sampling_scheme(j.at("scheme").get<std::string>());
    if (j.contains("generator")) c.generator = parse_map_generator(j.at("generator").get<std::string>());
    if (j.contains("algo")) {
      c.algorithms.clear();
      const auto& a = j.at("algo");
      if (a.is_string()) {
        c.algorithms.push_back(parse_algorithm(a.get<std::string>()));
      } else {
        for (const auto& item : a) c.algorithms.push_back(parse_algorithm(item.get<std::string>()));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("bad config value: ") + e.what());
  }
}

void apply_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("cannot parse config file '" + path + "': " + e.what());
  }
  apply_json(config, j);
}

std::string bench_header() {
  return "algorithm,dim,depth,seed,generator,density,map_build_s,plan_s,total_s,iterations,backtracks,"
         "astar_pops,neighbor_calls,evaluations,touched,sampled_nodes,success,status,path_cost,path_nodes,lazy_ok";
}

std::string format_row(const BenchRow& r) {
  auto seconds = [](std::chrono::nanoseconds ns) { return fmt::format("{:.9f}", ns.count() * 1e-9); };
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}", to_string(r.algorithm), r.dim,
                     r.depth, r.seed, to_string(r.generator), r.density, seconds(r.map_build), seconds(r.plan),
                     seconds(r.total()), r.iterations, r.backtracks, r.astar_pops, r.neighbor_calls, r.evaluations,
                     r.touched, r.sampled_nodes, r.success ? 1 : 0, r.status,
                     r.path_cost ? fmt::format("{:.9g}", *r.path_cost) : std::string(), r.path_nodes,
                     r.lazy_ok ? 1 : 0);
}

BenchRow run_instance(const RunConfig& config, Algorithm algorithm, std::uint64_t seed) {
  BenchRow row;
  row.algorithm = algorithm;
  row.dim = config.dim;
  row.depth = config.depth;
  row.seed = seed;
  row.generator = config.generator;
  row.density = config.density;

  const GridWorld world = generate_map(config.generator_spec(seed));
  const GridPredicate pred(world);
  const std::vector<std::int64_t> lo = low_corner(world);
  const std::vector<std::int64_t> hi = high_corner(world);
  std::vector<double> start(config.dim), goal(config.dim);
  for (int j = 0; j < config.dim; ++j) {
    start[j] = static_cast<double>(lo[j]) + 0.5;
    goal[j] = static_cast<double>(hi[j]) + 0.5;
  }

  PlannerConfig planner = config.planner();
  planner.seed = seed;

  auto record = [&](const PlanResult& res, std::chrono::nanoseconds plan_time) {
    row.plan = plan_time;
    row.iterations = res.stats.iterations;
    row.backtracks = res.stats.backtracks;
    row.astar_pops = res.stats.astar_pops;
    row.neighbor_calls = res.stats.neighbor_calls;
    row.evaluations = res.stats.evaluations;
    row.touched = res.stats.touched;
    row.sampled_nodes = res.stats.sampled_nodes;
    row.lazy_ok = res.stats.laziness_violations == 0;
    row.success = res.success();
    row.status = to_string(res.status);
    row.path_nodes = res.path.size();
    if (res.success()) row.path_cost = res.cost;
  };

  if (algorithm == Algorithm::kAstar) {
    const auto t0 = Clock::now();
    const GridWorld grid = rasterize(pred, config.depth);
    const auto t1 = Clock::now();
    const BaselineResult res = uniform_astar(grid, lo, hi);
    const auto t2 = Clock::now();
    row.map_build = t1 - t0;
    row.plan = t2 - t1;
    row.astar_pops = res.expanded;
    row.success = res.reachable;
    row.status = res.reachable ? "success" : "no-path";
    row.path_nodes = res.path.size();
    if (res.reachable) row.path_cost = res.cost;
    return row;
  }

  if (algorithm == Algorithm::kMsppS) {
    planner.mode = PlanMode::kSampling;
    const auto t0 = Clock::now();
    PlanningSession session(pred, config.depth, planner);
    const PlanResult res = session.plan(start, goal);
    record(res, Clock::now() - t0);
    if (res.success()) {
      const FipCheck check = verify_unit_path(pred, config.depth, res.path, config.eps, start, goal);
      if (!check.ok) {
        row.success = false;
        row.status = "invalid-path";
        row.path_cost.reset();
      }
    }
    return row;
  }

  planner.mode = PlanMode::kExact;
  planner.neighbors = algorithm == Algorithm::kMsppNaive ? NeighborMethod::kPairwise : NeighborMethod::kFast;
  const auto t0 = Clock::now();
  const OccupancyTree tree = build_from_grid(rasterize(pred, config.depth));
  const auto t1 = Clock::now();
  row.map_build = t1 - t0;
  PlanningSession session(tree, planner);
  const PlanResult res = session.plan(start, goal);
  record(res, Clock::now() - t1);
  if (res.success()) {
    const FipCheck check = verify_fip(tree, res.path, config.eps, start, goal);
    if (!check.ok) {
      row.success = false;
      row.status = "invalid-path";
      row.path_cost.reset();
    }
  }
  return row;
}

void run_bench(const RunConfig& config, const std::function<void(const BenchRow&)>& sink) {
  const std::uint64_t base = config.resolved_seed();
  for (int i = 0; i < config.instances; ++i) {
    for (Algorithm a : config.algorithms) sink(run_instance(config, a, base + static_cast<std::uint64_t>(i)));
  }
}

}  // namespace mspp
