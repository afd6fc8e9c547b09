// mspp: plan, benchmark, bound curve and map generation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "mspp/bench.hpp"
#include "mspp/predicates.hpp"

namespace {

using namespace mspp;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFailure = 2;
constexpr int kExitBudget = 3;

struct Flags {
  std::optional<int> dim, depth;
  std::optional<double> eps, gamma, alpha, weight, regions, density;
  std::optional<std::uint32_t> samples;
  std::optional<std::uint64_t> seed, budget;
  std::optional<std::string> mode, scheme, generator;
  std::vector<std::string> algos;
  std::optional<int> instances, blob_min, blob_max;
  std::string config_file;
  std::string out;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--dim", f.dim, "Dimension d");
  app->add_option("--depth", f.depth, "Tree depth (world side 2^depth)");
  app->add_option("--eps", f.eps, "Obstacle threshold epsilon in [0, 1)");
  app->add_option("--gamma", f.gamma, "Sampling margin gamma");
  app->add_option("--samples", f.samples, "Samples per node n");
  app->add_option("--alpha", f.alpha, "Window multiplier (default max(1, sqrt(d)/2))");
  app->add_option("--weight", f.weight, "Obstacle-penalty weight w of the edge cost");
  app->add_option("--regions", f.regions, "Independent solution regions Z");
  app->add_option("--seed", f.seed, "Seed (falls back to MSPP_SEED, then 0)");
  app->add_option("--mode", f.mode, "exact | sampling");
  app->add_option("--scheme", f.scheme, "Sampling scheme: unit-cell | continuous");
  app->add_option("--algo", f.algos, "astar | mspp-naive | mspp-fn | mspp-s (repeatable)");
  app->add_option("--budget", f.budget, "Planner iteration budget");
  app->add_option("--config", f.config_file, "JSON config file (flags override it)");
  app->add_option("--out", f.out, "Output file (default stdout)");
}

void add_map_options(CLI::App* app, Flags& f) {
  app->add_option("--density", f.density, "Obstacle density rho");
  app->add_option("--generator", f.generator, "scatter | blobs");
  app->add_option("--blob-min", f.blob_min, "Smallest blob side");
  app->add_option("--blob-max", f.blob_max, "Largest blob side");
}

template <class T>
void take(const std::optional<T>& flag, T& out) {
  if (flag) out = *flag;
}

template <class T>
void take(const std::optional<T>& flag, std::optional<T>& out) {
  if (flag) out = flag;
}

// defaults < config file < flags
RunConfig resolve(RunConfig c, const Flags& f) {
  if (!f.config_file.empty()) apply_config_file(c, f.config_file);
  take(f.dim, c.dim);
  take(f.depth, c.depth);
  take(f.eps, c.eps);
  take(f.gamma, c.gamma);
  take(f.samples, c.samples);
  take(f.alpha, c.alpha);
  take(f.weight, c.weight);
  take(f.regions, c.regions);
  take(f.seed, c.seed);
  take(f.budget, c.budget);
  take(f.density, c.density);
  take(f.instances, c.instances);
  take(f.blob_min, c.blob_min);
  take(f.blob_max, c.blob_max);
  if (f.mode) c.mode = parse_plan_mode(*f.mode);
  if (f.scheme) c.scheme = parse_sampling_scheme(*f.scheme);
  if (f.generator) c.generator = parse_map_generator(*f.generator);
  if (!f.algos.empty()) {
    c.algorithms.clear();
    for (const auto& a : f.algos) c.algorithms.push_back(parse_algorithm(a));
  }
  return c;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty()) return;
    file_.open(path);
    if (!file_) throw Error("cannot open output file '" + path + "'");
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::vector<double> parse_point(const std::string& text, int dim) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw Error("bad coordinate '" + item + "' in point '" + text + "'");
    out.push_back(v);
  }
  if (static_cast<int>(out.size()) != dim) {
    throw Error(fmt::format("point '{}' has {} coordinates, expected {}", text, out.size(), dim));
  }
  return out;
}

struct PlanArgs {
  std::string map_file;
  std::string predicate;
  std::string start;
  std::string goal;
};

int cmd_plan(const Flags& flags, const PlanArgs& args) {
  if (args.map_file.empty() == args.predicate.empty()) throw Error("plan needs exactly one of --map or --predicate");
  RunConfig c;
  std::optional<GridWorld> world;
  if (!args.map_file.empty()) {
    world = load_map(args.map_file);
    c.dim = world->dim();
    c.depth = world->depth();
  }
  c = resolve(c, flags);
  if (world && (c.dim != world->dim() || c.depth != world->depth())) {
    throw Error(fmt::format("map is d={} depth={}, but d={} depth={} was requested", world->dim(), world->depth(),
                            c.dim, c.depth));
  }
  c.validate();

  std::unique_ptr<ObstaclePredicate> pred;
  if (world) {
    pred = std::make_unique<GridPredicate>(*world);
  } else {
    pred = parse_predicate(args.predicate, c.dim, c.depth);
  }

  const double side = std::ldexp(1.0, c.depth);
  std::vector<double> start(c.dim, 0.5), goal(c.dim, side - 0.5);
  if (!args.start.empty()) start = parse_point(args.start, c.dim);
  if (!args.goal.empty()) goal = parse_point(args.goal, c.dim);

  PlannerConfig planner = c.planner();
  PlanResult result;
  FipCheck check;
  if (c.mode == PlanMode::kExact) {
    const OccupancyTree tree = build_from_grid(world ? *world : rasterize(*pred, c.depth));
    PlanningSession session(tree, planner);
    result = session.plan(start, goal);
    if (result.success()) check = verify_fip(tree, result.path, c.eps, start, goal);
  } else {
    PlanningSession session(*pred, c.depth, planner);
    result = session.plan(start, goal);
    if (result.success()) check = verify_unit_path(*pred, c.depth, result.path, c.eps, start, goal);
  }
  if (result.success() && !check.ok) {
    throw Error(fmt::format("internal: planner returned an invalid path ({} at node {}: {})",
                            to_string(check.violation), check.position, check.message));
  }

  Output out(flags.out);
  std::ostream& os = out.stream();
  for (const NodeIndex& idx : result.path) {
    os << idx.k;
    for (int j = 0; j < idx.dim; ++j) os << ' ' << fmt::format("{}", idx.center(j));
    os << '\n';
  }
  os << fmt::format("# status={} nodes={} cost={:.9g} iterations={} backtracks={} astar_pops={} time_s={:.6f}\n",
                    to_string(result.status), result.path.size(), result.cost, result.stats.iterations,
                    result.stats.backtracks, result.stats.astar_pops, result.stats.total_time.count() * 1e-9);
  if (!result.success()) std::cerr << "mspp: " << result.message << '\n';

  switch (result.status) {
    case PlanStatus::kSuccess: return kExitOk;
    case PlanStatus::kBudgetExceeded: return kExitBudget;
    default: return kExitFailure;
  }
}

int cmd_bench(const Flags& flags) {
  RunConfig c = resolve(RunConfig{}, flags);
  c.validate();
  Output out(flags.out);
  std::ostream& os = out.stream();
  os << bench_header() << '\n';
  run_bench(c, [&](const BenchRow& row) { os << format_row(row) << '\n' << std::flush; });
  return kExitOk;
}

int cmd_bound(const Flags& flags, const std::optional<std::uint64_t>& n_first,
              const std::optional<std::uint64_t>& n_last) {
  // Defaults reproduce the published failure-bound curve.
  RunConfig c;
  c.depth = 5;
  c.dim = 1;
  c.eps = 0.9;
  c.gamma = 0.0035;
  c.regions = 2;
  c.n_first = 1;
  c.n_last = 300;
  c = resolve(c, flags);
  take(n_first, c.n_first);
  take(n_last, c.n_last);
  if (c.n_first < 1 || c.n_last < c.n_first) throw Error("n-range needs 1 <= first <= last");
  Output out(flags.out);
  std::ostream& os = out.stream();
  os << "n,bound\n";
  for (std::uint64_t n = c.n_first; n <= c.n_last; ++n) {
    const BoundParams p = c.bound_params(n);
    validate(p);
    os << n << ',' << fmt::format("{:.9g}", failure_bound(p)) << '\n';
  }
  return kExitOk;
}

int cmd_gen_map(const Flags& flags, bool keep_corners_free) {
  RunConfig c = resolve(RunConfig{}, flags);
  GeneratorSpec spec = c.generator_spec(c.resolved_seed());
  spec.free_corners = keep_corners_free;
  const GridWorld world = generate_map(spec);
  Output out(flags.out);
  write_map(out.stream(), world);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiscale path planning on 2^d dyadic trees"};
  app.require_subcommand(1);

  Flags plan_flags, bench_flags, bound_flags, gen_flags;
  PlanArgs plan_args;

  CLI::App* plan = app.add_subcommand("plan", "Plan one query and print the path");
  add_common(plan, plan_flags);
  plan->add_option("--map", plan_args.map_file, "Map file");
  plan->add_option("--predicate", plan_args.predicate,
                   "Obstacle predicate: spheres:x,..,r;...  checkerboard:P  wall-with-gap:axis,position,gap");
  plan->add_option("--start", plan_args.start, "Start point x1,...,xd (default: center of the low corner cell)");
  plan->add_option("--goal", plan_args.goal, "Goal point x1,...,xd (default: center of the high corner cell)");

  CLI::App* bench = app.add_subcommand("bench", "Benchmark algorithms on random maps, CSV output");
  add_common(bench, bench_flags);
  add_map_options(bench, bench_flags);
  bench->add_option("--instances", bench_flags.instances, "Number of maps (seeds seed, seed+1, ...)");

  std::optional<std::uint64_t> n_first, n_last;
  std::string n_range;
  CLI::App* bound = app.add_subcommand("bound", "Failure-probability bound as a function of n, CSV output");
  add_common(bound, bound_flags);
  bound->add_option("--n-range", n_range, "Sample counts first:last");

  bool no_free_corners = false;
  CLI::App* gen = app.add_subcommand("gen-map", "Generate a random map file");
  add_common(gen, gen_flags);
  add_map_options(gen, gen_flags);
  gen->add_flag("--no-free-corners", no_free_corners, "Allow obstacles in the corner cells");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*plan) return cmd_plan(plan_flags, plan_args);
    if (*bench) return cmd_bench(bench_flags);
    if (*bound) {
      if (!n_range.empty()) {
        const auto colon = n_range.find(':');
        try {
          n_first = std::stoull(n_range.substr(0, colon));
          n_last = colon == std::string::npos ? *n_first : std::stoull(n_range.substr(colon + 1));
        } catch (const std::exception&) {
          throw Error("bad --n-range '" + n_range + "' (expected first:last)");
        }
      }
      return cmd_bound(bound_flags, n_first, n_last);
    }
    if (*gen) return cmd_gen_map(gen_flags, !no_free_corners);
  } catch (const std::exception& e) {
    std::cerr << "mspp: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
