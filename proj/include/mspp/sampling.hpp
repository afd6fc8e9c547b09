#pragma once

// Sampling-based occupancy estimation and the failure bounds that go with it.

#include <cstdint>
#include <span>
#include <unordered_map>

#include "mspp/node_index.hpp"

namespace mspp {

// Point membership query; true means obstacle. Must be pure.
class ObstaclePredicate {
 public:
  virtual ~ObstaclePredicate() = default;
  virtual int dim() const = 0;
  virtual bool is_obstacle(std::span<const double> point) const = 0;
};

// Counter-based generator: output i of stream `key` is splitmix64(key + i*phi),
// so a node's stream does not depend on how many draws other nodes made.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key, std::uint64_t counter = 0) : key_(key), counter_(counter) {}
  static CounterRng for_node(std::uint64_t seed, const NodeIndex& idx);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()();

  double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  // Uniform integer in [0, 2^bits), bits <= 64.
  std::uint64_t bits(int count) { return count == 0 ? 0 : (*this)() >> (64 - count); }
  // Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound);

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

std::uint64_t splitmix64(std::uint64_t x);

enum class SamplingScheme {
  kUnitCell,    // pick one of the 2^{dk} unit cells, query its center
  kContinuous,  // query a uniform point of the hypercube
};

struct SampleEstimate {
  NodeIndex idx;
  std::uint32_t n = 0;
  std::uint32_t hits = 0;
  double value() const { return n ? static_cast<double>(hits) / n : 0.0; }
};

SampleEstimate estimate_value(const NodeIndex& idx, const ObstaclePredicate& pred, std::uint32_t n, CounterRng& rng,
                              SamplingScheme scheme = SamplingScheme::kUnitCell);

// Exact obstacle fraction from the predicate: one query per unit cell center.
double exact_value(const NodeIndex& idx, const ObstaclePredicate& pred);

// Per-node estimate cache; each node draws from its own seeded stream.
class SampleCache {
 public:
  SampleCache(std::uint64_t seed, std::uint32_t n, SamplingScheme scheme = SamplingScheme::kUnitCell)
      : seed_(seed), n_(n), scheme_(scheme) {}

  const SampleEstimate& estimate(const NodeIndex& idx, const ObstaclePredicate& pred);
  std::size_t size() const { return cache_.size(); }

 private:
  std::uint64_t seed_;
  std::uint32_t n_;
  SamplingScheme scheme_;
  std::unordered_map<NodeIndex, SampleEstimate, NodeIndexHash> cache_;
};

// V_hat >= 1 - 2^{-dk} eps + gamma
bool is_eps_gamma_obstacle(const SampleEstimate& est, int dim, double eps, double gamma);
bool is_eps_gamma_obstacle_value(double v_hat, int dim, int k, double eps, double gamma);

// ceil((1/d) log2(eps/gamma)); smallest k with 2^{dk} gamma >= eps.
int k_max(int dim, double eps, double gamma);
// floor((1/d) log2 n); largest k with 2^{dk} <= n.
int k_min(int dim, std::uint64_t n);

// exp(-2 gamma^2 n)
double misclassification_bound(double gamma, double n);

// sum_{k_min < k < k_max} 2^{d(depth-k)} in closed form; real-valued.
double nb_occ(int depth, int dim, int kmin, int kmax);

struct BoundParams {
  int depth = 5;
  int dim = 1;
  double eps = 0.9;
  double gamma = 0.0035;
  std::uint64_t n = 1;
  double regions = 1;  // Z
};

void validate(const BoundParams& params);

// (1 - (1 - exp(-2 gamma^2 n))^{nb_occ / Z})^Z, clamped to [0, 1].
double failure_bound(const BoundParams& params);

enum class ClassifyMethod { kExact, kSampled };

struct Classification {
  double value = 0.0;
  bool obstacle = false;
  ClassifyMethod method = ClassifyMethod::kExact;
};

struct HybridParams {
  double eps = 0.5;
  double gamma = 0.05;
  std::uint32_t samples = 256;
  std::uint64_t seed = 0;
  SamplingScheme scheme = SamplingScheme::kUnitCell;
};

// Exact counting and the eps test for k <= k_min; sampling and the eps,gamma test above it.
Classification hybrid_classify(const NodeIndex& idx, const ObstaclePredicate& pred, double eps, double gamma,
                               std::uint32_t n, CounterRng& rng, SamplingScheme scheme = SamplingScheme::kUnitCell);

// Cached hybrid classification for one planning session. Each node is
// evaluated at most once; its random stream comes from (seed, node).
class HybridClassifier {
 public:
  // With a known depth and a small world the cache is a dense per-level
  // table instead of a hash map.
  HybridClassifier(const ObstaclePredicate& pred, const HybridParams& params, int depth = -1);

  Classification classify(const NodeIndex& idx) { return entries_[classify_id(idx)]; }
  // Classifies on first use; ids number evaluated nodes from 0.
  std::int32_t classify_id(const NodeIndex& idx);
  // Valid until the next classification.
  const Classification& entry(std::int32_t id) const { return entries_[id]; }
  bool cached(const NodeIndex& idx) const;
  std::size_t evaluated() const { return entries_.size(); }
  std::size_t sampled() const { return sampled_; }
  int kmin() const { return kmin_; }

 private:
  const ObstaclePredicate& pred_;
  HybridParams params_;
  int kmin_;
  int depth_ = -1;
  std::size_t sampled_ = 0;
  std::vector<Classification> entries_;
  DenseNodeNumbering numbering_;
  std::vector<std::int32_t> dense_;  // entry number + 1, or 0
  std::unordered_map<NodeIndex, std::int32_t, NodeIndexHash> sparse_;
};

}  // namespace mspp
