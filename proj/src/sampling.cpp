#include "mspp/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "mspp/occupancy_tree.hpp"

namespace mspp {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

CounterRng CounterRng::for_node(std::uint64_t seed, const NodeIndex& idx) {
  std::uint64_t key = splitmix64(seed ^ 0x6a09e667f3bcc909ULL);
  key = splitmix64(key ^ static_cast<std::uint64_t>(idx.k));
  for (int j = 0; j < idx.dim; ++j) key = splitmix64(key ^ static_cast<std::uint32_t>(idx.p2[j]));
  return CounterRng(key);
}

CounterRng::result_type CounterRng::operator()() {
  return splitmix64(key_ + 0x9e3779b97f4a7c15ULL * (counter_++));
}

std::uint64_t CounterRng::below(std::uint64_t bound) {
  const std::uint64_t limit = max() - max() % bound;
  for (;;) {
    const std::uint64_t x = (*this)();
    if (x < limit) return x % bound;
  }
}

SampleEstimate estimate_value(const NodeIndex& idx, const ObstaclePredicate& pred, std::uint32_t n, CounterRng& rng,
                              SamplingScheme scheme) {
  if (n == 0) throw Error("sample count must be at least 1");
  SampleEstimate est{idx, n, 0};
  std::array<double, kMaxDim> point{};
  const std::span<const double> view(point.data(), idx.dim);
  const double side = static_cast<double>(idx.side());
  for (std::uint32_t s = 0; s < n; ++s) {
    for (int j = 0; j < idx.dim; ++j) {
      const double low = static_cast<double>(idx.low(j));
      if (scheme == SamplingScheme::kUnitCell) {
        point[j] = low + static_cast<double>(rng.bits(idx.k)) + 0.5;
      } else {
        point[j] = low + rng.uniform01() * side;
      }
    }
    if (pred.is_obstacle(view)) ++est.hits;
  }
  return est;
}

double exact_value(const NodeIndex& idx, const ObstaclePredicate& pred) {
  const std::uint64_t cells = std::uint64_t{1} << (idx.dim * idx.k);
  const std::uint64_t mask = (std::uint64_t{1} << idx.k) - 1;
  std::array<double, kMaxDim> point{};
  const std::span<const double> view(point.data(), idx.dim);
  std::uint64_t hits = 0;
  for (std::uint64_t c = 0; c < cells; ++c) {
    for (int j = 0; j < idx.dim; ++j) {
      point[j] = static_cast<double>(idx.low(j) + static_cast<std::int64_t>((c >> (idx.k * j)) & mask)) + 0.5;
    }
    if (pred.is_obstacle(view)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(cells);
}

const SampleEstimate& SampleCache::estimate(const NodeIndex& idx, const ObstaclePredicate& pred) {
  auto it = cache_.find(idx);
  if (it != cache_.end()) return it->second;
  CounterRng rng = CounterRng::for_node(seed_, idx);
  return cache_.emplace(idx, estimate_value(idx, pred, n_, rng, scheme_)).first->second;
}

bool is_eps_gamma_obstacle_value(double v_hat, int dim, int k, double eps, double gamma) {
  return v_hat >= 1.0 - std::ldexp(eps, -dim * k) + gamma;
}

bool is_eps_gamma_obstacle(const SampleEstimate& est, int dim, double eps, double gamma) {
  return is_eps_gamma_obstacle_value(est.value(), dim, est.idx.k, eps, gamma);
}

int k_max(int dim, double eps, double gamma) {
  if (dim < 1 || !(eps > 0) || !(gamma > 0)) throw Error("k_max needs d >= 1, eps > 0, gamma > 0");
  // Start from the floating estimate, then settle on the smallest k with
  // 2^{dk} gamma >= eps using exact power-of-two scaling.
  int k = static_cast<int>(std::ceil(std::log2(eps / gamma) / dim));
  auto reaches = [&](int kk) { return std::ldexp(gamma, dim * kk) >= eps; };
  while (!reaches(k)) ++k;
  while (reaches(k - 1)) --k;
  return k;
}

int k_min(int dim, std::uint64_t n) {
  if (dim < 1 || n < 1) throw Error("k_min needs d >= 1 and n >= 1");
  int k = 0;
  while (dim * (k + 1) < 64 && (std::uint64_t{1} << (dim * (k + 1))) <= n) ++k;
  return k;
}

double misclassification_bound(double gamma, double n) { return std::exp(-2.0 * gamma * gamma * n); }

double nb_occ(int depth, int dim, int kmin, int kmax) {
  if (kmin >= kmax - 1) return 0.0;
  const double hi = std::ldexp(1.0, dim * (depth - kmin));
  const double lo = std::ldexp(1.0, dim * (depth - kmax + 1));
  return (hi - lo) / (std::ldexp(1.0, dim) - 1.0);
}

void validate(const BoundParams& p) {
  if (p.dim < 1) throw Error("bound: d must be >= 1");
  if (p.depth < 1) throw Error("bound: depth must be >= 1");
  if (!(p.eps > 0 && p.eps < 1)) throw Error("bound: eps must lie in (0, 1)");
  if (!(p.gamma > 0)) throw Error("bound: gamma must be > 0");
  if (p.n < 1) throw Error("bound: n must be >= 1");
  if (!(p.regions >= 1)) throw Error("bound: Z must be >= 1");
}

double failure_bound(const BoundParams& p) {
  validate(p);
  const int kmin = k_min(p.dim, p.n);
  const int kmax = k_max(p.dim, p.eps, p.gamma);
  const double occurrences = nb_occ(p.depth, p.dim, kmin, kmax);
  if (occurrences <= 0) return 0.0;
  const double rate = 2.0 * p.gamma * p.gamma * static_cast<double>(p.n);
  // 1 - exp(-rate), then 1 - (.)^{nb/Z} through expm1/log to keep precision
  // when exp(-rate) is close to 1.
  const double miss = -std::expm1(-rate);
  const double one_region = -std::expm1((occurrences / p.regions) * std::log(miss));
  const double bound = std::pow(one_region, p.regions);
  return std::clamp(bound, 0.0, 1.0);
}

Classification hybrid_classify(const NodeIndex& idx, const ObstaclePredicate& pred, double eps, double gamma,
                               std::uint32_t n, CounterRng& rng, SamplingScheme scheme) {
  Classification c;
  if (idx.k <= k_min(idx.dim, n)) {
    c.method = ClassifyMethod::kExact;
    c.value = exact_value(idx, pred);
    c.obstacle = is_eps_obstacle_value(c.value, idx.dim, idx.k, eps);
  } else {
    c.method = ClassifyMethod::kSampled;
    const SampleEstimate est = estimate_value(idx, pred, n, rng, scheme);
    c.value = est.value();
    c.obstacle = is_eps_gamma_obstacle(est, idx.dim, eps, gamma);
  }
  return c;
}

namespace {

// Dense classifier tables cover worlds of up to 2^22 unit cells.
constexpr int kMaxDenseCellBits = 22;

}  // namespace

HybridClassifier::HybridClassifier(const ObstaclePredicate& pred, const HybridParams& params, int depth)
    : pred_(pred), params_(params), kmin_(k_min(pred.dim(), params.samples)), depth_(depth) {
  if (depth < 0 || pred.dim() * depth > kMaxDenseCellBits) return;
  numbering_ = DenseNodeNumbering(pred.dim(), depth);
  dense_.assign(numbering_.size(), 0);
}

bool HybridClassifier::cached(const NodeIndex& idx) const {
  if (!dense_.empty()) return dense_[numbering_.slot(idx)] != 0;
  return sparse_.contains(idx);
}

std::int32_t HybridClassifier::classify_id(const NodeIndex& idx) {
  std::int32_t* slot = nullptr;
  if (!dense_.empty()) {
    if (idx.dim != pred_.dim() || !is_valid(idx, depth_)) {
      throw Error("classify: " + to_string(idx) + " is outside the world");
    }
    slot = &dense_[numbering_.slot(idx)];
    if (*slot != 0) return *slot - 1;
  } else {
    auto it = sparse_.find(idx);
    if (it != sparse_.end()) return it->second;
  }
  CounterRng rng = CounterRng::for_node(params_.seed, idx);
  const Classification& c = entries_.emplace_back(
      hybrid_classify(idx, pred_, params_.eps, params_.gamma, params_.samples, rng, params_.scheme));
  if (c.method == ClassifyMethod::kSampled) ++sampled_;
  const auto id = static_cast<std::int32_t>(entries_.size() - 1);
  if (slot) {
    *slot = id + 1;
  } else {
    sparse_.emplace(idx, id);
  }
  return id;
}

}  // namespace mspp
