#pragma once

// Dyadic cell addressing.
//
// A cell at scale k has side 2^k world units. Centers are kept as doubled
// integer coordinates (p2 = 2p) so that half-integer centers of unit cells
// are exact and every neighbor/containment test is integer arithmetic.
//
//   lower corner = (p2 - 2^k) / 2      upper corner = (p2 + 2^k) / 2
//
// Child i of a cell uses sign +1 on axis j when bit j of i is set, so axis 0
// varies fastest (same order as the map file).

#include <array>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mspp {

inline constexpr int kMaxDim = 8;

using Coord2 = std::array<std::int32_t, kMaxDim>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NodeIndex {
  int k = 0;
  Coord2 p2{};  // components past dim stay zero
  int dim = 0;

  auto operator<=>(const NodeIndex&) const = default;

  double center(int axis) const { return 0.5 * p2[axis]; }
  std::int64_t side() const { return std::int64_t{1} << k; }
  // Integer unit-cell coordinates of the cell's bounds (half-open [low, high)).
  std::int64_t low(int axis) const { return (std::int64_t{p2[axis]} - side()) / 2; }
  std::int64_t high(int axis) const { return (std::int64_t{p2[axis]} + side()) / 2; }

  static NodeIndex root(int dim, int depth);
  // Cell of scale k whose lower corner is `lower` (unit-cell coordinates).
  static NodeIndex from_lower(int dim, int k, std::span<const std::int64_t> lower);
};

struct NodeIndexHash {
  std::size_t operator()(const NodeIndex& idx) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(idx.k);
    for (int i = 0; i < idx.dim; ++i) {
      h ^= static_cast<std::uint32_t>(idx.p2[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

// Checks the scale/lattice/bounds invariants for a world of the given depth.
bool is_valid(const NodeIndex& idx, int depth);

// Numbers every node of a world level by level, for flat per-node tables.
// Meant for small worlds: the table size is about 2^{d*depth}.
class DenseNodeNumbering {
 public:
  DenseNodeNumbering() = default;
  DenseNodeNumbering(int dim, int depth);
  std::size_t size() const { return size_; }
  // idx must be valid for this world.
  std::size_t slot(const NodeIndex& idx) const {
    const int bits = depth_ - idx.k;
    std::size_t linear = 0;
    for (int j = 0; j < idx.dim; ++j) {
      linear |= static_cast<std::size_t>((std::int64_t{idx.p2[j]} - idx.side()) >> (idx.k + 1)) << (bits * j);
    }
    return offset_[idx.k] + linear;
  }

 private:
  int depth_ = 0;
  std::size_t size_ = 0;
  std::vector<std::size_t> offset_;
};

// Child `i` in [0, 2^d); throws Error when idx.k == 0.
NodeIndex child(const NodeIndex& idx, int i);
std::vector<NodeIndex> children(const NodeIndex& idx);
// Index of the child of `parent` whose half-open hypercube holds the point.
inline int child_slot_toward(const NodeIndex& parent, const Coord2& point2) {
  int slot = 0;
  for (int j = 0; j < parent.dim; ++j) slot |= (point2[j] >= parent.p2[j]) << j;
  return slot;
}
NodeIndex parent(const NodeIndex& idx);

// True if idx is `ancestor` itself or lies inside it.
bool is_descendant_or_self(const NodeIndex& idx, const NodeIndex& ancestor);
// Doubled point strictly inside the open hypercube of idx.
bool contains_strictly(const NodeIndex& idx, const Coord2& point2);
// Half-open containment of a world-space point.
bool contains_point(const NodeIndex& idx, std::span<const double> point);

// Squared Euclidean distance between centers, in doubled units (4x world).
inline std::int64_t center_dist2_doubled(const NodeIndex& a, const NodeIndex& b) {
  std::int64_t s = 0;
  for (int j = 0; j < a.dim; ++j) {
    const std::int64_t delta = std::int64_t{a.p2[j]} - b.p2[j];
    s += delta * delta;
  }
  return s;
}

inline double center_distance(const NodeIndex& a, const NodeIndex& b) {
  return 0.5 * std::sqrt(static_cast<double>(center_dist2_doubled(a, b)));
}

std::string to_string(const NodeIndex& idx);

// One of the 2d face directions. Canonical order: +axis0, +axis1, ...,
// then -axis0, -axis1, ... (b_i = d_i for i <= d, -d_i otherwise).
struct Direction {
  int axis = 0;
  int sign = 1;

  auto operator<=>(const Direction&) const = default;

  static Direction from_ordinal(int dim, int ordinal) {
    return ordinal < dim ? Direction{ordinal, 1} : Direction{ordinal - dim, -1};
  }
  Direction opposite() const { return {axis, -sign}; }
};

}  // namespace mspp
