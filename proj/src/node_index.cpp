#include "mspp/node_index.hpp"

#include <cmath>

#include <fmt/format.h>

namespace mspp {

NodeIndex NodeIndex::root(int dim, int depth) {
  if (dim < 1 || dim > kMaxDim) throw Error(fmt::format("dimension {} outside [1, {}]", dim, kMaxDim));
  if (depth < 0 || depth > 24) throw Error(fmt::format("depth {} outside [0, 24]", depth));
  NodeIndex idx;
  idx.k = depth;
  idx.dim = dim;
  for (int i = 0; i < dim; ++i) idx.p2[i] = std::int32_t{1} << depth;
  return idx;
}

NodeIndex NodeIndex::from_lower(int dim, int k, std::span<const std::int64_t> lower) {
  NodeIndex idx;
  idx.k = k;
  idx.dim = dim;
  for (int i = 0; i < dim; ++i) idx.p2[i] = static_cast<std::int32_t>(2 * lower[i] + (std::int64_t{1} << k));
  return idx;
}

bool is_valid(const NodeIndex& idx, int depth) {
  if (idx.dim < 1 || idx.dim > kMaxDim || idx.k < 0 || idx.k > depth) return false;
  const std::int64_t step = std::int64_t{1} << (idx.k + 1);
  const std::int64_t world2 = std::int64_t{2} << depth;
  for (int i = 0; i < kMaxDim; ++i) {
    if (i >= idx.dim) {
      if (idx.p2[i] != 0) return false;
      continue;
    }
    const std::int64_t c = idx.p2[i];
    if (c <= 0 || c >= world2) return false;
    if (((c - idx.side()) & (step - 1)) != 0) return false;
  }
  return true;
}

NodeIndex child(const NodeIndex& idx, int i) {
  if (idx.k == 0) throw Error("no children: node " + to_string(idx) + " is a unit cell");
  NodeIndex c = idx;
  c.k = idx.k - 1;
  const std::int32_t offset = std::int32_t{1} << (idx.k - 1);  // 2^{k-2} doubled
  for (int j = 0; j < idx.dim; ++j) c.p2[j] += ((i >> j) & 1) ? offset : -offset;
  return c;
}

std::vector<NodeIndex> children(const NodeIndex& idx) {
  std::vector<NodeIndex> out;
  const int n = 1 << idx.dim;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(child(idx, i));
  return out;
}

NodeIndex parent(const NodeIndex& idx) {
  NodeIndex p = idx;
  p.k = idx.k + 1;
  const std::int64_t side = std::int64_t{1} << p.k;
  for (int j = 0; j < idx.dim; ++j) {
    const std::int64_t low = idx.low(j);
    const std::int64_t plow = (low / side) * side;
    p.p2[j] = static_cast<std::int32_t>(2 * plow + side);
  }
  return p;
}

bool is_descendant_or_self(const NodeIndex& idx, const NodeIndex& ancestor) {
  if (idx.k > ancestor.k) return false;
  for (int j = 0; j < idx.dim; ++j) {
    if (idx.low(j) < ancestor.low(j) || idx.high(j) > ancestor.high(j)) return false;
  }
  return true;
}

bool contains_strictly(const NodeIndex& idx, const Coord2& point2) {
  const std::int64_t side = idx.side();
  for (int j = 0; j < idx.dim; ++j) {
    const std::int64_t delta = std::int64_t{point2[j]} - idx.p2[j];
    if (delta <= -side || delta >= side) return false;
  }
  return true;
}

bool contains_point(const NodeIndex& idx, std::span<const double> point) {
  for (int j = 0; j < idx.dim; ++j) {
    const double x = point[j];
    if (x < static_cast<double>(idx.low(j)) || x >= static_cast<double>(idx.high(j))) return false;
  }
  return true;
}

std::string to_string(const NodeIndex& idx) {
  std::string s = fmt::format("(k={}; ", idx.k);
  for (int j = 0; j < idx.dim; ++j) s += fmt::format("{}{}", j ? "," : "", idx.center(j));
  return s + ")";
}

DenseNodeNumbering::DenseNodeNumbering(int dim, int depth) : depth_(depth) {
  for (int k = 0; k <= depth; ++k) {
    offset_.push_back(size_);
    size_ += std::size_t{1} << (dim * (depth - k));
  }
}

}  // namespace mspp
