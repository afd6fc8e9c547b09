#include "mspp/grid_world.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

namespace mspp {
namespace {

std::size_t expected_cells(int dim, int depth) {
  if (dim < 1 || dim > kMaxDim) throw Error(fmt::format("dimension {} outside [1, {}]", dim, kMaxDim));
  if (depth < 0 || dim * depth > 34) throw Error(fmt::format("grid 2^({}*{}) is too large", dim, depth));
  return std::size_t{1} << (dim * depth);
}

}  // namespace

GridWorld::GridWorld(int dim, int depth)
    : dim_(dim), depth_(depth), cells_(expected_cells(dim, depth), 0) {}

GridWorld::GridWorld(int dim, int depth, std::vector<std::uint8_t> cells)
    : dim_(dim), depth_(depth), cells_(std::move(cells)) {
  const std::size_t want = expected_cells(dim, depth);
  if (cells_.size() != want) {
    throw Error(fmt::format("grid has {} cells, expected 2^({}*{}) = {}", cells_.size(), dim, depth, want));
  }
  for (auto& c : cells_) {
    if (c > 1) throw Error("grid cells must be 0 or 1");
  }
}

std::size_t GridWorld::linear_index(std::span<const std::int64_t> cell) const {
  std::size_t linear = 0;
  for (int j = dim_ - 1; j >= 0; --j) linear = (linear << depth_) | static_cast<std::size_t>(cell[j]);
  return linear;
}

void GridWorld::cell_coords(std::size_t linear, std::span<std::int64_t> out) const {
  const std::size_t mask = (std::size_t{1} << depth_) - 1;
  for (int j = 0; j < dim_; ++j) {
    out[j] = static_cast<std::int64_t>(linear & mask);
    linear >>= depth_;
  }
}

bool GridWorld::in_bounds(std::span<const std::int64_t> cell) const {
  for (int j = 0; j < dim_; ++j) {
    if (cell[j] < 0 || cell[j] >= side()) return false;
  }
  return true;
}

std::size_t GridWorld::cell_at(std::span<const double> point) const {
  std::array<std::int64_t, kMaxDim> cell{};
  const double extent = static_cast<double>(side());
  for (int j = 0; j < dim_; ++j) {
    if (!(point[j] >= 0.0 && point[j] < extent)) {
      throw Error(fmt::format("point coordinate {} on axis {} is outside [0, {})", point[j], j, extent));
    }
    cell[j] = static_cast<std::int64_t>(std::floor(point[j]));
  }
  return linear_index(std::span<const std::int64_t>(cell.data(), dim_));
}

std::size_t GridWorld::obstacle_count() const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

void write_map(std::ostream& out, const GridWorld& world) {
  out << world.dim() << ' ' << world.depth() << '\n';
  std::string line(world.cell_count(), '0');
  for (std::size_t i = 0; i < world.cell_count(); ++i) {
    if (world.occupied(i)) line[i] = '1';
  }
  out << line << '\n';
}

GridWorld read_map(std::istream& in) {
  int dim = 0;
  int depth = 0;
  if (!(in >> dim >> depth)) throw Error("map header must be 'd depth'");
  std::string rest;
  std::getline(in, rest);
  if (rest.find_first_not_of(" \t\r") != std::string::npos) throw Error("unexpected text after map header");
  const std::size_t want = expected_cells(dim, depth);
  std::string line;
  if (!std::getline(in, line)) throw Error("map is missing its cell line");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line.size() != want) {
    throw Error(fmt::format("map cell line has {} characters, expected {}", line.size(), want));
  }
  std::vector<std::uint8_t> cells(want);
  for (std::size_t i = 0; i < want; ++i) {
    if (line[i] != '0' && line[i] != '1') throw Error(fmt::format("invalid map character '{}' at {}", line[i], i));
    cells[i] = line[i] == '1' ? 1 : 0;
  }
  return GridWorld(dim, depth, std::move(cells));
}

void save_map(const std::string& path, const GridWorld& world) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_map(out, world);
  if (!out) throw Error("failed writing '" + path + "'");
}

GridWorld load_map(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open map file '" + path + "'");
  return read_map(in);
}

}  // namespace mspp
