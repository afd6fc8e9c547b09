#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mspp/node_index.hpp"

namespace mspp {

// Binary occupancy over 2^{d*depth} unit cells. Cell (c_0, ..., c_{d-1}) is
// stored at sum_j c_j * 2^{depth*j}, so axis 0 is fastest.
class GridWorld {
 public:
  GridWorld() = default;
  GridWorld(int dim, int depth);  // all free
  GridWorld(int dim, int depth, std::vector<std::uint8_t> cells);

  int dim() const { return dim_; }
  int depth() const { return depth_; }
  std::int64_t side() const { return std::int64_t{1} << depth_; }
  std::size_t cell_count() const { return cells_.size(); }

  bool occupied(std::size_t linear) const { return cells_[linear] != 0; }
  bool occupied(std::span<const std::int64_t> cell) const { return cells_[linear_index(cell)] != 0; }
  void set(std::size_t linear, bool obstacle) { cells_[linear] = obstacle ? 1 : 0; }
  void set(std::span<const std::int64_t> cell, bool obstacle) { set(linear_index(cell), obstacle); }

  std::size_t linear_index(std::span<const std::int64_t> cell) const;
  void cell_coords(std::size_t linear, std::span<std::int64_t> out) const;
  bool in_bounds(std::span<const std::int64_t> cell) const;

  // Unit cell containing a world point (half-open cells); throws when outside.
  std::size_t cell_at(std::span<const double> point) const;

  std::size_t obstacle_count() const;
  const std::vector<std::uint8_t>& cells() const { return cells_; }

  bool operator==(const GridWorld&) const = default;

 private:
  int dim_ = 0;
  int depth_ = 0;
  std::vector<std::uint8_t> cells_;
};

// Map text format: "d depth\n" followed by 2^{d*depth} '0'/'1' characters and
// a newline. write_map produces exactly that; read_map accepts it back.
void write_map(std::ostream& out, const GridWorld& world);
GridWorld read_map(std::istream& in);
void save_map(const std::string& path, const GridWorld& world);
GridWorld load_map(const std::string& path);

}  // namespace mspp
