#include "mspp/predicates.hpp"

#include <cmath>
#include <sstream>

#include <fmt/format.h>

namespace mspp {
namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw Error("not a number: '" + s + "'");
  }
  if (used != s.size()) throw Error("not a number: '" + s + "'");
  return v;
}

std::vector<double> parse_numbers(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split(s, ',')) out.push_back(parse_number(item));
  return out;
}

}  // namespace

bool GridPredicate::is_obstacle(std::span<const double> point) const {
  return world_.occupied(world_.cell_at(point));
}

SpheresPredicate::SpheresPredicate(int dim, std::vector<Sphere> spheres) : dim_(dim), spheres_(std::move(spheres)) {
  for (const auto& s : spheres_) {
    if (static_cast<int>(s.center.size()) != dim_) throw Error("sphere center has the wrong dimension");
    if (!(s.radius >= 0)) throw Error("sphere radius must be non-negative");
  }
}

bool SpheresPredicate::is_obstacle(std::span<const double> point) const {
  for (const auto& s : spheres_) {
    double dist2 = 0;
    for (int j = 0; j < dim_; ++j) {
      const double delta = point[j] - s.center[j];
      dist2 += delta * delta;
    }
    if (dist2 <= s.radius * s.radius) return true;
  }
  return false;
}

CheckerboardPredicate::CheckerboardPredicate(int dim, double period) : dim_(dim), period_(period) {
  if (!(period > 0)) throw Error("checkerboard period must be positive");
}

bool CheckerboardPredicate::is_obstacle(std::span<const double> point) const {
  long long parity = 0;
  for (int j = 0; j < dim_; ++j) parity += static_cast<long long>(std::floor(point[j] / period_));
  return (parity & 1) != 0;
}

WallWithGapPredicate::WallWithGapPredicate(int dim, int depth, int axis, double position, double gap)
    : dim_(dim), axis_(axis), position_(position) {
  if (axis < 0 || axis >= dim) throw Error(fmt::format("wall axis {} outside [0, {})", axis, dim));
  if (!(gap >= 0)) throw Error("wall gap must be non-negative");
  const double extent = std::ldexp(1.0, depth);
  gap_lo_ = 0.5 * (extent - gap);
  gap_hi_ = 0.5 * (extent + gap);
}

bool WallWithGapPredicate::is_obstacle(std::span<const double> point) const {
  if (std::floor(point[axis_]) != position_) return false;
  for (int j = 0; j < dim_; ++j) {
    if (j == axis_) continue;
    if (point[j] < gap_lo_ || point[j] >= gap_hi_) return true;
  }
  return dim_ == 1;
}

std::unique_ptr<ObstaclePredicate> parse_predicate(const std::string& text, int dim, int depth) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "spheres") {
    std::vector<Sphere> spheres;
    for (const auto& item : split(args, ';')) {
      auto values = parse_numbers(item);
      if (static_cast<int>(values.size()) != dim + 1) {
        throw Error(fmt::format("sphere '{}' needs {} center coordinates and a radius", item, dim));
      }
      Sphere s;
      s.radius = values.back();
      values.pop_back();
      s.center = std::move(values);
      spheres.push_back(std::move(s));
    }
    return std::make_unique<SpheresPredicate>(dim, std::move(spheres));
  }
  if (kind == "checkerboard") {
    const auto values = parse_numbers(args);
    if (values.size() != 1) throw Error("checkerboard takes one argument: period");
    return std::make_unique<CheckerboardPredicate>(dim, values[0]);
  }
  if (kind == "wall-with-gap") {
    const auto values = parse_numbers(args);
    if (values.size() != 3) throw Error("wall-with-gap takes three arguments: axis,position,gap");
    return std::make_unique<WallWithGapPredicate>(dim, depth, static_cast<int>(values[0]), values[1], values[2]);
  }
  throw Error("unknown predicate '" + kind + "' (expected spheres, checkerboard or wall-with-gap)");
}

GridWorld rasterize(const ObstaclePredicate& pred, int depth) {
  GridWorld world(pred.dim(), depth);
  std::array<std::int64_t, kMaxDim> cell{};
  std::array<double, kMaxDim> point{};
  const int dim = pred.dim();
  for (std::size_t i = 0; i < world.cell_count(); ++i) {
    world.cell_coords(i, std::span<std::int64_t>(cell.data(), dim));
    for (int j = 0; j < dim; ++j) point[j] = static_cast<double>(cell[j]) + 0.5;
    if (pred.is_obstacle(std::span<const double>(point.data(), dim))) world.set(i, true);
  }
  return world;
}

}  // namespace mspp
