#pragma once

// Obstacle predicates usable in place of a precomputed map.
//
// Text syntax (parse_predicate):
//   spheres:c1,...,cd,r;c1,...,cd,r;...   union of closed balls
//   checkerboard:P                         obstacle where sum_j floor(x_j/P) is odd
//   wall-with-gap:A,X,G                    unit-thick slab floor(x_A) == X, open
//                                          where every other coordinate lies in
//                                          the centered window of width G

#include <memory>
#include <string>
#include <vector>

#include "mspp/grid_world.hpp"
#include "mspp/occupancy_tree.hpp"
#include "mspp/sampling.hpp"

namespace mspp {

// Occupancy of the unit cell containing the point (half-open cells).
// Throws Error for points outside the world. Holds a reference to `world`.
class GridPredicate final : public ObstaclePredicate {
 public:
  explicit GridPredicate(const GridWorld& world) : world_(world) {}
  int dim() const override { return world_.dim(); }
  bool is_obstacle(std::span<const double> point) const override;

 private:
  const GridWorld& world_;
};

inline GridPredicate grid_predicate(const GridWorld& world) { return GridPredicate(world); }

struct Sphere {
  std::vector<double> center;
  double radius = 0;
};

class SpheresPredicate final : public ObstaclePredicate {
 public:
  SpheresPredicate(int dim, std::vector<Sphere> spheres);
  int dim() const override { return dim_; }
  bool is_obstacle(std::span<const double> point) const override;

 private:
  int dim_;
  std::vector<Sphere> spheres_;
};

class CheckerboardPredicate final : public ObstaclePredicate {
 public:
  CheckerboardPredicate(int dim, double period);
  int dim() const override { return dim_; }
  bool is_obstacle(std::span<const double> point) const override;

 private:
  int dim_;
  double period_;
};

class WallWithGapPredicate final : public ObstaclePredicate {
 public:
  WallWithGapPredicate(int dim, int depth, int axis, double position, double gap);
  int dim() const override { return dim_; }
  bool is_obstacle(std::span<const double> point) const override;

 private:
  int dim_;
  int axis_;
  double position_;
  double gap_lo_;
  double gap_hi_;
};

std::unique_ptr<ObstaclePredicate> parse_predicate(const std::string& text, int dim, int depth);

// Evaluates the predicate at every unit cell center.
GridWorld rasterize(const ObstaclePredicate& pred, int depth);

}  // namespace mspp
