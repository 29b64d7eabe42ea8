#include "wassreg/grid.hpp"

#include "wassreg/errors.hpp"

namespace wassreg {

ProbGrid::ProbGrid(Eigen::VectorXd points, Eigen::VectorXd weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.size() == 0) throw invalid_input("grid must be non-empty");
  if (points_.size() != weights_.size())
    throw invalid_input("grid points and weights must have equal length");
  for (int k = 0; k < points_.size(); ++k) {
    if (!(points_[k] > 0.0 && points_[k] < 1.0))
      throw invalid_input("grid points must lie strictly inside (0,1)");
    if (k > 0 && !(points_[k] > points_[k - 1]))
      throw invalid_input("grid points must be strictly increasing");
    if (!(weights_[k] > 0.0)) throw invalid_input("grid weights must be positive");
  }
}

GridPtr ProbGrid::midpoint(int m) {
  if (m < 2) throw invalid_input("midpoint grid needs at least 2 points");
  Eigen::VectorXd pts(m), w(m);
  for (int k = 0; k < m; ++k) {
    pts[k] = (k + 0.5) / m;
    w[k] = 1.0 / m;
  }
  return std::make_shared<const ProbGrid>(std::move(pts), std::move(w));
}

bool ProbGrid::same_as(const ProbGrid& other) const {
  if (this == &other) return true;
  return points_.size() == other.points_.size() && points_ == other.points_ &&
         weights_ == other.weights_;
}

void require_same_grid(const GridPtr& a, const GridPtr& b) {
  if (!a || !b) throw incompatible_grid("missing grid");
  if (!a->same_as(*b)) throw incompatible_grid("objects tabulated on different grids");
}

}  // namespace wassreg
