#pragma once

#include <Eigen/Core>
#include <memory>

namespace wassreg {

// Shared discretization of (0,1) on which all quantile functions are
// tabulated.  The default is the midpoint rule p_k = (k - 1/2)/M with
// uniform weights 1/M, which keeps quantile evaluation away from the
// endpoints and turns every inner product into a plain weighted sum.
class ProbGrid {
public:
  ProbGrid(Eigen::VectorXd points, Eigen::VectorXd weights);

  static std::shared_ptr<const ProbGrid> midpoint(int m);

  int size() const { return static_cast<int>(points_.size()); }
  const Eigen::VectorXd& points() const { return points_; }
  const Eigen::VectorXd& weights() const { return weights_; }

  bool same_as(const ProbGrid& other) const;

private:
  Eigen::VectorXd points_;
  Eigen::VectorXd weights_;
};

using GridPtr = std::shared_ptr<const ProbGrid>;

// Throws incompatible_grid if a and b do not share the same discretization.
void require_same_grid(const GridPtr& a, const GridPtr& b);

}  // namespace wassreg
