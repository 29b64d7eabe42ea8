#pragma once

#include <Eigen/Core>
#include <vector>

#include "wassreg/grid.hpp"

namespace wassreg {

// Non-decreasing cdf curve on ordered abscissae.  Jumps are encoded by
// repeated xs entries with distinct Fvals, flat stretches by repeated Fvals.
struct CdfCurve {
  Eigen::VectorXd xs;
  Eigen::VectorXd fvals;

  CdfCurve(Eigen::VectorXd xs_, Eigen::VectorXd fvals_);
};

// Unordered raw observations drawn from one distribution.
struct SampleSet {
  std::vector<double> values;

  explicit SampleSet(std::vector<double> v);
};

// A probability distribution represented by its quantile function tabulated
// on a shared ProbGrid.  Canonical object of the library: every formula
// reduces to arithmetic on qvals at shared grid points.
class DistributionQ {
public:
  // Validates monotonicity.  Violations below `repair_tol` are repaired by
  // pool-adjacent-violators; larger violations throw.
  DistributionQ(GridPtr grid, Eigen::VectorXd qvals);

  const GridPtr& grid() const { return grid_; }
  const Eigen::VectorXd& qvals() const { return qvals_; }
  int size() const { return static_cast<int>(qvals_.size()); }

  // Strictly increasing qvals, i.e. no atoms.
  bool atomless() const;

  static constexpr double kMonotoneTol = 1e-12;
  static constexpr double kRepairTol = 1e-8;

private:
  GridPtr grid_;
  Eigen::VectorXd qvals_;
};

// Left-continuous inverse Q(p) = inf{r : F(r) >= p} evaluated at the grid.
DistributionQ quantile_from_cdf(const CdfCurve& cdf, const GridPtr& grid);

// Right-continuous inversion F(r) = sup{p : Q(p) <= r} on the distinct qvals.
CdfCurve cdf_from_quantile(const DistributionQ& d);

// Interpolated empirical quantile function: for p in [(i-0.5)/m, (i+0.5)/m]
// interpolate between the i-th and (i+1)-th order statistics, clamped to the
// extreme order statistics at the tails.  Ties between order statistics are
// broken by an epsilon ramp so the output is strictly increasing whenever the
// sample has at least two distinct values.
DistributionQ estimate_distribution(const SampleSet& s, const GridPtr& grid);

// L2-Wasserstein distance: sqrt(sum_k w_k (a_k - b_k)^2).
double wasserstein_distance(const DistributionQ& a, const DistributionQ& b);

}  // namespace wassreg
