#include "wassreg/distribution.hpp"

#include <algorithm>
#include <cmath>

#include "wassreg/errors.hpp"
#include "wassreg/pava.hpp"

namespace wassreg {

CdfCurve::CdfCurve(Eigen::VectorXd xs_, Eigen::VectorXd fvals_)
    : xs(std::move(xs_)), fvals(std::move(fvals_)) {
  if (xs.size() == 0 || xs.size() != fvals.size())
    throw invalid_input("cdf curve needs matching non-empty xs and fvals");
  for (int i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(fvals[i]))
      throw invalid_input("cdf curve entries must be finite");
    if (fvals[i] < -1e-12 || fvals[i] > 1.0 + 1e-12)
      throw invalid_input("cdf values must lie in [0,1]");
    if (i > 0 && (xs[i] < xs[i - 1] || fvals[i] < fvals[i - 1]))
      throw invalid_input("cdf curve must be non-decreasing in x and F");
  }
}

SampleSet::SampleSet(std::vector<double> v) : values(std::move(v)) {
  if (values.empty()) throw insufficient_data("sample set must be non-empty");
  for (double x : values)
    if (!std::isfinite(x)) throw invalid_input("sample values must be finite");
}

DistributionQ::DistributionQ(GridPtr grid, Eigen::VectorXd qvals)
    : grid_(std::move(grid)), qvals_(std::move(qvals)) {
  if (!grid_) throw invalid_input("distribution needs a grid");
  if (qvals_.size() != grid_->size())
    throw incompatible_grid("quantile values do not match grid size");
  double worst = 0.0;
  for (int k = 0; k < qvals_.size(); ++k) {
    if (!std::isfinite(qvals_[k])) throw invalid_input("quantile values must be finite");
    if (k > 0) worst = std::max(worst, qvals_[k - 1] - qvals_[k]);
  }
  if (worst > kRepairTol)
    throw monotonicity_violation("quantile values decrease by " + std::to_string(worst));
  if (worst > kMonotoneTol) qvals_ = isotonic_fit(qvals_);
}

bool DistributionQ::atomless() const {
  for (int k = 1; k < qvals_.size(); ++k)
    if (!(qvals_[k] > qvals_[k - 1])) return false;
  return true;
}

DistributionQ quantile_from_cdf(const CdfCurve& cdf, const GridPtr& grid) {
  if (!grid) throw invalid_input("quantile_from_cdf needs a grid");
  const int m = grid->size();
  const auto& xs = cdf.xs;
  const auto& fv = cdf.fvals;
  const int n = static_cast<int>(xs.size());
  if (fv[n - 1] + 1e-12 < grid->points()[m - 1])
    throw domain_error("cdf curve does not cover the upper grid points");
  Eigen::VectorXd q(m);
  int i = 0;
  for (int k = 0; k < m; ++k) {
    const double p = grid->points()[k];
    while (i < n - 1 && fv[i] < p) ++i;
    if (i == 0 || fv[i] == p || xs[i] <= xs[i - 1] || fv[i - 1] >= p) {
      q[k] = xs[i];  // exact level, jump, or p below the first level
    } else {
      const double t = (p - fv[i - 1]) / (fv[i] - fv[i - 1]);
      q[k] = xs[i - 1] + t * (xs[i] - xs[i - 1]);
    }
  }
  return DistributionQ(grid, std::move(q));
}

CdfCurve cdf_from_quantile(const DistributionQ& d) {
  const auto& q = d.qvals();
  const auto& p = d.grid()->points();
  const int m = d.size();
  std::vector<double> xs, fv;
  xs.reserve(m + 1);
  fv.reserve(m + 1);
  for (int k = 0; k < m; ++k) {
    // F(r) = sup{p : Q(p) <= r}: keep the grid level of the *last* index at
    // each distinct quantile value.
    if (!xs.empty() && q[k] == xs.back()) {
      fv.back() = p[k];
    } else {
      xs.push_back(q[k]);
      fv.push_back(p[k]);
    }
  }
  // Final jump to 1 at the top quantile value (sup of the support on the grid).
  xs.push_back(xs.back());
  fv.push_back(1.0);
  return CdfCurve(Eigen::Map<Eigen::VectorXd>(xs.data(), xs.size()),
                  Eigen::Map<Eigen::VectorXd>(fv.data(), fv.size()));
}

DistributionQ estimate_distribution(const SampleSet& s, const GridPtr& grid) {
  if (!grid) throw invalid_input("estimate_distribution needs a grid");
  if (s.values.size() < 2)
    throw insufficient_data("quantile estimation needs at least 2 observations");
  std::vector<double> x = s.values;
  std::sort(x.begin(), x.end());
  const int n = static_cast<int>(x.size());
  const int m = grid->size();
  Eigen::VectorXd q(m);
  for (int k = 0; k < m; ++k) {
    // p in [(i-0.5)/n, (i+0.5)/n] interpolates order statistics i and i+1
    // (1-indexed); clamp to the extreme order statistics at the tails.
    const double t = grid->points()[k] * n - 0.5;
    if (t <= 0.0) {
      q[k] = x.front();
    } else if (t >= n - 1) {
      q[k] = x.back();
    } else {
      const int i = static_cast<int>(std::floor(t));
      const double frac = t - i;
      q[k] = x[i] + frac * (x[i + 1] - x[i]);
    }
  }
  // Tie runs (clamped tails, repeated order statistics) would create atoms;
  // an epsilon ramp keeps the quantile function strictly increasing whenever
  // the sample is not a point mass.
  const double range = x.back() - x.front();
  if (range > 0.0) {
    const double step = range * 1e-12;
    for (int k = 1; k < m; ++k)
      if (q[k] <= q[k - 1]) q[k] = q[k - 1] + step;
  }
  return DistributionQ(grid, std::move(q));
}

double wasserstein_distance(const DistributionQ& a, const DistributionQ& b) {
  require_same_grid(a.grid(), b.grid());
  const auto& w = a.grid()->weights();
  double acc = 0.0;
  for (int k = 0; k < a.size(); ++k) {
    const double d = a.qvals()[k] - b.qvals()[k];
    acc += w[k] * d * d;
  }
  return std::sqrt(acc);
}

}  // namespace wassreg
