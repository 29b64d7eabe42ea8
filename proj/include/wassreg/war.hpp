#pragma once

#include <Eigen/Core>
#include <vector>

#include "wassreg/d2d.hpp"

namespace wassreg {

// Fitted first-order autoregressive model for a distribution-valued series.
struct ARFit {
  FrechetMean mean;
  EigenSystem es;
  int trunc_j = 0;
  Eigen::MatrixXd coeff;  // J x J, b_jl = zeta_jl / lambda_j
  DistributionQ last;     // final series element, default start for forecasting
  double test_error = 0.0;  // held-out one-step Wasserstein error from selection
};

// Parameters of the explicit stationary construction: the autoregression
// coefficients decay as b_jl = p j^{-a1+1} l^{-a2-1} / zeta(a2) and the
// innovation coordinates are bounded uniforms.
struct ARProcessSpec {
  DistributionQ mean;
  double p = 0.9;
  double a1 = 8.5;
  double a2 = 5.0;
  int basis_rank = 20;
  double density_sup = 0.0;  // sup of the mean's density; 0 = estimate from grid

  static ARProcessSpec default_spec(const GridPtr& grid);

  void validate() const;
  double mean_density_sup() const;
  // Feasibility bound on sup |d/dt sum_r Gamma^r(eps)|.
  double slope_bound() const;
  // Upper bound on ||Gamma^r|| from the explicit construction.
  double gamma_power_norm_bound(int r) const;
  double innovation_bound(int l) const;  // e_l
  double coeff_b(int j, int l) const;    // b_jl
};

struct ARFitOptions {
  double train_fraction = 0.8;  // chronological split for truncation selection
  TruncationChoice trunc = TruncationChoice::cv();
};

ARFit fit_ar(const std::vector<DistributionQ>& series, const ARFitOptions& opts = {});

std::pair<DistributionQ, double> forecast_one(const ARFit& fit, const DistributionQ& current);

struct RollingForecast {
  std::vector<DistributionQ> steps;
  std::vector<double> etas;
};

RollingForecast forecast_rolling(const ARFit& fit, const DistributionQ& start, int horizon);

// Truncated moving-average simulation of the explicit stationary process:
// scores follow sum_{r<=r_max} (B^T)^r E_{i-r} with burn-in.
std::vector<DistributionQ> simulate_ar_process(const ARProcessSpec& spec, int n,
                                               std::uint64_t seed,
                                               int ma_terms = 50, int burn_in = 100);

}  // namespace wassreg
