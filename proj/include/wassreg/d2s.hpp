#pragma once

#include <Eigen/Core>
#include <vector>

#include "wassreg/d2d.hpp"

namespace wassreg {

// Fitted distribution-to-scalar regression.
struct ScalarFit {
  FrechetMean predictor_mean;
  EigenSystem es_x;
  int trunc_j = 0;
  Eigen::VectorXd beta1_scores;  // lambda_j^{-1} n^{-1} sum_i (Y_i - Ybar) <log_i, phi_j>
  double intercept = 0.0;        // sample mean of Y
};

ScalarFit fit_d2s(const std::vector<DistributionQ>& predictors,
                  const std::vector<double>& y,
                  const TruncationChoice& trunc);

double predict_d2s(const ScalarFit& fit, const DistributionQ& predictor);

}  // namespace wassreg
