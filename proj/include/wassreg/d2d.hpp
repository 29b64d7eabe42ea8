#pragma once

#include <Eigen/Core>
#include <optional>
#include <utility>
#include <vector>

#include "wassreg/wfpca.hpp"

namespace wassreg {

enum class TruncMethod { FVE, CV, Fixed };

struct TruncationChoice {
  TruncMethod method = TruncMethod::CV;
  double alpha = 0.05;   // FVE threshold complement
  int folds = 5;         // k-fold CV when n > 30; leave-one-out otherwise
  std::uint64_t seed = 0;  // seeded shuffle for fold assignment
  int fixed_j = 0;       // Fixed method only
  int fixed_k = 0;
  int max_candidates = 20;

  static TruncationChoice fve(double threshold = 0.95);
  static TruncationChoice cv(int folds = 5, std::uint64_t seed = 0);
  static TruncationChoice fixed(int j, int k);
};

// Fitted distribution-to-distribution regression.
struct D2DFit {
  FrechetMean predictor_mean;
  FrechetMean response_mean;
  EigenSystem es_x;
  EigenSystem es_y;
  int trunc_j = 0;
  int trunc_k = 0;
  Eigen::MatrixXd coeff;   // J x K, b_jk = xi_jk / lambda_j
  Eigen::MatrixXd xi;      // J x K cross-covariance scores
  std::vector<double> train_eta;          // per-unit boundary projection factor
  std::vector<double> train_discrepancy;  // ||log response - fitted log||

  int eta_events() const;  // training units with eta < 1
  KernelOnGrid kernel() const;
};

// Largest eta in [0,1] with eta*g + id non-decreasing, computed segmentwise
// in closed form; returns (eta*g, eta).
std::pair<TangentVector, double> boundary_projection(const TangentVector& g);

// Two-stage truncation selection: K first (FVE or CV with held-out
// eigenfunctions), then J by CV on the regression reconstruction error.
std::pair<int, int> select_truncation(const std::vector<TangentVector>& logs_x,
                                      const std::vector<TangentVector>& logs_y,
                                      const TruncationChoice& trunc);

D2DFit fit_d2d(const std::vector<DistributionQ>& predictors,
               const std::vector<DistributionQ>& responses,
               const TruncationChoice& trunc);

// Returns the predicted distribution and the boundary projection factor
// (eta = 1 when no projection was needed).
std::pair<DistributionQ, double> predict_d2d(const D2DFit& fit, const DistributionQ& predictor);

// Mean Wasserstein distance between predictions and oracle targets. When
// eta_events is given, it receives the number of predictions that required
// boundary projection.
double evaluate_awd(const D2DFit& fit,
                    const std::vector<DistributionQ>& new_predictors,
                    const std::vector<DistributionQ>& oracle_targets,
                    int* eta_events = nullptr);

}  // namespace wassreg
