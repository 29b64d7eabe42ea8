#pragma once

#include <Eigen/Core>
#include <vector>

#include "wassreg/tangent.hpp"

namespace wassreg {

struct FrechetMean {
  DistributionQ mean;
  int n;
};

// Empirical Frechet mean: pointwise average of quantile functions.
FrechetMean frechet_mean(const std::vector<DistributionQ>& ds);

// Covariance operator in quantile coordinates: kernel(k,l) holds
// C(Q(p_k), Q(p_l)).  Cross-covariances keep the predictor index on columns
// and the response index on rows.
struct CovOperator {
  DistributionQ row_base;   // response side for cross-covariance
  DistributionQ col_base;   // predictor side
  Eigen::MatrixXd kernel;   // M x M

  bool symmetric(double tol = 1e-10) const;
};

CovOperator covariance(const std::vector<TangentVector>& logs);
CovOperator cross_covariance(const std::vector<TangentVector>& logs_x,
                             const std::vector<TangentVector>& logs_y);

// Eigenpairs of a covariance operator in the measure-weighted inner product.
struct EigenSystem {
  DistributionQ base;
  Eigen::VectorXd eigenvalues;   // non-increasing, clamped at 0
  Eigen::MatrixXd eigenfunctions;  // M x r, orthonormal under <.,.>_base
  Eigen::VectorXd fve;           // cumulative fraction of variance explained
  // Training-sample scores (n x r), only set by the Gram route.  These come
  // straight from the Gram eigenvectors, so they are orthogonal across
  // components to machine precision even for near-zero eigenvalues, which
  // re-projection onto the eigenfunctions cannot guarantee.
  Eigen::MatrixXd scores;

  int rank() const { return static_cast<int>(eigenvalues.size()); }
};

// Relative eigenvalue cutoff below which components are treated as numerical
// zeros (the regression estimator divides by eigenvalues).
constexpr double kEigenRankCutoff = 1e-12;

// Solves the weighted eigenproblem (kernel diag(w)) phi = lambda phi via the
// symmetric similarity transform diag(sqrt w) kernel diag(sqrt w).
EigenSystem eigendecompose(const CovOperator& c, int max_components = 50);

// Same spectrum computed through the n x n Gram matrix of the sample; much
// faster when n << M.  keep_below_cutoff retains all positive eigenvalues
// instead of applying the relative rank cutoff.
EigenSystem eigensystem_from_logs(const std::vector<TangentVector>& logs,
                                  int max_components = 50,
                                  bool keep_below_cutoff = false);

// scores[j] = <v, phi_j>_base for j = 1..J.
Eigen::VectorXd project_scores(const TangentVector& v, const EigenSystem& es, int j_count);

}  // namespace wassreg
