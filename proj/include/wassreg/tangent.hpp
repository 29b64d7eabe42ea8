#pragma once

#include <Eigen/Core>

#include "wassreg/distribution.hpp"

namespace wassreg {

// A log-mapped distribution stored in quantile coordinates of its base:
// vals[k] = g(Q_base(p_k)).  In these coordinates the log map is a plain
// difference of quantile values and parallel transport acts as the identity
// on vals.
class TangentVector {
public:
  TangentVector(DistributionQ base, Eigen::VectorXd vals);

  const DistributionQ& base() const { return base_; }
  const Eigen::VectorXd& vals() const { return vals_; }
  int size() const { return static_cast<int>(vals_.size()); }

private:
  DistributionQ base_;
  Eigen::VectorXd vals_;
};

// Log_base(target): vals[k] = Q_target(p_k) - Q_base(p_k).  Base must be atomless.
TangentVector log_map(const DistributionQ& base, const DistributionQ& target);

// Exp_base(v): qvals[k] = Q_base(p_k) + v[k].  Requires the result to be
// non-decreasing (membership in the log image); throws not_in_log_image
// otherwise.
DistributionQ exp_map(const TangentVector& v);

// Point on the geodesic from base to target, t in [0,1].
DistributionQ geodesic_point(const DistributionQ& base, const DistributionQ& target, double t);

// <u,v>_base = sum_k w_k u_k v_k.  Bases must match.
double inner_product(const TangentVector& u, const TangentVector& v);
double tangent_norm(const TangentVector& v);

// Parallel transport g -> g o Q_base o F_dest: identity on stored vals,
// rebased at dest.
TangentVector parallel_transport(const TangentVector& v, const DistributionQ& dest);

// A Hilbert-Schmidt regression kernel tabulated in quantile coordinates:
// values(k,l) = kernel(Q_pred(p_k), Q_resp(p_l)).
struct KernelOnGrid {
  DistributionQ pred_base;
  DistributionQ resp_base;
  Eigen::MatrixXd values;  // M x M, row = predictor grid index, col = response grid index

  KernelOnGrid(DistributionQ pred, DistributionQ resp, Eigen::MatrixXd vals);
};

// Builds sum_j sum_k B(j,k) psi_k (x) phi_j on the grid, where phi columns
// live in pred_base coordinates and psi columns in resp_base coordinates.
KernelOnGrid kernel_from_coefficients(const Eigen::MatrixXd& coeff,
                                      const DistributionQ& pred_base,
                                      const Eigen::MatrixXd& phi,
                                      const DistributionQ& resp_base,
                                      const Eigen::MatrixXd& psi);

// Transports a kernel to new bases.  In quantile coordinates the tabulated
// values are unchanged; only the bases are relabelled.
KernelOnGrid transport_operator_kernel(const KernelOnGrid& kernel,
                                       const DistributionQ& new_pred_base,
                                       const DistributionQ& new_resp_base);

// Hilbert-Schmidt distance sqrt(sum_kl w_k w_l (a - b)^2); bases of a and b
// must agree (transport first if they do not).
double hs_distance(const KernelOnGrid& a, const KernelOnGrid& b);

}  // namespace wassreg
