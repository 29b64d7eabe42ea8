#include "wassreg/tangent.hpp"

#include <cmath>

#include "wassreg/errors.hpp"

namespace wassreg {

TangentVector::TangentVector(DistributionQ base, Eigen::VectorXd vals)
    : base_(std::move(base)), vals_(std::move(vals)) {
  if (vals_.size() != base_.size())
    throw incompatible_grid("tangent values do not match the base grid size");
  for (int k = 0; k < vals_.size(); ++k)
    if (!std::isfinite(vals_[k])) throw invalid_input("tangent values must be finite");
}

TangentVector log_map(const DistributionQ& base, const DistributionQ& target) {
  require_same_grid(base.grid(), target.grid());
  if (!base.atomless())
    throw atomless_violation("log map requires an atomless base distribution");
  return TangentVector(base, target.qvals() - base.qvals());
}

DistributionQ exp_map(const TangentVector& v) {
  Eigen::VectorXd q = v.base().qvals() + v.vals();
  for (int k = 1; k < q.size(); ++k)
    if (q[k] - q[k - 1] < -DistributionQ::kRepairTol)
      throw not_in_log_image("exp map target is not a non-decreasing quantile function");
  return DistributionQ(v.base().grid(), std::move(q));
}

DistributionQ geodesic_point(const DistributionQ& base, const DistributionQ& target, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw invalid_input("geodesic parameter must lie in [0,1]");
  require_same_grid(base.grid(), target.grid());
  return DistributionQ(base.grid(), (1.0 - t) * base.qvals() + t * target.qvals());
}

double inner_product(const TangentVector& u, const TangentVector& v) {
  require_same_grid(u.base().grid(), v.base().grid());
  if (u.base().qvals() != v.base().qvals())
    throw incompatible_base("inner product requires tangent vectors at the same base");
  const auto& w = u.base().grid()->weights();
  double acc = 0.0;
  for (int k = 0; k < u.size(); ++k) acc += w[k] * u.vals()[k] * v.vals()[k];
  return acc;
}

double tangent_norm(const TangentVector& v) { return std::sqrt(inner_product(v, v)); }

TangentVector parallel_transport(const TangentVector& v, const DistributionQ& dest) {
  require_same_grid(v.base().grid(), dest.grid());
  if (!dest.atomless())
    throw atomless_violation("parallel transport requires an atomless destination");
  // g -> g o Q_src o F_dest: in quantile coordinates the tabulated values are
  // unchanged, only the base is relabelled.
  return TangentVector(dest, v.vals());
}

KernelOnGrid::KernelOnGrid(DistributionQ pred, DistributionQ resp, Eigen::MatrixXd vals)
    : pred_base(std::move(pred)), resp_base(std::move(resp)), values(std::move(vals)) {
  require_same_grid(pred_base.grid(), resp_base.grid());
  if (values.rows() != pred_base.size() || values.cols() != resp_base.size())
    throw incompatible_grid("kernel table does not match the grid size");
}

KernelOnGrid kernel_from_coefficients(const Eigen::MatrixXd& coeff,
                                      const DistributionQ& pred_base,
                                      const Eigen::MatrixXd& phi,
                                      const DistributionQ& resp_base,
                                      const Eigen::MatrixXd& psi) {
  if (phi.cols() < coeff.rows() || psi.cols() < coeff.cols())
    throw invalid_input("coefficient matrix exceeds the supplied basis ranks");
  Eigen::MatrixXd vals = phi.leftCols(coeff.rows()) * coeff *
                         psi.leftCols(coeff.cols()).transpose();
  return KernelOnGrid(pred_base, resp_base, std::move(vals));
}

KernelOnGrid transport_operator_kernel(const KernelOnGrid& kernel,
                                       const DistributionQ& new_pred_base,
                                       const DistributionQ& new_resp_base) {
  require_same_grid(kernel.pred_base.grid(), new_pred_base.grid());
  require_same_grid(kernel.resp_base.grid(), new_resp_base.grid());
  if (!new_pred_base.atomless() || !new_resp_base.atomless())
    throw atomless_violation("operator transport requires atomless destination bases");
  return KernelOnGrid(new_pred_base, new_resp_base, kernel.values);
}

double hs_distance(const KernelOnGrid& a, const KernelOnGrid& b) {
  require_same_grid(a.pred_base.grid(), b.pred_base.grid());
  if (a.pred_base.qvals() != b.pred_base.qvals() || a.resp_base.qvals() != b.resp_base.qvals())
    throw incompatible_base("HS distance requires kernels at the same bases");
  const auto& wp = a.pred_base.grid()->weights();
  const auto& wr = a.resp_base.grid()->weights();
  double acc = 0.0;
  for (int k = 0; k < a.values.rows(); ++k)
    for (int l = 0; l < a.values.cols(); ++l) {
      const double d = a.values(k, l) - b.values(k, l);
      acc += wp[k] * wr[l] * d * d;
    }
  return std::sqrt(acc);
}

}  // namespace wassreg
