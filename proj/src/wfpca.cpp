#include "wassreg/wfpca.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "wassreg/errors.hpp"

namespace wassreg {
namespace {

void check_common_base(const std::vector<TangentVector>& logs, const char* what) {
  if (logs.empty()) throw insufficient_data(std::string(what) + " needs at least one tangent vector");
  for (std::size_t i = 1; i < logs.size(); ++i) {
    require_same_grid(logs[0].base().grid(), logs[i].base().grid());
    if (logs[i].base().qvals() != logs[0].base().qvals())
      throw incompatible_base(std::string(what) + " requires a common base");
  }
}

EigenSystem assemble(const DistributionQ& base, const Eigen::VectorXd& lambda_desc,
                     const Eigen::MatrixXd& phi_desc, int max_components, bool keep_below_cutoff,
                     const Eigen::MatrixXd& scores_desc = Eigen::MatrixXd()) {
  const int avail = static_cast<int>(lambda_desc.size());
  double total = 0.0;
  for (int j = 0; j < avail; ++j) total += std::max(lambda_desc[j], 0.0);
  if (!(total > 0.0)) throw degenerate_design("covariance operator is identically zero");
  // Relative cutoff guards the spectral divisions downstream; the permissive
  // floor only discards eigenvalues at the symmetric-solver noise level.
  const double floor =
      lambda_desc[0] * (keep_below_cutoff ? 1e-15 : kEigenRankCutoff);
  int r = 0;
  while (r < avail && r < max_components && lambda_desc[r] > floor) ++r;
  if (r == 0) throw degenerate_design("no eigenvalue above the rank cutoff");
  EigenSystem es{base, lambda_desc.head(r), phi_desc.leftCols(r), Eigen::VectorXd(r)};
  if (scores_desc.size() > 0) es.scores = scores_desc.leftCols(r);
  double acc = 0.0;
  for (int j = 0; j < r; ++j) {
    acc += lambda_desc[j];
    es.fve[j] = acc / total;
    int idx = 0;
    es.eigenfunctions.col(j).cwiseAbs().maxCoeff(&idx);
    if (es.eigenfunctions(idx, j) < 0.0) {
      es.eigenfunctions.col(j) = -es.eigenfunctions.col(j);
      if (es.scores.size() > 0) es.scores.col(j) = -es.scores.col(j);
    }
  }
  return es;
}

}  // namespace

FrechetMean frechet_mean(const std::vector<DistributionQ>& ds) {
  if (ds.empty()) throw insufficient_data("Frechet mean needs at least one distribution");
  const int m = ds[0].size();
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(m);
  for (const auto& d : ds) {
    require_same_grid(ds[0].grid(), d.grid());
    for (int k = 0; k < m; ++k) acc[k] += d.qvals()[k];
  }
  for (int k = 0; k < m; ++k) acc[k] /= static_cast<double>(ds.size());
  return FrechetMean{DistributionQ(ds[0].grid(), std::move(acc)),
                     static_cast<int>(ds.size())};
}

bool CovOperator::symmetric(double tol) const {
  if (kernel.rows() != kernel.cols()) return false;
  return (kernel - kernel.transpose()).cwiseAbs().maxCoeff() <= tol;
}

CovOperator covariance(const std::vector<TangentVector>& logs) {
  check_common_base(logs, "covariance");
  const int m = logs[0].size();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(m, m);
  for (const auto& v : logs) k.selfadjointView<Eigen::Lower>().rankUpdate(v.vals());
  k = k.selfadjointView<Eigen::Lower>();
  k /= static_cast<double>(logs.size());
  return CovOperator{logs[0].base(), logs[0].base(), std::move(k)};
}

CovOperator cross_covariance(const std::vector<TangentVector>& logs_x,
                             const std::vector<TangentVector>& logs_y) {
  check_common_base(logs_x, "cross-covariance");
  check_common_base(logs_y, "cross-covariance");
  if (logs_x.size() != logs_y.size())
    throw invalid_input("cross-covariance needs paired samples of equal length");
  const int m = logs_x[0].size();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t i = 0; i < logs_x.size(); ++i)
    k += logs_y[i].vals() * logs_x[i].vals().transpose();
  k /= static_cast<double>(logs_x.size());
  return CovOperator{logs_y[0].base(), logs_x[0].base(), std::move(k)};
}

EigenSystem eigendecompose(const CovOperator& c, int max_components) {
  if (!c.symmetric()) throw invalid_input("eigendecompose needs a symmetric covariance kernel");
  require_same_grid(c.row_base.grid(), c.col_base.grid());
  const auto& w = c.col_base.grid()->weights();
  const Eigen::VectorXd sw = w.cwiseSqrt();
  // Similarity transform: (K diag(w)) phi = lambda phi becomes the symmetric
  // problem diag(sw) K diag(sw) u = lambda u with phi = u / sw.
  Eigen::MatrixXd a = sw.asDiagonal() * c.kernel * sw.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) throw degenerate_design("eigensolver failed to converge");
  const int m = static_cast<int>(w.size());
  Eigen::VectorXd lambda(m);
  Eigen::MatrixXd phi(m, m);
  for (int j = 0; j < m; ++j) {
    lambda[j] = solver.eigenvalues()[m - 1 - j];  // descending
    phi.col(j) = solver.eigenvectors().col(m - 1 - j).cwiseQuotient(sw);
  }
  return assemble(c.col_base, lambda, phi, max_components, false);
}

EigenSystem eigensystem_from_logs(const std::vector<TangentVector>& logs,
                                  int max_components, bool keep_below_cutoff) {
  check_common_base(logs, "eigensystem");
  const int n = static_cast<int>(logs.size());
  const int m = logs[0].size();
  const Eigen::VectorXd sw = logs[0].base().grid()->weights().cwiseSqrt();
  Eigen::MatrixXd a(n, m);  // rows: sqrt-weighted tangent vectors
  for (int i = 0; i < n; ++i) a.row(i) = logs[i].vals().cwiseProduct(sw);
  const Eigen::MatrixXd gram = a * a.transpose() / static_cast<double>(n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
  if (solver.info() != Eigen::Success) throw degenerate_design("eigensolver failed to converge");
  Eigen::VectorXd lambda(n);
  Eigen::MatrixXd phi(m, n);
  Eigen::MatrixXd scores(n, n);
  int r = 0;
  for (int j = n - 1; j >= 0; --j) {
    const double lam = solver.eigenvalues()[j];
    if (!(lam > 0.0)) break;
    lambda[r] = lam;
    const double scale = std::sqrt(static_cast<double>(n) * lam);
    // u in sample space lifts to a^T u / sqrt(n lam) in sqrt-weight coords,
    // and the training scores are sqrt(n lam) u directly.
    phi.col(r) = (a.transpose() * solver.eigenvectors().col(j)).cwiseQuotient(sw) / scale;
    scores.col(r) = scale * solver.eigenvectors().col(j);
    ++r;
  }
  if (r == 0) throw degenerate_design("covariance operator is identically zero");
  return assemble(logs[0].base(), lambda.head(r), phi.leftCols(r), max_components,
                  keep_below_cutoff, scores.leftCols(r));
}

Eigen::VectorXd project_scores(const TangentVector& v, const EigenSystem& es, int j_count) {
  require_same_grid(v.base().grid(), es.base.grid());
  if (v.base().qvals() != es.base.qvals())
    throw incompatible_base("score projection requires the eigensystem base");
  if (j_count < 1 || j_count > es.rank())
    throw invalid_input("requested more components than the eigensystem rank");
  const auto& w = es.base.grid()->weights();
  return es.eigenfunctions.leftCols(j_count).transpose() * v.vals().cwiseProduct(w);
}

}  // namespace wassreg
