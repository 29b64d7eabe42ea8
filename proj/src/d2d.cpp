#include "wassreg/d2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "wassreg/errors.hpp"
#include "wassreg/rng.hpp"

namespace wassreg {

TruncationChoice TruncationChoice::fve(double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0))
    throw invalid_input("FVE threshold must lie in (0,1]");
  TruncationChoice t;
  t.method = TruncMethod::FVE;
  t.alpha = 1.0 - threshold;
  return t;
}

TruncationChoice TruncationChoice::cv(int folds, std::uint64_t seed) {
  if (folds < 2) throw invalid_input("cross-validation needs at least 2 folds");
  TruncationChoice t;
  t.method = TruncMethod::CV;
  t.folds = folds;
  t.seed = seed;
  return t;
}

TruncationChoice TruncationChoice::fixed(int j, int k) {
  if (j < 1 || k < 1) throw invalid_input("fixed truncation ranks must be positive");
  TruncationChoice t;
  t.method = TruncMethod::Fixed;
  t.fixed_j = j;
  t.fixed_k = k;
  return t;
}

int D2DFit::eta_events() const {
  int c = 0;
  for (double e : train_eta)
    if (e < 1.0) ++c;
  return c;
}

KernelOnGrid D2DFit::kernel() const {
  return kernel_from_coefficients(coeff.topLeftCorner(trunc_j, trunc_k), es_x.base,
                                  es_x.eigenfunctions, es_y.base, es_y.eigenfunctions);
}

std::pair<TangentVector, double> boundary_projection(const TangentVector& g) {
  const auto& q = g.base().qvals();
  const auto& v = g.vals();
  double eta = 1.0;
  for (int k = 1; k < v.size(); ++k) {
    const double dg = v[k] - v[k - 1];
    if (dg < 0.0) eta = std::min(eta, (q[k] - q[k - 1]) / (-dg));
  }
  eta = std::max(eta, 0.0);
  if (eta >= 1.0) return {g, 1.0};
  return {TangentVector(g.base(), eta * v.array()), eta};
}

namespace {

// Shuffled round-robin fold labels; leave-one-out for small samples.
std::vector<int> fold_labels(int n, const TruncationChoice& trunc, int* n_folds) {
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<int> lab(n);
  if (n <= 30) {
    *n_folds = n;
    std::iota(lab.begin(), lab.end(), 0);
    return lab;
  }
  *n_folds = std::min(trunc.folds, n);
  RngStream rs = RngStream::keyed(trunc.seed, 0, 0, 0xf01d);
  for (int i = n - 1; i > 0; --i) std::swap(idx[i], idx[rs.uniform_int(0, i)]);
  for (int pos = 0; pos < n; ++pos) lab[idx[pos]] = pos % *n_folds;
  return lab;
}

std::vector<DistributionQ> exps_of(const std::vector<TangentVector>& logs) {
  std::vector<DistributionQ> ds;
  ds.reserve(logs.size());
  for (const auto& v : logs) ds.push_back(exp_map(v));
  return ds;
}

// Smallest count with cumulative FVE above the threshold.
int fve_rank(const EigenSystem& es, double threshold) {
  for (int j = 0; j < es.rank(); ++j)
    if (es.fve[j] >= threshold) return j + 1;
  return es.rank();
}

// Joint CV prediction risk over the rank pair (J, K), cumulative in both.
// Reconstruction error cannot select K (an orthonormal expansion's residual
// shrinks with every component, even held out), so both ranks are scored by
// the held-out prediction error in the response tangent space: adding response
// component k trades its energy s_k^2 for (pred_k - s_k)^2, which turns the
// risk upward once a component stops being predictable.
std::pair<int, int> cv_rank_pair(const std::vector<TangentVector>& logs_x,
                                 const std::vector<TangentVector>& logs_y,
                                 const TruncationChoice& trunc) {
  const int n = static_cast<int>(logs_x.size());
  int n_folds = 0;
  const std::vector<int> lab = fold_labels(n, trunc, &n_folds);
  const std::vector<DistributionQ> dx = exps_of(logs_x);
  const std::vector<DistributionQ> dy = exps_of(logs_y);
  const int max_r = std::min(trunc.max_candidates, n - 2);
  // Per-fold mean risks (folds x (j,k) pairs) for a one-standard-error rule.
  Eigen::MatrixXd fold_risk = Eigen::MatrixXd::Zero(n_folds, max_r * max_r);
  int avail_j = max_r, avail_k = max_r;
  for (int f = 0; f < n_folds; ++f) {
    std::vector<DistributionQ> tx, ty;
    for (int i = 0; i < n; ++i)
      if (lab[i] != f) {
        tx.push_back(dx[i]);
        ty.push_back(dy[i]);
      }
    const FrechetMean fmx = frechet_mean(tx);
    const FrechetMean fmy = frechet_mean(ty);
    std::vector<TangentVector> lx, ly;
    for (std::size_t i = 0; i < tx.size(); ++i) {
      lx.push_back(log_map(fmx.mean, tx[i]));
      ly.push_back(log_map(fmy.mean, ty[i]));
    }
    const EigenSystem esx = eigensystem_from_logs(lx, max_r);
    const EigenSystem esy = eigensystem_from_logs(ly, max_r);
    const int jf = std::min(avail_j, esx.rank());
    const int kf = std::min(avail_k, esy.rank());
    avail_j = jf;
    avail_k = kf;
    Eigen::MatrixXd coeff = esx.scores.leftCols(jf).transpose() *
                            esy.scores.leftCols(kf) / static_cast<double>(lx.size());
    for (int j = 0; j < jf; ++j) coeff.row(j) /= esx.eigenvalues[j];
    int held = 0;
    for (int i = 0; i < n; ++i) {
      if (lab[i] != f) continue;
      ++held;
      const TangentVector vy = log_map(fmy.mean, dy[i]);
      const Eigen::VectorXd sx =
          project_scores(log_map(fmx.mean, dx[i]), esx, jf);
      const Eigen::VectorXd sy = project_scores(vy, esy, kf);
      const double energy = inner_product(vy, vy);
      Eigen::VectorXd pred = Eigen::VectorXd::Zero(kf);
      for (int j = 0; j < jf; ++j) {
        pred += sx[j] * coeff.row(j).transpose();
        double err = energy;
        for (int k = 0; k < kf; ++k) {
          const double d = pred[k] - sy[k];
          err += d * d - sy[k] * sy[k];
          fold_risk(f, j * max_r + k) += std::max(err, 0.0);
        }
      }
    }
    if (held > 0) fold_risk.row(f) /= static_cast<double>(held);
  }
  const Eigen::VectorXd risk = fold_risk.colwise().mean();
  int best_j = 0, best_k = 0;
  for (int j = 0; j < avail_j; ++j)
    for (int k = 0; k < avail_k; ++k)
      if (risk[j * max_r + k] < risk[best_j * max_r + best_k]) {
        best_j = j;
        best_k = k;
      }
  // One-standard-error rule on the paired fold differences: the risk surface
  // is shallow around the minimum and the raw argmin overfits, so take the
  // most parsimonious pair whose risk is statistically indistinguishable from
  // the minimum. Pairing the differences within folds removes the shared
  // fold-to-fold variation, so genuinely better larger ranks are kept.
  if (n_folds > 1) {
    const Eigen::VectorXd at_best = fold_risk.col(best_j * max_r + best_k);
    for (int total = 0; total <= avail_j + avail_k - 2; ++total)
      for (int j = std::max(0, total - avail_k + 1);
           j <= std::min(total, avail_j - 1); ++j) {
        const int k = total - j;
        const Eigen::VectorXd d = fold_risk.col(j * max_r + k) - at_best;
        const double md = d.mean();
        const double se = std::sqrt((d.array() - md).square().sum() /
                                    (n_folds - 1) / n_folds);
        if (md <= se) return {j + 1, k + 1};
      }
  }
  return {best_j + 1, best_k + 1};
}

}  // namespace

std::pair<int, int> select_truncation(const std::vector<TangentVector>& logs_x,
                                      const std::vector<TangentVector>& logs_y,
                                      const TruncationChoice& trunc) {
  const int n = static_cast<int>(logs_x.size());
  if (n != static_cast<int>(logs_y.size()))
    throw invalid_input("predictor and response samples must be paired");
  if (n < 4) throw insufficient_data("truncation selection needs at least 4 pairs");
  switch (trunc.method) {
    case TruncMethod::Fixed:
      return {trunc.fixed_j, trunc.fixed_k};
    case TruncMethod::FVE: {
      const EigenSystem esx = eigensystem_from_logs(logs_x, trunc.max_candidates);
      const EigenSystem esy = eigensystem_from_logs(logs_y, trunc.max_candidates);
      return {fve_rank(esx, 1.0 - trunc.alpha), fve_rank(esy, 1.0 - trunc.alpha)};
    }
    case TruncMethod::CV:
      return cv_rank_pair(logs_x, logs_y, trunc);
  }
  throw invalid_input("unknown truncation method");
}

D2DFit fit_d2d(const std::vector<DistributionQ>& predictors,
               const std::vector<DistributionQ>& responses,
               const TruncationChoice& trunc) {
  const int n = static_cast<int>(predictors.size());
  if (n != static_cast<int>(responses.size()))
    throw invalid_input("predictor and response samples must be paired");
  if (n < 2) throw insufficient_data("regression needs at least 2 pairs");
  const FrechetMean fmx = frechet_mean(predictors);
  const FrechetMean fmy = frechet_mean(responses);
  std::vector<TangentVector> logs_x, logs_y;
  logs_x.reserve(n);
  logs_y.reserve(n);
  for (int i = 0; i < n; ++i) {
    logs_x.push_back(log_map(fmx.mean, predictors[i]));
    logs_y.push_back(log_map(fmy.mean, responses[i]));
  }
  int j_count, k_count;
  if (trunc.method == TruncMethod::Fixed) {
    j_count = trunc.fixed_j;
    k_count = trunc.fixed_k;
  } else {
    std::tie(j_count, k_count) = select_truncation(logs_x, logs_y, trunc);
  }
  const bool keep_small = trunc.method == TruncMethod::Fixed;
  EigenSystem esx = eigensystem_from_logs(logs_x, std::max(j_count, 1), keep_small);
  EigenSystem esy = eigensystem_from_logs(logs_y, std::max(k_count, 1), keep_small);
  // A forced truncation caps at the available rank: the sample covariance can
  // be genuinely lower-rank than the request (e.g. rank-one response designs).
  j_count = std::min(j_count, esx.rank());
  k_count = std::min(k_count, esy.rank());
  // The Gram-route training scores are exactly uncorrelated across components,
  // so the spectral division below stays stable down to near-zero eigenvalues.
  const Eigen::MatrixXd sx = esx.scores.leftCols(j_count);
  const Eigen::MatrixXd sy = esy.scores.leftCols(k_count);
  Eigen::MatrixXd xi = sx.transpose() * sy / static_cast<double>(n);
  Eigen::MatrixXd coeff = xi;
  for (int j = 0; j < j_count; ++j) coeff.row(j) /= esx.eigenvalues[j];

  D2DFit fit{fmx, fmy, std::move(esx), std::move(esy), j_count, k_count,
             std::move(coeff), std::move(xi), {}, {}};
  const Eigen::MatrixXd psi = fit.es_y.eigenfunctions.leftCols(k_count);
  fit.train_eta.reserve(n);
  fit.train_discrepancy.reserve(n);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd fitted =
        psi * (fit.coeff.transpose() * sx.row(i).transpose());
    auto proj = boundary_projection(TangentVector(fmy.mean, std::move(fitted)));
    fit.train_eta.push_back(proj.second);
    fit.train_discrepancy.push_back(
        tangent_norm(TangentVector(fmy.mean, proj.first.vals() - logs_y[i].vals())));
  }
  return fit;
}

std::pair<DistributionQ, double> predict_d2d(const D2DFit& fit, const DistributionQ& predictor) {
  const TangentVector v = log_map(fit.predictor_mean.mean, predictor);
  const Eigen::VectorXd s = project_scores(v, fit.es_x, fit.trunc_j);
  Eigen::VectorXd fitted = fit.es_y.eigenfunctions.leftCols(fit.trunc_k) *
                           (fit.coeff.transpose() * s);
  auto proj = boundary_projection(TangentVector(fit.response_mean.mean, std::move(fitted)));
  return {exp_map(proj.first), proj.second};
}

double evaluate_awd(const D2DFit& fit,
                    const std::vector<DistributionQ>& new_predictors,
                    const std::vector<DistributionQ>& oracle_targets,
                    int* eta_events) {
  if (new_predictors.size() != oracle_targets.size() || new_predictors.empty())
    throw invalid_input("evaluation needs paired non-empty predictors and targets");
  double acc = 0.0;
  if (eta_events != nullptr) *eta_events = 0;
  for (std::size_t i = 0; i < new_predictors.size(); ++i) {
    const auto [pred, eta] = predict_d2d(fit, new_predictors[i]);
    acc += wasserstein_distance(pred, oracle_targets[i]);
    if (eta_events != nullptr && eta < 1.0) ++*eta_events;
  }
  return acc / static_cast<double>(new_predictors.size());
}

}  // namespace wassreg
