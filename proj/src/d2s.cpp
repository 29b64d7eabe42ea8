#include "wassreg/d2s.hpp"

#include <cmath>
#include <numeric>

#include "wassreg/errors.hpp"
#include "wassreg/rng.hpp"

namespace wassreg {
namespace {

// CV over the predictor rank, risk = squared prediction error of the scalar.
int cv_rank(const std::vector<DistributionQ>& predictors, const std::vector<double>& y,
            const TruncationChoice& trunc) {
  const int n = static_cast<int>(predictors.size());
  const int n_folds = n <= 30 ? n : std::min(trunc.folds, n);
  std::vector<int> lab(n);
  if (n <= 30) {
    std::iota(lab.begin(), lab.end(), 0);
  } else {
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    RngStream rs = RngStream::keyed(trunc.seed, 0, 0, 0xf01d);
    for (int i = n - 1; i > 0; --i) std::swap(idx[i], idx[rs.uniform_int(0, i)]);
    for (int pos = 0; pos < n; ++pos) lab[idx[pos]] = pos % n_folds;
  }
  const int max_j = std::min(trunc.max_candidates, n - 2);
  std::vector<double> risk(max_j, 0.0);
  int avail = max_j;
  for (int f = 0; f < n_folds; ++f) {
    std::vector<DistributionQ> tx;
    std::vector<double> ty;
    for (int i = 0; i < n; ++i)
      if (lab[i] != f) {
        tx.push_back(predictors[i]);
        ty.push_back(y[i]);
      }
    const FrechetMean fm = frechet_mean(tx);
    std::vector<TangentVector> logs;
    for (const auto& d : tx) logs.push_back(log_map(fm.mean, d));
    const EigenSystem es = eigensystem_from_logs(logs, max_j);
    const int jf = std::min(avail, es.rank());
    avail = jf;
    const double ybar = std::accumulate(ty.begin(), ty.end(), 0.0) / ty.size();
    Eigen::VectorXd num = Eigen::VectorXd::Zero(jf);
    for (std::size_t i = 0; i < logs.size(); ++i)
      num += (ty[i] - ybar) * es.scores.row(i).head(jf).transpose();
    num /= static_cast<double>(logs.size());
    for (int i = 0; i < n; ++i) {
      if (lab[i] != f) continue;
      const Eigen::VectorXd s = project_scores(log_map(fm.mean, predictors[i]), es, jf);
      double pred = ybar;
      for (int j = 0; j < jf; ++j) {
        pred += num[j] / es.eigenvalues[j] * s[j];
        const double err = pred - y[i];
        risk[j] += err * err;
      }
    }
  }
  int best = 1;
  for (int j = 1; j < avail; ++j)
    if (risk[j] < risk[best - 1]) best = j + 1;
  return best;
}

}  // namespace

ScalarFit fit_d2s(const std::vector<DistributionQ>& predictors,
                  const std::vector<double>& y, const TruncationChoice& trunc) {
  const int n = static_cast<int>(predictors.size());
  if (n != static_cast<int>(y.size()))
    throw invalid_input("predictors and responses must be paired");
  if (n < 2) throw insufficient_data("regression needs at least 2 pairs");
  for (double v : y)
    if (!std::isfinite(v)) throw invalid_input("responses must be finite");
  const FrechetMean fm = frechet_mean(predictors);
  std::vector<TangentVector> logs;
  logs.reserve(n);
  for (const auto& d : predictors) logs.push_back(log_map(fm.mean, d));
  int j_count;
  switch (trunc.method) {
    case TruncMethod::Fixed:
      j_count = trunc.fixed_j;
      break;
    case TruncMethod::FVE: {
      const EigenSystem es = eigensystem_from_logs(logs, trunc.max_candidates);
      j_count = es.rank();
      for (int j = 0; j < es.rank(); ++j)
        if (es.fve[j] >= 1.0 - trunc.alpha) {
          j_count = j + 1;
          break;
        }
      break;
    }
    case TruncMethod::CV:
      j_count = cv_rank(predictors, y, trunc);
      break;
    default:
      throw invalid_input("unknown truncation method");
  }
  EigenSystem es = eigensystem_from_logs(logs, std::max(j_count, 1),
                                         trunc.method == TruncMethod::Fixed);
  j_count = std::min(j_count, es.rank());  // forced requests cap at the rank
  const double ybar = std::accumulate(y.begin(), y.end(), 0.0) / n;
  Eigen::VectorXd scores = Eigen::VectorXd::Zero(j_count);
  for (int i = 0; i < n; ++i)
    scores += (y[i] - ybar) * es.scores.row(i).head(j_count).transpose();
  scores /= static_cast<double>(n);
  for (int j = 0; j < j_count; ++j) scores[j] /= es.eigenvalues[j];
  return ScalarFit{fm, std::move(es), j_count, std::move(scores), ybar};
}

double predict_d2s(const ScalarFit& fit, const DistributionQ& predictor) {
  const TangentVector v = log_map(fit.predictor_mean.mean, predictor);
  const Eigen::VectorXd s = project_scores(v, fit.es_x, fit.trunc_j);
  return fit.intercept + fit.beta1_scores.dot(s);
}

}  // namespace wassreg
