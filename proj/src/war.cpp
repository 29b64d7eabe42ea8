#include "wassreg/war.hpp"

#include <cmath>
#include <numeric>

#include "wassreg/errors.hpp"
#include "wassreg/rng.hpp"
#include "wassreg/special.hpp"

namespace wassreg {

ARProcessSpec ARProcessSpec::default_spec(const GridPtr& grid) {
  if (!grid) throw invalid_input("default AR process needs a grid");
  const TruncNormal tn{0.5, 0.2, 0.0, 1.0};
  Eigen::VectorXd q(grid->size());
  for (int k = 0; k < grid->size(); ++k) q[k] = tn.quantile(grid->points()[k]);
  ARProcessSpec spec{DistributionQ(grid, std::move(q))};
  spec.density_sup = tn.density_sup();
  return spec;
}

void ARProcessSpec::validate() const {
  if (!(p > 0.0 && p < 1.0)) throw invalid_input("signal fraction p must lie in (0,1)");
  if (!(a2 > 1.0)) throw invalid_input("innovation decay a2 must exceed 1");
  if (!(a1 > 1.5)) throw invalid_input("operator decay a1 must exceed 1.5");
  if (basis_rank < 1) throw invalid_input("basis rank must be positive");
  if (!(p * riemann_zeta(a1 + a2) < riemann_zeta(a2)))
    throw invalid_input("operator norm bound exceeds 1: process not stationary");
  if (!(slope_bound() < 1.0))
    throw invalid_input("slope bound reaches 1: sample paths may leave the quantile cone");
}

double ARProcessSpec::mean_density_sup() const {
  if (density_sup > 0.0) return density_sup;
  const auto& p_ = mean.grid()->points();
  const auto& q = mean.qvals();
  double sup = 0.0;
  for (int k = 1; k < q.size(); ++k)
    if (q[k] > q[k - 1]) sup = std::max(sup, (p_[k] - p_[k - 1]) / (q[k] - q[k - 1]));
  if (!(sup > 0.0)) throw atomless_violation("mean distribution has no increasing stretch");
  return sup;
}

double ARProcessSpec::slope_bound() const {
  const double za2 = riemann_zeta(a2);
  const double zsum = riemann_zeta(a1 + a2);
  return (1.0 - p) * zsum / (za2 - p * zsum);
}

double ARProcessSpec::gamma_power_norm_bound(int r) const {
  if (r < 0) throw invalid_input("power index must be non-negative");
  if (r == 0) return 1.0;
  const double za2 = riemann_zeta(a2);
  const double zsum = riemann_zeta(a1 + a2);
  return std::pow(p, r) * std::pow(zsum, r - 1) *
         std::sqrt(riemann_zeta(2.0 * a2 + 2.0) * riemann_zeta(2.0 * a1 - 2.0)) /
         std::pow(za2, r);
}

double ARProcessSpec::innovation_bound(int l) const {
  return (1.0 - p) * std::pow(l, -a2 - 1.0) * riemann_zeta(a1 + a2) /
         (2.0 * std::sqrt(2.0) * M_PI * mean_density_sup() *
          riemann_zeta(a2) * riemann_zeta(a2));
}

double ARProcessSpec::coeff_b(int j, int l) const {
  return p * std::pow(j, -a1 + 1.0) * std::pow(l, -a2 - 1.0) / riemann_zeta(a2);
}

std::vector<DistributionQ> simulate_ar_process(const ARProcessSpec& spec, int n,
                                               std::uint64_t seed, int ma_terms,
                                               int burn_in) {
  spec.validate();
  if (n < 1) throw invalid_input("series length must be positive");
  if (ma_terms < 1 || burn_in < 0) throw invalid_input("bad moving-average parameters");
  const GridPtr grid = spec.mean.grid();
  const int m = grid->size();
  const int rank = spec.basis_rank;

  Eigen::MatrixXd bt(rank, rank);  // transposed coefficient matrix: scores_l
  for (int j = 1; j <= rank; ++j)
    for (int l = 1; l <= rank; ++l) bt(l - 1, j - 1) = spec.coeff_b(j, l);

  // Bounded-uniform innovations, one keyed stream per time index.
  const int total = n + burn_in;
  Eigen::MatrixXd eps(rank, total);
  for (int i = 0; i < total; ++i) {
    RngStream rs = RngStream::keyed(seed, 0, static_cast<std::uint64_t>(i), 1);
    for (int l = 0; l < rank; ++l) {
      const double e = spec.innovation_bound(l + 1);
      eps(l, i) = rs.uniform(-e, e);
    }
  }

  // Truncated moving average: scores_i = sum_{r<=ma_terms} (B^T)^r eps_{i-r}.
  Eigen::MatrixXd scores = Eigen::MatrixXd::Zero(rank, total);
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(rank, rank);
  for (int r = 0; r <= ma_terms; ++r) {
    if (r > 0) power = bt * power;
    for (int i = r; i < total; ++i) scores.col(i) += power * eps.col(i - r);
  }

  Eigen::MatrixXd basis(m, rank);  // sine basis in mean-quantile coordinates
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < rank; ++l)
      basis(k, l) = std::sqrt(2.0) * std::sin(2.0 * M_PI * (l + 1) * grid->points()[k]);

  std::vector<DistributionQ> series;
  series.reserve(n);
  for (int i = burn_in; i < total; ++i)
    series.push_back(exp_map(TangentVector(spec.mean, basis * scores.col(i))));
  return series;
}

namespace {

// AR coefficient matrix from lag-0 eigenscores: b_jl = zeta_jl / lambda_j with
// zeta_jl the lag-1 cross-covariance of the scores.
Eigen::MatrixXd ar_coefficients(const Eigen::MatrixXd& s, const Eigen::VectorXd& lambda,
                                int j_count) {
  const int n = static_cast<int>(s.rows());
  Eigen::MatrixXd zeta = Eigen::MatrixXd::Zero(j_count, j_count);
  for (int i = 0; i + 1 < n; ++i)
    zeta += s.row(i).head(j_count).transpose() * s.row(i + 1).head(j_count);
  zeta /= static_cast<double>(n - 1);
  for (int j = 0; j < j_count; ++j) zeta.row(j) /= lambda[j];
  return zeta;
}

std::pair<DistributionQ, double> one_step(const FrechetMean& fm, const EigenSystem& es,
                                          const Eigen::MatrixXd& coeff,
                                          const DistributionQ& current) {
  const int j_count = static_cast<int>(coeff.rows());
  const Eigen::VectorXd s = project_scores(log_map(fm.mean, current), es, j_count);
  Eigen::VectorXd fitted =
      es.eigenfunctions.leftCols(j_count) * (coeff.transpose() * s);
  auto proj = boundary_projection(TangentVector(fm.mean, std::move(fitted)));
  return {exp_map(proj.first), proj.second};
}

int select_ar_rank(const std::vector<DistributionQ>& train, const TruncationChoice& trunc) {
  const int t = static_cast<int>(train.size());
  const FrechetMean fm = frechet_mean(train);
  std::vector<TangentVector> logs;
  logs.reserve(t);
  for (const auto& d : train) logs.push_back(log_map(fm.mean, d));
  if (trunc.method == TruncMethod::FVE) {
    const EigenSystem es = eigensystem_from_logs(logs, trunc.max_candidates);
    for (int j = 0; j < es.rank(); ++j)
      if (es.fve[j] >= 1.0 - trunc.alpha) return j + 1;
    return es.rank();
  }
  // CV over consecutive pairs: the mean and eigenfunctions come from the
  // whole training segment, only the lag-1 coefficients are refitted per fold.
  const int max_j = std::min(trunc.max_candidates, t - 2);
  const EigenSystem es = eigensystem_from_logs(logs, max_j);
  const int avail = std::min(max_j, es.rank());
  const Eigen::MatrixXd s = es.scores.leftCols(avail);
  const int n_pairs = t - 1;
  const int n_folds = n_pairs <= 30 ? n_pairs : std::min(trunc.folds, n_pairs);
  std::vector<int> lab(n_pairs);
  if (n_pairs <= 30) {
    std::iota(lab.begin(), lab.end(), 0);
  } else {
    std::vector<int> idx(n_pairs);
    std::iota(idx.begin(), idx.end(), 0);
    RngStream rs = RngStream::keyed(trunc.seed, 0, 0, 0xf01d);
    for (int i = n_pairs - 1; i > 0; --i) std::swap(idx[i], idx[rs.uniform_int(0, i)]);
    for (int pos = 0; pos < n_pairs; ++pos) lab[idx[pos]] = pos % n_folds;
  }
  // Per-fold mean risks, so a one-standard-error rule can be applied below.
  Eigen::MatrixXd fold_risk = Eigen::MatrixXd::Zero(n_folds, avail);
  for (int f = 0; f < n_folds; ++f) {
    Eigen::MatrixXd zeta = Eigen::MatrixXd::Zero(avail, avail);
    int cnt = 0;
    for (int i = 0; i < n_pairs; ++i)
      if (lab[i] != f) {
        zeta += s.row(i).transpose() * s.row(i + 1);
        ++cnt;
      }
    if (cnt == 0) continue;
    zeta /= static_cast<double>(cnt);
    int held = 0;
    for (int i = 0; i < n_pairs; ++i) {
      if (lab[i] != f) continue;
      ++held;
      for (int j = 0; j < avail; ++j) {
        // Predicted score vector using the leading j+1 predictor components.
        Eigen::VectorXd pred = Eigen::VectorXd::Zero(avail);
        for (int jj = 0; jj <= j; ++jj)
          pred += s(i, jj) / es.eigenvalues[jj] * zeta.row(jj).transpose();
        fold_risk(f, j) += (pred - s.row(i + 1).transpose()).squaredNorm();
      }
    }
    if (held > 0) fold_risk.row(f) /= static_cast<double>(held);
  }
  const Eigen::VectorXd risk = fold_risk.colwise().mean();
  int argmin = 0;
  for (int j = 1; j < avail; ++j)
    if (risk[j] < risk[argmin]) argmin = j;
  // Components past the true operator rank multiply near-zero scores, so they
  // shift the one-step risk by only O(lambda_1/n): the curve is nearly flat
  // and the raw argmin is fold noise. The one-standard-error rule keeps the
  // smallest rank whose risk is statistically indistinguishable from the best.
  double se = 0.0;
  if (n_folds > 1) {
    const Eigen::VectorXd dev =
        fold_risk.col(argmin).array() - risk[argmin];
    se = std::sqrt(dev.squaredNorm() / (n_folds - 1) / n_folds);
  }
  for (int j = 0; j < avail; ++j)
    if (risk[j] <= risk[argmin] + se) return j + 1;
  return argmin + 1;
}

}  // namespace

ARFit fit_ar(const std::vector<DistributionQ>& series, const ARFitOptions& opts) {
  const int n = static_cast<int>(series.size());
  if (n < 5) throw insufficient_data("autoregressive fit needs at least 5 observations");
  if (!(opts.train_fraction > 0.0 && opts.train_fraction < 1.0))
    throw invalid_input("train fraction must lie in (0,1)");

  int j_count;
  double test_error = 0.0;
  if (opts.trunc.method == TruncMethod::Fixed) {
    j_count = opts.trunc.fixed_j;
  } else {
    const int t = std::max(3, static_cast<int>(std::floor(n * opts.train_fraction)));
    std::vector<DistributionQ> train(series.begin(), series.begin() + t);
    j_count = select_ar_rank(train, opts.trunc);
    // Refit on the training segment and score one-step forecasts on the tail.
    const FrechetMean fm = frechet_mean(train);
    std::vector<TangentVector> logs;
    for (const auto& d : train) logs.push_back(log_map(fm.mean, d));
    const EigenSystem es = eigensystem_from_logs(logs, j_count);
    const int jc = std::min(j_count, es.rank());
    const Eigen::MatrixXd coeff = ar_coefficients(es.scores, es.eigenvalues, jc);
    int cnt = 0;
    for (int i = t; i < n; ++i) {
      test_error += wasserstein_distance(one_step(fm, es, coeff, series[i - 1]).first,
                                         series[i]);
      ++cnt;
    }
    if (cnt > 0) test_error /= cnt;
  }

  const FrechetMean fm = frechet_mean(series);
  std::vector<TangentVector> logs;
  logs.reserve(n);
  for (const auto& d : series) logs.push_back(log_map(fm.mean, d));
  EigenSystem es = eigensystem_from_logs(logs, std::max(j_count, 1),
                                         opts.trunc.method == TruncMethod::Fixed);
  j_count = std::min(j_count, es.rank());  // forced requests cap at the rank
  Eigen::MatrixXd coeff = ar_coefficients(es.scores, es.eigenvalues, j_count);
  return ARFit{fm, std::move(es), j_count, std::move(coeff), series.back(), test_error};
}

std::pair<DistributionQ, double> forecast_one(const ARFit& fit, const DistributionQ& current) {
  return one_step(fit.mean, fit.es, fit.coeff, current);
}

RollingForecast forecast_rolling(const ARFit& fit, const DistributionQ& start, int horizon) {
  if (horizon < 1) throw invalid_input("forecast horizon must be positive");
  RollingForecast out;
  out.steps.reserve(horizon);
  out.etas.reserve(horizon);
  DistributionQ cur = start;
  for (int h = 0; h < horizon; ++h) {
    auto [next, eta] = forecast_one(fit, cur);
    out.steps.push_back(next);
    out.etas.push_back(eta);
    cur = out.steps.back();
  }
  return out;
}

}  // namespace wassreg
