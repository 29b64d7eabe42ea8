#include "wassreg/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <thread>

#include "wassreg/errors.hpp"
#include "wassreg/rng.hpp"
#include "wassreg/special.hpp"

namespace wassreg {

SimCase parse_sim_case(const std::string& name) {
  std::string s;
  for (char c : name) s += c == '_' ? '-' : static_cast<char>(std::tolower(c));
  if (s == "tgauss") return SimCase::TGauss;
  if (s == "beta") return SimCase::Beta;
  if (s == "gauss-linear") return SimCase::GaussLinear;
  if (s == "gauss-quadratic") return SimCase::GaussQuadratic;
  if (s == "d2s-gauss") return SimCase::D2SGauss;
  if (s == "d2s-beta") return SimCase::D2SBeta;
  throw invalid_input("unknown simulation case: " + name);
}

std::string sim_case_name(SimCase c) {
  switch (c) {
    case SimCase::TGauss: return "tgauss";
    case SimCase::Beta: return "beta";
    case SimCase::GaussLinear: return "gauss-linear";
    case SimCase::GaussQuadratic: return "gauss-quadratic";
    case SimCase::D2SGauss: return "d2s-gauss";
    case SimCase::D2SBeta: return "d2s-beta";
  }
  throw invalid_input("unknown simulation case");
}

double basis_fn(int j, double r) { return std::sqrt(2.0) * std::sin(2.0 * M_PI * j * r); }

double basis_kappa(int j) { return 2.0 * std::sqrt(2.0) * M_PI * j; }

double distortion_map(double a, double r) {
  if (a == 0.0) return r;
  return r - std::sin(a * r) / std::fabs(a);
}

namespace {

constexpr double kDistortLevels[6] = {-3 * M_PI, -2 * M_PI, -M_PI, M_PI, 2 * M_PI, 3 * M_PI};

struct Marginals {
  Eigen::VectorXd q1, q2;  // mean quantiles on the grid
  double d1 = 0.0, d2 = 0.0;  // density sups of the means
  std::function<double(double)> q1_at, q2_at;  // closed-form quantiles
};

Marginals d2d_marginals(SimCase scase, const GridPtr& grid) {
  Marginals mg;
  const int m = grid->size();
  mg.q1.resize(m);
  mg.q2.resize(m);
  if (scase == SimCase::TGauss) {
    const TruncNormal tn1{0.5, 0.2, 0.0, 1.0};
    const TruncNormal tn2{0.75, 0.3, 0.0, 1.0};
    for (int k = 0; k < m; ++k) {
      mg.q1[k] = tn1.quantile(grid->points()[k]);
      mg.q2[k] = tn2.quantile(grid->points()[k]);
    }
    mg.d1 = tn1.density_sup();
    mg.d2 = tn2.density_sup();
    mg.q1_at = [tn1](double u) { return tn1.quantile(u); };
    mg.q2_at = [tn2](double u) { return tn2.quantile(u); };
  } else if (scase == SimCase::Beta) {
    for (int k = 0; k < m; ++k) {
      mg.q1[k] = beta_quantile(6.0, 2.0, grid->points()[k]);
      mg.q2[k] = beta_quantile(2.0, 4.0, grid->points()[k]);
    }
    mg.d1 = beta_density_sup(6.0, 2.0);
    mg.d2 = beta_density_sup(2.0, 4.0);
    mg.q1_at = [](double u) { return beta_quantile(6.0, 2.0, u); };
    mg.q2_at = [](double u) { return beta_quantile(2.0, 4.0, u); };
  } else {
    throw invalid_input("case has no fixed marginal pair");
  }
  return mg;
}

// Predictor score half-widths and the true operator coefficients.
Eigen::VectorXd score_bounds(const SimConfig& cfg, double d1) {
  Eigen::VectorXd c(cfg.rank);
  const double total = cfg.powerlaw ? riemann_zeta(cfg.a0) : 1.0;
  for (int j = 1; j <= cfg.rank; ++j) {
    const double ups = cfg.powerlaw ? std::pow(j, -cfg.a0) : std::pow(2.0, -j);
    c[j - 1] = ups / (basis_kappa(j) * d1 * total);
  }
  return c;
}

Eigen::MatrixXd true_coeff_matrix(const SimConfig& cfg, double d1, double d2) {
  Eigen::MatrixXd b(cfg.rank, cfg.rank);
  for (int j = 1; j <= cfg.rank; ++j)
    for (int k = 1; k <= cfg.rank; ++k) {
      if (cfg.powerlaw) {
        b(j - 1, k - 1) = cfg.p * std::pow(j, -cfg.a1 + 1.0) *
                          std::pow(k, -cfg.a2 - 1.0) * d1 /
                          (d2 * riemann_zeta(cfg.a2));
      } else {
        b(j - 1, k - 1) = std::pow(2.0, -k) * basis_kappa(j) * d1 /
                          (basis_kappa(k) * d2);
      }
    }
  return b;
}

Eigen::VectorXd noise_bounds(const SimConfig& cfg, double d2) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(cfg.rank);
  if (!cfg.powerlaw) return e;
  for (int k = 1; k <= cfg.rank; ++k)
    e[k - 1] = (1.0 - cfg.p) * std::pow(k, -cfg.a2) /
               (basis_kappa(k) * d2 * riemann_zeta(cfg.a2));
  return e;
}

Eigen::MatrixXd basis_matrix(const GridPtr& grid, int rank) {
  Eigen::MatrixXd b(grid->size(), rank);
  for (int k = 0; k < grid->size(); ++k)
    for (int j = 0; j < rank; ++j) b(k, j) = basis_fn(j + 1, grid->points()[k]);
  return b;
}

DistributionQ from_samples_or_exact(const SimConfig& cfg, const GridPtr& grid,
                                    const Eigen::VectorXd& exact_qvals,
                                    const std::function<double(double)>& q_at,
                                    RngStream& rs) {
  if (cfg.m_samples <= 0) return DistributionQ(grid, exact_qvals);
  std::vector<double> draws(cfg.m_samples);
  for (double& x : draws) x = q_at(rs.uniform());
  return estimate_distribution(SampleSet(std::move(draws)), grid);
}

double pick_distortion(RngStream& rs) { return kDistortLevels[rs.uniform_int(0, 5)]; }

// Population quantile of the Beta(S1,S2) mixture with S1,S2 ~ Unif(1,5):
// Gauss-Legendre average, cached per grid point count.
const Eigen::VectorXd& beta_mixture_mean(const GridPtr& grid) {
  static std::mutex mu;
  static std::map<int, Eigen::VectorXd> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(grid->size());
  if (it != cache.end()) return it->second;
  // 8-point Gauss-Legendre nodes/weights on [-1,1].
  static const double gx[8] = {-0.9602898564975363, -0.7966664774136267,
                               -0.5255324099163290, -0.1834346424956498,
                               0.1834346424956498,  0.5255324099163290,
                               0.7966664774136267,  0.9602898564975363};
  static const double gw[8] = {0.1012285362903763, 0.2223810344533745,
                               0.3137066458778873, 0.3626837833783620,
                               0.3626837833783620, 0.3137066458778873,
                               0.2223810344533745, 0.1012285362903763};
  Eigen::VectorXd q = Eigen::VectorXd::Zero(grid->size());
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      const double s1 = 3.0 + 2.0 * gx[a];
      const double s2 = 3.0 + 2.0 * gx[b];
      const double w = gw[a] * gw[b] / 4.0;  // Unif(1,5)^2 density
      for (int k = 0; k < grid->size(); ++k)
        q[k] += w * beta_quantile(s1, s2, grid->points()[k]);
    }
  return cache.emplace(grid->size(), std::move(q)).first->second;
}

double beta1_weight(double p) { return 3.0 - 2.0 * p + p * p; }

}  // namespace

D2DSample generate_d2d(const SimConfig& cfg, const GridPtr& grid) {
  if (cfg.scase == SimCase::GaussLinear || cfg.scase == SimCase::GaussQuadratic)
    return generate_gaussian_pairs(cfg, grid);
  if (cfg.n < 1 || cfg.rank < 1) throw invalid_input("bad sample size or rank");
  const Marginals mg = d2d_marginals(cfg.scase, grid);
  const Eigen::VectorXd c = score_bounds(cfg, mg.d1);
  const Eigen::MatrixXd b = true_coeff_matrix(cfg, mg.d1, mg.d2);
  const Eigen::VectorXd e = noise_bounds(cfg, mg.d2);
  const Eigen::MatrixXd basis = basis_matrix(grid, cfg.rank);
  D2DSample out;
  out.predictors.reserve(cfg.n);
  out.responses.reserve(cfg.n);
  out.oracle.reserve(cfg.n);
  for (int i = 0; i < cfg.n; ++i) {
    RngStream score_rs = RngStream::keyed(cfg.seed, 0, i, 1);
    Eigen::VectorXd chi(cfg.rank);
    for (int j = 0; j < cfg.rank; ++j) chi[j] = score_rs.uniform(-c[j], c[j]);
    const Eigen::VectorXd gamma = b.transpose() * chi;

    RngStream noise_rs = RngStream::keyed(cfg.seed, 0, i, 2);
    double a = 0.0;
    Eigen::VectorXd eps = Eigen::VectorXd::Zero(cfg.rank);
    if (cfg.powerlaw) {
      for (int k = 0; k < cfg.rank; ++k) eps[k] = noise_rs.uniform(-e[k], e[k]);
    } else {
      a = pick_distortion(noise_rs);
    }

    const Eigen::VectorXd pred_exact = mg.q1 + basis * chi;
    const Eigen::VectorXd oracle_q = mg.q2 + basis * gamma;
    Eigen::VectorXd resp_exact;
    if (cfg.powerlaw) {
      resp_exact = mg.q2 + basis * (gamma + eps);
    } else {
      resp_exact = oracle_q.unaryExpr([a](double r) { return distortion_map(a, r); });
    }

    RngStream pred_draw = RngStream::keyed(cfg.seed, 0, i, 3);
    out.predictors.push_back(from_samples_or_exact(
        cfg, grid, pred_exact,
        [&](double u) {
          double v = mg.q1_at(u);
          for (int j = 0; j < cfg.rank; ++j) v += chi[j] * basis_fn(j + 1, u);
          return v;
        },
        pred_draw));
    RngStream resp_draw = RngStream::keyed(cfg.seed, 0, i, 4);
    out.responses.push_back(from_samples_or_exact(
        cfg, grid, resp_exact,
        [&](double u) {
          double v = mg.q2_at(u);
          for (int k = 0; k < cfg.rank; ++k)
            v += (gamma[k] + eps[k]) * basis_fn(k + 1, u);
          return distortion_map(a, v);
        },
        resp_draw));
    out.oracle.emplace_back(grid, oracle_q);
  }
  return out;
}

D2DSample generate_gaussian_pairs(const SimConfig& cfg, const GridPtr& grid) {
  if (cfg.scase != SimCase::GaussLinear && cfg.scase != SimCase::GaussQuadratic)
    throw invalid_input("generate_gaussian_pairs handles the Gaussian cases only");
  Eigen::VectorXd z(grid->size());
  for (int k = 0; k < grid->size(); ++k) z[k] = norm_quantile(grid->points()[k]);
  const bool quadratic = cfg.scase == SimCase::GaussQuadratic;
  D2DSample out;
  for (int i = 0; i < cfg.n; ++i) {
    RngStream rs = RngStream::keyed(cfg.seed, 0, i, 1);
    const double u1 = rs.normal();
    const double s1 = rs.gamma(0.5, 0.5);
    const double s2 = rs.gamma(1.0, 0.5);
    const double err = 0.5 * rs.normal();
    const double cond = quadratic ? 1.0 + u1 - 0.5 * u1 * u1 : 1.0 + u1;
    const double u2 = cond + err;
    RngStream pred_draw = RngStream::keyed(cfg.seed, 0, i, 3);
    out.predictors.push_back(from_samples_or_exact(
        cfg, grid, Eigen::VectorXd::Constant(z.size(), u1) + s1 * z,
        [&](double u) { return u1 + s1 * norm_quantile(u); }, pred_draw));
    RngStream resp_draw = RngStream::keyed(cfg.seed, 0, i, 4);
    out.responses.push_back(from_samples_or_exact(
        cfg, grid, Eigen::VectorXd::Constant(z.size(), u2) + s2 * z,
        [&](double u) { return u2 + s2 * norm_quantile(u); }, resp_draw));
    // E(sigma_2) = 2 under Gamma(1, 0.5): the conditional Frechet mean keeps
    // the conditional location and the mean scale.
    out.oracle.emplace_back(
        grid, Eigen::VectorXd(Eigen::VectorXd::Constant(z.size(), cond) + 2.0 * z));
  }
  return out;
}

D2SSample generate_d2s(const SimConfig& cfg, const GridPtr& grid) {
  if (cfg.scase != SimCase::D2SGauss && cfg.scase != SimCase::D2SBeta)
    throw invalid_input("generate_d2s handles the scalar-response cases only");
  const bool gauss = cfg.scase == SimCase::D2SGauss;
  const double noise_sd = gauss ? 1.0 : 0.2;
  const int m = grid->size();
  Eigen::VectorXd mean_q(m);
  if (gauss) {
    for (int k = 0; k < m; ++k) mean_q[k] = norm_quantile(grid->points()[k]);
  } else {
    mean_q = beta_mixture_mean(grid);
  }
  Eigen::VectorXd bw(m);
  for (int k = 0; k < m; ++k) bw[k] = beta1_weight(grid->points()[k]);
  D2SSample out;
  for (int i = 0; i < cfg.n; ++i) {
    RngStream rs = RngStream::keyed(cfg.seed, 0, i, 1);
    std::function<double(double)> q_base;
    if (gauss) {
      const double u = rs.normal();
      const double s = rs.gamma(0.5, 0.5);
      q_base = [u, s](double p) { return u + s * norm_quantile(p); };
    } else {
      const double s1 = rs.uniform(1.0, 5.0);
      const double s2 = rs.uniform(1.0, 5.0);
      q_base = [s1, s2](double p) { return beta_quantile(s1, s2, p); };
    }
    RngStream noise_rs = RngStream::keyed(cfg.seed, 0, i, 2);
    const double a = pick_distortion(noise_rs);
    Eigen::VectorXd q(m);
    double inner = 0.0;
    for (int k = 0; k < m; ++k) {
      q[k] = distortion_map(a, q_base(grid->points()[k]));
      inner += grid->weights()[k] * bw[k] * (q[k] - mean_q[k]);
    }
    RngStream pred_draw = RngStream::keyed(cfg.seed, 0, i, 3);
    out.predictors.push_back(from_samples_or_exact(
        cfg, grid, q, [&](double u) { return distortion_map(a, q_base(u)); },
        pred_draw));
    out.oracle_mean.push_back(1.0 + inner);
    out.y.push_back(1.0 + inner + noise_sd * noise_rs.normal());
  }
  return out;
}

KernelOnGrid true_kernel_on_grid(const SimConfig& cfg, const GridPtr& grid) {
  const Marginals mg = d2d_marginals(cfg.scase, grid);
  const Eigen::MatrixXd basis = basis_matrix(grid, cfg.rank);
  return kernel_from_coefficients(true_coeff_matrix(cfg, mg.d1, mg.d2),
                                  DistributionQ(grid, mg.q1), basis,
                                  DistributionQ(grid, mg.q2), basis);
}

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr eptr;
  std::mutex emu;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(emu);
          if (!eptr) eptr = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (eptr) std::rethrow_exception(eptr);
}

double median(std::vector<double> v) {
  if (v.empty()) throw invalid_input("median of an empty set");
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

namespace {

// One fit + evaluation on fresh units drawn from the same replicate stream.
ReplicateResult run_replicate(const StudyConfig& cfg, const GridPtr& grid,
                              std::uint64_t rep_seed, const KernelOnGrid* truth) {
  SimConfig sim = cfg.sim;
  sim.seed = rep_seed;
  sim.n = cfg.sim.n + cfg.n_eval;
  const D2DSample all = generate_d2d(sim, grid);
  const std::vector<DistributionQ> train_x(all.predictors.begin(),
                                           all.predictors.begin() + cfg.sim.n);
  const std::vector<DistributionQ> train_y(all.responses.begin(),
                                           all.responses.begin() + cfg.sim.n);
  const D2DFit fit = fit_d2d(train_x, train_y, cfg.trunc);
  ReplicateResult res;
  int eta_events = 0;
  res.awd = evaluate_awd(
      fit,
      std::vector<DistributionQ>(all.predictors.begin() + cfg.sim.n, all.predictors.end()),
      std::vector<DistributionQ>(all.oracle.begin() + cfg.sim.n, all.oracle.end()),
      &eta_events);
  res.eta_rate = static_cast<double>(eta_events) / cfg.n_eval;
  if (truth != nullptr) {
    // Compare against the true operator truncated at the fitted ranks, both
    // expressed at the population means.
    const Eigen::MatrixXd basis = basis_matrix(grid, cfg.sim.rank);
    const Marginals mg = d2d_marginals(cfg.sim.scase, grid);
    const Eigen::MatrixXd bfull = true_coeff_matrix(cfg.sim, mg.d1, mg.d2);
    const int jj = std::min(fit.trunc_j, cfg.sim.rank);
    const int kk = std::min(fit.trunc_k, cfg.sim.rank);
    const KernelOnGrid target = kernel_from_coefficients(
        bfull.topLeftCorner(jj, kk), truth->pred_base, basis, truth->resp_base, basis);
    const KernelOnGrid moved =
        transport_operator_kernel(fit.kernel(), truth->pred_base, truth->resp_base);
    const double d = hs_distance(moved, target);
    res.se = d * d;
  }
  return res;
}

}  // namespace

std::vector<ReplicateResult> run_d2d_study(const StudyConfig& cfg, const GridPtr& grid) {
  if (cfg.replicates < 1) throw invalid_input("study needs at least one replicate");
  const bool has_truth =
      cfg.sim.scase == SimCase::TGauss || cfg.sim.scase == SimCase::Beta;
  std::optional<KernelOnGrid> truth;
  if (has_truth) truth = true_kernel_on_grid(cfg.sim, grid);
  std::vector<ReplicateResult> results(cfg.replicates);
  parallel_for(cfg.replicates, cfg.threads, [&](int r) {
    const std::uint64_t rep_seed =
        RngStream::keyed(cfg.sim.seed, static_cast<std::uint64_t>(r) + 1, 0, 0xabc)
            .next_u64();
    results[r] = run_replicate(cfg, grid, rep_seed, truth ? &*truth : nullptr);
  });
  return results;
}

ConvergenceResult convergence_study(const StudyConfig& cfg, const std::vector<int>& ns,
                                    const GridPtr& grid) {
  if (ns.size() < 2) throw invalid_input("convergence study needs at least two sample sizes");
  if (cfg.trunc.method != TruncMethod::Fixed)
    throw invalid_input("convergence study requires a fixed truncation");
  ConvergenceResult out;
  for (int n : ns) {
    StudyConfig c = cfg;
    c.sim.n = n;
    c.n_eval = 1;  // the error metric here is the operator discrepancy only
    std::vector<ReplicateResult> res = run_d2d_study(c, grid);
    std::vector<double> se, logs;
    for (const auto& r : res) {
      se.push_back(r.se);
      logs.push_back(std::log(r.se));
    }
    double mean_log = 0.0;
    for (double v : logs) mean_log += v;
    mean_log /= logs.size();
    out.points.push_back({n, mean_log, median(se)});
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& pt : out.points) {
    const double x = std::log(static_cast<double>(pt.n));
    sx += x;
    sy += pt.mean_log_se;
    sxx += x * x;
    sxy += x * pt.mean_log_se;
  }
  const double n_pts = static_cast<double>(out.points.size());
  out.slope = (sxy - sx * sy / n_pts) / (sxx - sx * sx / n_pts);
  return out;
}

}  // namespace wassreg
