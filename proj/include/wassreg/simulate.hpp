#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <vector>

#include "wassreg/d2d.hpp"
#include "wassreg/d2s.hpp"

namespace wassreg {

// Synthetic data families for the regression experiments.
enum class SimCase {
  TGauss,         // truncated-normal marginals, figure-style geometric score decay
  Beta,           // Beta(6,2) -> Beta(2,4) marginals
  GaussLinear,    // Gaussian pairs with linear conditional mean
  GaussQuadratic, // Gaussian pairs with quadratic conditional mean
  D2SGauss,       // scalar response on distorted Gaussian predictors
  D2SBeta,        // scalar response on Beta predictors
};

SimCase parse_sim_case(const std::string& name);
std::string sim_case_name(SimCase c);

struct SimConfig {
  SimCase scase = SimCase::TGauss;
  int n = 100;
  std::uint64_t seed = 1;
  int m_samples = 0;        // >0: observe m_samples draws per unit instead of exact quantiles
  bool powerlaw = false;    // power-law score decay + tangent response noise
  double a0 = 1.5;          // score decay exponent (powerlaw mode)
  double p = 0.9;           // response signal fraction (powerlaw mode)
  double a1 = 8.5;          // operator decay over predictor components (powerlaw mode)
  double a2 = 5.0;          // response noise decay (powerlaw mode)
  int rank = 20;            // basis truncation of the true operator
};

// Orthonormal sine basis and its derivative sup-norm constants.
double basis_fn(int j, double r);
double basis_kappa(int j);

// g_a(r) = r - sin(ar)/|a| for a != 0, identity at a = 0; non-decreasing.
double distortion_map(double a, double r);

struct D2DSample {
  std::vector<DistributionQ> predictors;
  std::vector<DistributionQ> responses;
  // Oracle conditional means of the responses (no distortion / noise).
  std::vector<DistributionQ> oracle;
};

D2DSample generate_d2d(const SimConfig& cfg, const GridPtr& grid);
D2DSample generate_gaussian_pairs(const SimConfig& cfg, const GridPtr& grid);

struct D2SSample {
  std::vector<DistributionQ> predictors;
  std::vector<double> y;
  std::vector<double> oracle_mean;  // E[Y | predictor]
};

D2SSample generate_d2s(const SimConfig& cfg, const GridPtr& grid);

// True regression kernel of a d2d case, tabulated on the grid.
KernelOnGrid true_kernel_on_grid(const SimConfig& cfg, const GridPtr& grid);

struct ReplicateResult {
  double awd = 0.0;       // mean Wasserstein error on fresh predictors
  double se = 0.0;        // squared HS distance to the truncated true operator
  double eta_rate = 0.0;  // fraction of out-of-sample predictions needing projection
};

struct StudyConfig {
  SimConfig sim;
  TruncationChoice trunc = TruncationChoice::cv();
  int replicates = 100;
  int n_eval = 200;  // fresh predictors per replicate for the AWD estimate
  int threads = 0;   // 0 = hardware concurrency
};

std::vector<ReplicateResult> run_d2d_study(const StudyConfig& cfg, const GridPtr& grid);

struct ConvergencePoint {
  int n = 0;
  double mean_log_se = 0.0;  // average log squared estimation error
  double se_median = 0.0;
};

struct ConvergenceResult {
  std::vector<ConvergencePoint> points;
  double slope = 0.0;  // least-squares slope of mean log SE on log n
};

ConvergenceResult convergence_study(const StudyConfig& cfg, const std::vector<int>& ns,
                                    const GridPtr& grid);

// Simple index-chunked parallel map used by the studies.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

double median(std::vector<double> v);

}  // namespace wassreg
