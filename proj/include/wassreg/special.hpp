#pragma once

namespace wassreg {

// Standard normal cdf and its inverse (Wichura AS241, ~1e-15 accuracy).
double norm_cdf(double x);
double norm_quantile(double p);
double norm_pdf(double x);

// Regularized incomplete beta I_x(a,b) and its inverse in x.
double inc_beta(double a, double b, double x);
double beta_quantile(double a, double b, double p);

// sup of the Beta(a,b) density for a,b >= 1.
double beta_density_sup(double a, double b);

// Gaussian N(mean, sd^2) truncated to [lo, hi].
struct TruncNormal {
  double mean, sd, lo, hi;
  double quantile(double p) const;
  double cdf(double x) const;
  double density_sup() const;
};

// Riemann zeta for s > 1 (Euler-Maclaurin tail).
double riemann_zeta(double s);

}  // namespace wassreg
