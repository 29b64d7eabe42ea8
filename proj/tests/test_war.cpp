#include <doctest.h>

#include <cmath>

#include "wassreg/errors.hpp"
#include "wassreg/tangent.hpp"
#include "wassreg/war.hpp"

using namespace wassreg;

TEST_CASE("default process spec is feasible and validates") {
  const ARProcessSpec spec = ARProcessSpec::default_spec(ProbGrid::midpoint(200));
  CHECK_NOTHROW(spec.validate());
  CHECK(spec.slope_bound() < 1.0);
  CHECK(spec.slope_bound() > 0.0);
  CHECK(spec.coeff_b(1, 1) > spec.coeff_b(2, 1));
  CHECK(spec.innovation_bound(1) > spec.innovation_bound(2));
  CHECK(spec.gamma_power_norm_bound(3) < spec.gamma_power_norm_bound(1));
}

TEST_CASE("invalid specs are rejected") {
  ARProcessSpec spec = ARProcessSpec::default_spec(ProbGrid::midpoint(100));
  SUBCASE("p outside (0,1)") {
    spec.p = 1.0;
    CHECK_THROWS_AS(spec.validate(), InputError);
  }
  SUBCASE("innovation decay too slow") {
    spec.a2 = 0.9;
    CHECK_THROWS_AS(spec.validate(), InputError);
  }
  SUBCASE("operator decay too slow") {
    spec.a1 = 1.4;
    CHECK_THROWS_AS(spec.validate(), InputError);
  }
}

TEST_CASE("simulated series is deterministic in the seed and stays valid") {
  const ARProcessSpec spec = ARProcessSpec::default_spec(ProbGrid::midpoint(300));
  const auto a = simulate_ar_process(spec, 50, 7);
  const auto b = simulate_ar_process(spec, 50, 7);
  const auto c = simulate_ar_process(spec, 50, 8);
  REQUIRE(a.size() == 50);
  for (int i = 0; i < 50; ++i) CHECK(a[i].qvals() == b[i].qvals());
  CHECK(a[0].qvals() != c[0].qvals());
  for (const auto& d : a) {
    CHECK(d.qvals().minCoeff() >= 0.0);
    CHECK(d.qvals().maxCoeff() <= 1.0);
  }
}

TEST_CASE("tangent slopes of simulated elements respect the feasibility bound") {
  const ARProcessSpec spec = ARProcessSpec::default_spec(ProbGrid::midpoint(300));
  const auto series = simulate_ar_process(spec, 100, 17);
  const auto& q = spec.mean.qvals();
  for (const auto& d : series) {
    const TangentVector g = log_map(spec.mean, d);
    for (int k = 1; k < g.size(); ++k) {
      const double slope = std::abs(g.vals()[k] - g.vals()[k - 1]) / (q[k] - q[k - 1]);
      CHECK(slope <= spec.slope_bound() + 1e-8);
    }
  }
}

TEST_CASE("fit, one-step forecast, and rolling contraction") {
  const ARProcessSpec spec = ARProcessSpec::default_spec(ProbGrid::midpoint(300));
  const auto series = simulate_ar_process(spec, 150, 27);
  ARFitOptions opts;
  opts.trunc = TruncationChoice::fve(0.95);
  const ARFit fit = fit_ar(series, opts);
  CHECK(fit.trunc_j >= 1);
  CHECK(fit.test_error >= 0.0);
  CHECK(std::abs(fit.coeff(0, 0) - spec.coeff_b(1, 1)) < 0.2);

  const auto [next, eta] = forecast_one(fit, series.back());
  CHECK(eta > 0.0);
  CHECK(eta <= 1.0);

  const RollingForecast rf = forecast_rolling(fit, series.back(), 8);
  REQUIRE(rf.steps.size() == 8);
  CHECK(wasserstein_distance(rf.steps[0], next) == 0.0);
  const double d0 = wasserstein_distance(rf.steps[0], fit.mean.mean);
  const double d7 = wasserstein_distance(rf.steps[7], fit.mean.mean);
  CHECK(d7 < d0);
}

TEST_CASE("series shorter than the selection split is rejected") {
  const ARProcessSpec spec = ARProcessSpec::default_spec(ProbGrid::midpoint(100));
  const auto series = simulate_ar_process(spec, 3, 5);
  ARFitOptions opts;
  CHECK_THROWS_AS(fit_ar(series, opts), InputError);
}
