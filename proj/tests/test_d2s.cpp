#include <doctest.h>

#include <cmath>
#include <vector>

#include "wassreg/d2s.hpp"
#include "wassreg/errors.hpp"
#include "wassreg/simulate.hpp"

using namespace wassreg;

namespace {

std::vector<DistributionQ> predictors(int n, std::uint64_t seed, const GridPtr& grid) {
  SimConfig cfg;
  cfg.scase = SimCase::TGauss;
  cfg.n = n;
  cfg.seed = seed;
  return generate_d2d(cfg, grid).predictors;
}

}  // namespace

TEST_CASE("constant responses give constant predictions exactly") {
  const GridPtr grid = ProbGrid::midpoint(300);
  const auto xs = predictors(25, 51, grid);
  const std::vector<double> y(xs.size(), 4.25);
  const ScalarFit fit = fit_d2s(xs, y, TruncationChoice::fve(0.9));
  CHECK(fit.intercept == 4.25);
  for (const auto& x : xs) CHECK(predict_d2s(fit, x) == 4.25);
}

TEST_CASE("predictions are shift and scale equivariant in the response") {
  const GridPtr grid = ProbGrid::midpoint(300);
  const auto xs = predictors(30, 52, grid);
  std::vector<double> y;
  for (const auto& x : xs) y.push_back(x.qvals()[250] - x.qvals()[50]);
  const double a = -2.5, b = 0.75;
  std::vector<double> y2;
  for (double v : y) y2.push_back(a * v + b);
  const auto trunc = TruncationChoice::fixed(3, 1);
  const ScalarFit f1 = fit_d2s(xs, y, trunc);
  const ScalarFit f2 = fit_d2s(xs, y2, trunc);
  for (const auto& x : xs) {
    const double p1 = predict_d2s(f1, x);
    const double p2 = predict_d2s(f2, x);
    CHECK(p2 == doctest::Approx(a * p1 + b).epsilon(1e-10));
  }
}

TEST_CASE("d2s fit recovers a linear functional of the predictor") {
  const GridPtr grid = ProbGrid::midpoint(500);
  SimConfig cfg;
  cfg.scase = SimCase::D2SGauss;
  cfg.n = 150;
  cfg.seed = 53;
  const D2SSample s = generate_d2s(cfg, grid);
  const ScalarFit fit = fit_d2s(s.predictors, s.y, TruncationChoice::cv(5, 1));
  double err = 0.0;
  for (std::size_t i = 0; i < s.predictors.size(); ++i)
    err += std::abs(predict_d2s(fit, s.predictors[i]) - s.oracle_mean[i]);
  err /= static_cast<double>(s.predictors.size());
  CHECK(err < 0.5);  // noise sd is 1, the structural part should be mostly captured
}

TEST_CASE("input validation") {
  const GridPtr grid = ProbGrid::midpoint(100);
  const auto xs = predictors(5, 54, grid);
  std::vector<double> y(4, 0.0);
  CHECK_THROWS_AS(fit_d2s(xs, y, TruncationChoice::fve(0.9)), InputError);
  y = {1.0, 2.0, std::nan(""), 0.0, 3.0};
  CHECK_THROWS_AS(fit_d2s(xs, y, TruncationChoice::fve(0.9)), InputError);
}
