#include <doctest.h>

#include <cmath>

#include "wassreg/distribution.hpp"
#include "wassreg/errors.hpp"
#include "wassreg/rng.hpp"
#include "wassreg/special.hpp"

using namespace wassreg;

namespace {

DistributionQ gaussian(const GridPtr& grid, double mu, double sigma) {
  Eigen::VectorXd q(grid->size());
  for (int k = 0; k < grid->size(); ++k)
    q[k] = mu + sigma * norm_quantile(grid->points()[k]);
  return DistributionQ(grid, std::move(q));
}

}  // namespace

TEST_CASE("quantile_from_cdf on the identity cdf gives the grid points") {
  const GridPtr grid = ProbGrid::midpoint(1000);
  CdfCurve cdf{(Eigen::VectorXd(2) << 0.0, 1.0).finished(),
               (Eigen::VectorXd(2) << 0.0, 1.0).finished()};
  const DistributionQ d = quantile_from_cdf(cdf, grid);
  for (int k = 0; k < grid->size(); ++k)
    CHECK(d.qvals()[k] == doctest::Approx(grid->points()[k]).epsilon(1e-14));
}

TEST_CASE("quantile_from_cdf on a point mass is constant") {
  const GridPtr grid = ProbGrid::midpoint(1000);
  CdfCurve cdf{(Eigen::VectorXd(2) << 0.5, 0.5).finished(),
               (Eigen::VectorXd(2) << 0.0, 1.0).finished()};
  const DistributionQ d = quantile_from_cdf(cdf, grid);
  CHECK(d.qvals().minCoeff() == 0.5);
  CHECK(d.qvals().maxCoeff() == 0.5);
}

TEST_CASE("quantile_from_cdf on two atoms splits at the atom mass") {
  const GridPtr grid = ProbGrid::midpoint(1000);
  CdfCurve cdf{(Eigen::VectorXd(4) << 0.0, 0.0, 1.0, 1.0).finished(),
               (Eigen::VectorXd(4) << 0.0, 0.5, 0.5, 1.0).finished()};
  const DistributionQ d = quantile_from_cdf(cdf, grid);
  for (int k = 0; k < grid->size(); ++k)
    CHECK(d.qvals()[k] == (grid->points()[k] <= 0.5 ? 0.0 : 1.0));
}

TEST_CASE("quantile_from_cdf rejects a cdf that never reaches the grid level") {
  const GridPtr grid = ProbGrid::midpoint(100);
  CdfCurve cdf{(Eigen::VectorXd(2) << 0.0, 1.0).finished(),
               (Eigen::VectorXd(2) << 0.0, 0.5).finished()};
  CHECK_THROWS_AS(quantile_from_cdf(cdf, grid), InputError);
}

TEST_CASE("cdf/quantile round-trip is exact at grid points") {
  const GridPtr grid = ProbGrid::midpoint(500);

  SUBCASE("strictly increasing quantiles") {
    const DistributionQ d = gaussian(grid, 0.3, 1.7);
    const DistributionQ back = quantile_from_cdf(cdf_from_quantile(d), grid);
    CHECK(back.qvals() == d.qvals());
  }
  SUBCASE("constant quantiles (point mass)") {
    const DistributionQ d(grid, Eigen::VectorXd::Constant(grid->size(), 2.5));
    const DistributionQ back = quantile_from_cdf(cdf_from_quantile(d), grid);
    CHECK(back.qvals() == d.qvals());
  }
  SUBCASE("flat stretch in the middle") {
    Eigen::VectorXd q(grid->size());
    for (int k = 0; k < grid->size(); ++k) {
      const double p = grid->points()[k];
      q[k] = p < 0.4 ? p : (p < 0.6 ? 0.4 : p - 0.2);
    }
    const DistributionQ d(grid, std::move(q));
    const DistributionQ back = quantile_from_cdf(cdf_from_quantile(d), grid);
    // Flat stretches only round-trip to within one grid cell of mass.
    for (int k = 0; k < grid->size(); ++k)
      CHECK(std::abs(back.qvals()[k] - d.qvals()[k]) <= 2.0 / grid->size());
  }
}

TEST_CASE("constant quantile produces a single-step cdf") {
  const GridPtr grid = ProbGrid::midpoint(100);
  const DistributionQ d(grid, Eigen::VectorXd::Constant(100, 1.25));
  const CdfCurve cdf = cdf_from_quantile(d);
  CHECK(cdf.xs.minCoeff() == 1.25);
  CHECK(cdf.xs.maxCoeff() == 1.25);
  CHECK(cdf.fvals[cdf.fvals.size() - 1] == 1.0);
}

TEST_CASE("estimate_distribution of a constant sample is that constant") {
  const GridPtr grid = ProbGrid::midpoint(100);
  const DistributionQ d = estimate_distribution(SampleSet{{3.0, 3.0, 3.0, 3.0}}, grid);
  CHECK(d.qvals().minCoeff() == 3.0);
  CHECK(d.qvals().maxCoeff() == 3.0);
}

TEST_CASE("estimate_distribution of a uniform lattice tracks the identity") {
  const GridPtr grid = ProbGrid::midpoint(1000);
  const int m = 10000;
  std::vector<double> v(m);
  for (int i = 0; i < m; ++i) v[i] = static_cast<double>(i + 1) / m;
  const DistributionQ d = estimate_distribution(SampleSet{std::move(v)}, grid);
  for (int k = 0; k < grid->size(); ++k)
    CHECK(std::abs(d.qvals()[k] - grid->points()[k]) <= 1.0 / m + 1e-12);
}

TEST_CASE("estimate_distribution matches the normal quantile on big samples") {
  const GridPtr grid = ProbGrid::midpoint(1000);
  RngStream rs = RngStream::keyed(123, 0, 0, 1);
  std::vector<double> v(100000);
  for (double& x : v) x = rs.normal();
  const DistributionQ d = estimate_distribution(SampleSet{std::move(v)}, grid);
  for (int k = 0; k < grid->size(); ++k) {
    const double p = grid->points()[k];
    if (p < 0.01 || p > 0.99) continue;
    CHECK(std::abs(d.qvals()[k] - norm_quantile(p)) < 0.05);
  }
}

TEST_CASE("estimate_distribution output is strictly increasing for mixed samples") {
  const GridPtr grid = ProbGrid::midpoint(200);
  const DistributionQ d =
      estimate_distribution(SampleSet{{1.0, 1.0, 1.0, 2.0, 2.0, 5.0}}, grid);
  CHECK(d.atomless());
  CHECK_THROWS_AS(estimate_distribution(SampleSet{{1.0}}, grid), InputError);
}

TEST_CASE("estimate_distribution is shift-equivariant and permutation-invariant") {
  const GridPtr grid = ProbGrid::midpoint(100);
  const DistributionQ a = estimate_distribution(SampleSet{{3.0, 1.0, 2.0, 7.0}}, grid);
  const DistributionQ b = estimate_distribution(SampleSet{{7.0, 2.0, 1.0, 3.0}}, grid);
  CHECK(a.qvals() == b.qvals());
  const DistributionQ shifted =
      estimate_distribution(SampleSet{{4.5, 2.5, 3.5, 8.5}}, grid);
  for (int k = 0; k < grid->size(); ++k)
    CHECK(shifted.qvals()[k] == doctest::Approx(a.qvals()[k] + 1.5).epsilon(1e-12));
}

TEST_CASE("wasserstein distance closed forms") {
  const GridPtr grid = ProbGrid::midpoint(1000);
  const DistributionQ a = gaussian(grid, 0.0, 1.0);
  const DistributionQ b = gaussian(grid, 1.0, 1.0);
  CHECK(wasserstein_distance(a, a) == 0.0);
  CHECK(wasserstein_distance(a, b) == doctest::Approx(1.0).epsilon(1e-12));
  const DistributionQ c = gaussian(grid, 0.5, 0.2);
  const DistributionQ d = gaussian(grid, 0.75, 0.3);
  CHECK(std::abs(wasserstein_distance(c, d) - std::sqrt(0.0725)) < 1e-3);
}

TEST_CASE("wasserstein distance obeys the triangle inequality and shift invariance") {
  const GridPtr grid = ProbGrid::midpoint(300);
  RngStream rs = RngStream::keyed(9, 0, 0, 2);
  for (int rep = 0; rep < 50; ++rep) {
    const DistributionQ a = gaussian(grid, rs.uniform(-2, 2), rs.uniform(0.2, 2));
    const DistributionQ b = gaussian(grid, rs.uniform(-2, 2), rs.uniform(0.2, 2));
    const DistributionQ c = gaussian(grid, rs.uniform(-2, 2), rs.uniform(0.2, 2));
    CHECK(wasserstein_distance(a, c) <=
          wasserstein_distance(a, b) + wasserstein_distance(b, c) + 1e-10);
    const double shift = rs.uniform(-5, 5);
    const DistributionQ as(grid, a.qvals().array() + shift);
    const DistributionQ bs(grid, b.qvals().array() + shift);
    CHECK(std::abs(wasserstein_distance(as, bs) - wasserstein_distance(a, b)) < 1e-12);
  }
}

TEST_CASE("monotonicity repair and rejection") {
  const GridPtr grid = ProbGrid::midpoint(10);
  Eigen::VectorXd q(10);
  for (int k = 0; k < 10; ++k) q[k] = 0.1 * k;

  SUBCASE("tiny violations are repaired") {
    q[5] = q[4] - 1e-10;
    const DistributionQ d(grid, q);
    for (int k = 1; k < 10; ++k) CHECK(d.qvals()[k] >= d.qvals()[k - 1]);
  }
  SUBCASE("large violations throw") {
    q[5] = q[4] - 0.5;
    CHECK_THROWS_AS(DistributionQ(grid, q), NumericalError);
  }
}

TEST_CASE("grid mismatch is rejected") {
  const DistributionQ a(ProbGrid::midpoint(100), Eigen::VectorXd::LinSpaced(100, 0, 1));
  const DistributionQ b(ProbGrid::midpoint(101), Eigen::VectorXd::LinSpaced(101, 0, 1));
  CHECK_THROWS_AS(wasserstein_distance(a, b), InputError);
}
