#include <doctest.h>

#include <cmath>

#include "wassreg/errors.hpp"
#include "wassreg/rng.hpp"
#include "wassreg/special.hpp"
#include "wassreg/tangent.hpp"

using namespace wassreg;

namespace {

DistributionQ random_distribution(const GridPtr& grid, RngStream& rs) {
  // Mix of truncated-normal and affine-gaussian shapes keeps tails varied.
  if (rs.uniform() < 0.5) {
    const TruncNormal tn{rs.uniform(0.2, 0.8), rs.uniform(0.05, 0.4), 0.0, 1.0};
    Eigen::VectorXd q(grid->size());
    for (int k = 0; k < grid->size(); ++k) q[k] = tn.quantile(grid->points()[k]);
    return DistributionQ(grid, std::move(q));
  }
  const double mu = rs.uniform(-2, 2), sigma = rs.uniform(0.2, 2);
  Eigen::VectorXd q(grid->size());
  for (int k = 0; k < grid->size(); ++k)
    q[k] = mu + sigma * norm_quantile(grid->points()[k]);
  return DistributionQ(grid, std::move(q));
}

}  // namespace

TEST_CASE("log/exp round trip, isometry, geodesics") {
  const GridPtr grid = ProbGrid::midpoint(400);
  RngStream rs = RngStream::keyed(21, 0, 0, 5);
  for (int rep = 0; rep < 100; ++rep) {
    const DistributionQ base = random_distribution(grid, rs);
    const DistributionQ t1 = random_distribution(grid, rs);
    const DistributionQ t2 = random_distribution(grid, rs);
    const TangentVector v1 = log_map(base, t1);
    const TangentVector v2 = log_map(base, t2);
    CHECK(wasserstein_distance(exp_map(v1), t1) < 1e-12);
    const TangentVector diff(base, v1.vals() - v2.vals());
    CHECK(std::abs(tangent_norm(diff) - wasserstein_distance(t1, t2)) < 1e-10);
    const DistributionQ mid = geodesic_point(base, t1, 0.5);
    CHECK(std::abs(wasserstein_distance(base, mid) -
                   0.5 * wasserstein_distance(base, t1)) < 1e-10);
  }
}

TEST_CASE("parallel transport is unitary and preserves inner products") {
  const GridPtr grid = ProbGrid::midpoint(400);
  RngStream rs = RngStream::keyed(22, 0, 0, 5);
  for (int rep = 0; rep < 100; ++rep) {
    const DistributionQ base = random_distribution(grid, rs);
    const DistributionQ dest = random_distribution(grid, rs);
    const TangentVector v = log_map(base, random_distribution(grid, rs));
    const TangentVector u = log_map(base, random_distribution(grid, rs));
    const TangentVector tv = parallel_transport(v, dest);
    const TangentVector tu = parallel_transport(u, dest);
    CHECK(std::abs(tangent_norm(tv) - tangent_norm(v)) < 1e-12);
    CHECK(std::abs(inner_product(tu, tv) - inner_product(u, v)) < 1e-12);
  }
}

TEST_CASE("exp_map rejects vectors outside the log image") {
  const GridPtr grid = ProbGrid::midpoint(100);
  const DistributionQ base(grid, Eigen::VectorXd::LinSpaced(100, 0, 1));
  Eigen::VectorXd bad = Eigen::VectorXd::Zero(100);
  bad[50] = -0.5;  // creates a decreasing stretch in base + bad
  CHECK_THROWS_AS(exp_map(TangentVector(base, bad)), NumericalError);
}

TEST_CASE("log_map and transport require atomless references") {
  const GridPtr grid = ProbGrid::midpoint(100);
  const DistributionQ atom(grid, Eigen::VectorXd::Constant(100, 0.5));
  const DistributionQ ok(grid, Eigen::VectorXd::LinSpaced(100, 0, 1));
  CHECK_THROWS_AS(log_map(atom, ok), InputError);
  CHECK_THROWS_AS(parallel_transport(log_map(ok, ok), atom), InputError);
}

TEST_CASE("inner product demands a common base") {
  const GridPtr grid = ProbGrid::midpoint(100);
  const DistributionQ b1(grid, Eigen::VectorXd::LinSpaced(100, 0, 1));
  const DistributionQ b2(grid, Eigen::VectorXd::LinSpaced(100, 1, 3));
  CHECK_THROWS_AS(inner_product(log_map(b1, b2), log_map(b2, b1)), InputError);
}

TEST_CASE("kernel reconstruction from coefficients and transport invariance") {
  const GridPtr grid = ProbGrid::midpoint(200);
  RngStream rs = RngStream::keyed(23, 0, 0, 5);
  const DistributionQ pb = random_distribution(grid, rs);
  const DistributionQ rb = random_distribution(grid, rs);
  const int m = grid->size();
  // Two orthonormal sine columns per side.
  Eigen::MatrixXd phi(m, 2), psi(m, 2);
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < 2; ++j) {
      phi(k, j) = std::sqrt(2.0) * std::sin(2 * M_PI * (j + 1) * grid->points()[k]);
      psi(k, j) = std::sqrt(2.0) * std::cos(2 * M_PI * (j + 1) * grid->points()[k]);
    }
  Eigen::MatrixXd coeff(2, 2);
  coeff << 1.0, -0.3, 0.2, 0.5;
  const KernelOnGrid built = kernel_from_coefficients(coeff, pb, phi, rb, psi);
  for (int trial = 0; trial < 5; ++trial) {
    const int k = 37 * (trial + 1) % m, l = 53 * (trial + 1) % m;
    double want = 0.0;
    for (int j = 0; j < 2; ++j)
      for (int kk = 0; kk < 2; ++kk) want += coeff(j, kk) * phi(k, j) * psi(l, kk);
    CHECK(built.values(k, l) == doctest::Approx(want).epsilon(1e-12));
  }
  // Transport only relabels bases; HS distance to itself post-transport is 0.
  const DistributionQ pb2 = random_distribution(grid, rs);
  const DistributionQ rb2 = random_distribution(grid, rs);
  const KernelOnGrid moved = transport_operator_kernel(built, pb2, rb2);
  CHECK(moved.values == built.values);
  const KernelOnGrid zero =
      KernelOnGrid(pb2, rb2, Eigen::MatrixXd::Zero(m, m));
  CHECK(hs_distance(moved, zero) == doctest::Approx(hs_distance(
            built, KernelOnGrid(pb, rb, Eigen::MatrixXd::Zero(m, m)))).epsilon(1e-12));
}
