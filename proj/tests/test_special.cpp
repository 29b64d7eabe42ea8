#include <doctest.h>

#include <cmath>
#include <initializer_list>

#include "wassreg/rng.hpp"
#include "wassreg/special.hpp"

using namespace wassreg;

TEST_CASE("normal cdf and quantile invert each other") {
  for (double x : {-4.0, -1.5, -0.1, 0.0, 0.3, 2.0, 4.5})
    CHECK(norm_quantile(norm_cdf(x)) == doctest::Approx(x).epsilon(1e-10));
  CHECK(norm_cdf(0.0) == doctest::Approx(0.5));
  CHECK(norm_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
}

TEST_CASE("incomplete beta known values") {
  CHECK(inc_beta(2.0, 2.0, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  // I_x(1,1) = x
  CHECK(inc_beta(1.0, 1.0, 0.3) == doctest::Approx(0.3).epsilon(1e-12));
  // I_x(1,b) = 1 - (1-x)^b
  CHECK(inc_beta(1.0, 3.0, 0.2) ==
        doctest::Approx(1.0 - std::pow(0.8, 3)).epsilon(1e-12));
}

TEST_CASE("beta quantile inverts the incomplete beta") {
  for (double p : {0.01, 0.2, 0.5, 0.77, 0.99}) {
    const double x = beta_quantile(6.0, 2.0, p);
    CHECK(inc_beta(6.0, 2.0, x) == doctest::Approx(p).epsilon(1e-9));
  }
}

TEST_CASE("beta density sup at the mode") {
  // Beta(2,2): mode 0.5, density 6 x (1-x) -> 1.5
  CHECK(beta_density_sup(2.0, 2.0) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("riemann zeta reference values") {
  const double pi = 3.14159265358979323846;
  CHECK(riemann_zeta(2.0) == doctest::Approx(pi * pi / 6.0).epsilon(1e-12));
  CHECK(riemann_zeta(4.0) == doctest::Approx(pi * pi * pi * pi / 90.0).epsilon(1e-12));
}

TEST_CASE("truncated normal quantile/cdf round trip") {
  const TruncNormal tn{0.5, 0.2, 0.0, 1.0};
  for (double p : {0.05, 0.3, 0.5, 0.8, 0.95}) {
    const double x = tn.quantile(p);
    CHECK(x >= 0.0);
    CHECK(x <= 1.0);
    CHECK(tn.cdf(x) == doctest::Approx(p).epsilon(1e-10));
  }
  CHECK(tn.quantile(0.5) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("keyed rng streams are deterministic and role-separated") {
  RngStream a = RngStream::keyed(7, 1, 2, 3);
  RngStream b = RngStream::keyed(7, 1, 2, 3);
  RngStream c = RngStream::keyed(7, 1, 2, 4);
  CHECK(a.next_u64() == b.next_u64());
  CHECK(a.next_u64() != c.next_u64());
}

TEST_CASE("rng uniform bounds and rough moments") {
  RngStream rs = RngStream::keyed(11, 0, 0, 0);
  double sum = 0.0, sum2 = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = rs.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const double z = rs.normal();
    sum += z;
    sum2 += z * z;
  }
  CHECK(std::abs(sum / n) < 0.02);
  CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.03));
  for (int i = 0; i < 200; ++i) {
    const int k = rs.uniform_int(3, 7);
    CHECK(k >= 3);
    CHECK(k <= 7);
  }
  const double g = rs.gamma(0.5, 0.5);
  CHECK(g > 0.0);
}
