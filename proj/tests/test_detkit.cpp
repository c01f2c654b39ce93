#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "helpers.hpp"
#include "jacobi/detkit.hpp"

using namespace jacobi;
using testutil::cplx;

namespace {

// independent oracle: dense LU determinants of the truncations
cplx dense_ratio(const ComplexJacobiSpec& s, cplx z, int m) {
  cplx lam = joukowski(z);
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(m + 1, m + 1), B = A;
  for (int k = 0; k <= m; ++k) {
    A(k, k) = s.b(k) - lam;
    B(k, k) = -lam;
    if (k < m) {
      A(k, k + 1) = s.c(k);
      A(k + 1, k) = s.a(k);
      B(k, k + 1) = 0.5;
      B(k + 1, k) = 0.5;
    }
  }
  // normalize row-wise to keep the determinants in range
  cplx r = 1.0;
  for (int k = 0; k <= m; ++k) {
    cplx f = 1.0 / lam;
    A.row(k) *= f;
    B.row(k) *= f;
  }
  r = A.partialPivLu().determinant() / B.partialPivLu().determinant();
  return r;
}

std::vector<cplx> disk_grid(int count, double radius) {
  std::vector<cplx> g;
  int rings = 4, per = count / rings;
  for (int r = 1; r <= rings; ++r)
    for (int k = 0; k < per; ++k) g.push_back(std::polar(radius * r / rings, 2 * M_PI * (k + 0.37 * r) / per));
  return g;
}

}  // namespace

TEST_CASE("free spec gives one everywhere") {
  ComplexJacobiSpec free;
  for (cplx z : disk_grid(16, 0.9)) {
    CHECK(std::abs(det_truncation_ratio(free, z, 50) - 1.0) < 1e-15);
    CHECK(det_volterra(free, z, -1) == cplx(1.0));
    CHECK(std::abs(eval_series(determinant_series(free, 8), z).value - 1.0) < 1e-15);
    CHECK(std::abs(jost_psi(free, z, 3) - std::pow(z, 3)) < 1e-15);
  }
}

TEST_CASE("rank-one closed form") {
  ComplexJacobiSpec s = testutil::single_b(1.0);
  CHECK(std::abs(det_truncation_ratio(s, 0.3, 200) - 0.4) < 1e-8);
  CHECK(std::abs(det_truncation_ratio(s, 0.5, 400)) < 1e-8);
  CHECK(std::abs(det_volterra(s, 0.3, -1) - 0.4) < 1e-12);
  CHECK(det_volterra(s, cplx(0.2, 0.7), 0) == cplx(1.0));
  CHECK(std::abs(jost_psi(s, 0.5, -1)) < 1e-14);
  // dense-LU oracle agrees with the rank-one formula
  CHECK(std::abs(dense_ratio(s, 0.3, 120) - 0.4) < 1e-10);

  KappaTable t = taylor_recursion(s, 6);
  CHECK(t(-1, 1) == cplx(-2.0));
  for (int n = 0; n < 4; ++n) CHECK(t(n, 1) == cplx(0.0));
  DeterminantSeries ser = series_from_kappa(t, s);
  CHECK(ser.coeffs[0] == cplx(1.0));
  CHECK(ser.coeffs[1] == cplx(-2.0));
  for (int j = 2; j <= 6; ++j) CHECK(ser.coeffs[j] == cplx(0.0));
  for (int j = 4; j < 12; ++j) CHECK(ser.bound(j) == 0.0);
  CHECK(std::abs(eval_series(ser, 0.5).value) < 1e-15);
  CHECK(eval_series(ser, 0.0).value == cplx(1.0));
}

TEST_CASE("off-diagonal only deviation") {
  // a_0 c_0 = p gives 1 - (4p - 1) z^2
  cplx da(0.2, -0.1), dc(-0.3, 0.05);
  ComplexJacobiSpec s({{0, da, 0.0, dc}});
  cplx p = (0.5 + da) * (0.5 + dc);
  cplx z(0.4, 0.3);
  cplx expect = 1.0 - (4.0 * p - 1.0) * z * z;
  CHECK(std::abs(det_volterra(s, z) - expect) < 1e-14);
  CHECK(std::abs(det_truncation_ratio(s, z, 300) - expect) < 1e-10);
  CHECK(std::abs(eval_series(determinant_series(s, 6), z).value - expect) < 1e-14);
  CHECK(std::abs(dense_ratio(s, z, 100) - expect) < 1e-10);
}

TEST_CASE("volterra at the boundary and the origin") {
  ComplexJacobiSpec s({{0, 0.1, 0.3, -0.1}, {1, 0.0, cplx(0, 0.2), 0.2}});
  DeterminantSeries ser = determinant_series(s, 12);
  for (cplx z : {cplx(1.0), cplx(-1.0), cplx(0, 1), std::polar(1.0, 0.7)})
    CHECK(std::abs(det_volterra(s, z) - eval_series(ser, z).value) < 1e-12);
  CHECK(det_volterra(s, 0.0) == cplx(1.0));
  // continuity at z = 1
  CHECK(std::abs(det_volterra(s, 1.0) - det_volterra(s, 1.0 - 1e-9)) < 1e-7);
}

TEST_CASE("engine agreement on random specs") {
  std::mt19937_64 rng(21);
  double worst_rv = 0, worst_vs = 0;
  for (int t = 0; t < 40; ++t) {
    ComplexJacobiSpec s = testutil::random_complex_spec(rng, 6, 0.7);
    if (moment(s, 1) > 10) continue;
    DeterminantSeries ser = determinant_series(s, 2 * s.support() + 4);
    for (cplx z : disk_grid(64, 0.9)) {
      cplx v = det_volterra(s, z);
      worst_rv = std::max(worst_rv, std::abs(det_truncation_ratio(s, z, 500) - v));
      SeriesValue sv = eval_series(ser, z);
      worst_vs = std::max(worst_vs, std::abs(sv.value - v) - sv.error_bound);
    }
  }
  CHECK(worst_rv <= 1e-8);
  CHECK(worst_vs <= 1e-10);
}

TEST_CASE("adaptive ratio stops on a relative change") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 10; ++t) {
    ComplexJacobiSpec s = testutil::random_complex_spec(rng, 8, 2.0);
    cplx z = testutil::rand_disk(rng, 0.9);
    SeriesValue r = det_ratio_estimate(s, z);
    cplx v = det_volterra(s, z);
    CHECK(std::abs(r.value - v) <= 1e-8 * std::max(1.0, std::abs(v)));
    CHECK(r.error_bound > 0);
    CHECK(det_ratio_auto(s, z) == r.value);
  }
  RatioOptions tight;
  tight.tol = 1e-30;
  tight.max_m = 1600;
  CHECK_THROWS_AS(det_ratio_auto(testutil::single_b(cplx(0.3, 1.1)), cplx(0.2, 0.4), tight), ConvergenceError);
}

TEST_CASE("dense oracle agrees with volterra") {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 10; ++t) {
    ComplexJacobiSpec s = testutil::random_complex_spec(rng, 5, 0.5);
    cplx z = testutil::rand_disk(rng, 0.7);
    CHECK(std::abs(dense_ratio(s, z, 80) - det_volterra(s, z)) < 1e-8 * (1 + std::abs(det_volterra(s, z))));
  }
}

TEST_CASE("three-term relation between associated determinants") {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 30; ++t) {
    ComplexJacobiSpec s = testutil::random_complex_spec(rng, 8, 1.0);
    for (cplx z : disk_grid(16, 0.9)) {
      auto D = det_volterra_all(s, z);
      cplx lam = joukowski(z);
      for (int n = -1; n + 2 < s.support(); ++n) {
        cplx rhs = (lam - s.b(n + 1)) * 2.0 * z * D[n + 2] - s.a(n + 1) * s.c(n + 1) * 4.0 * z * z * D[n + 3];
        CHECK(std::abs(D[n + 1] - rhs) < 1e-10 * (1 + std::abs(D[n + 1])));
      }
    }
  }
}

TEST_CASE("psi solves the recurrence") {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 30; ++t) {
    ComplexJacobiSpec s = testutil::random_complex_spec(rng, 8, 1.0);
    cplx z = testutil::rand_disk(rng, 0.95);
    if (std::abs(z) < 0.05) continue;
    cplx lam = joukowski(z);
    for (int m = 0; m <= s.support() + 5; ++m) {
      cplx r = jost_psi(s, z, m - 1) + 2.0 * s.b(m) * jost_psi(s, z, m) +
               4.0 * s.a(m) * s.c(m) * jost_psi(s, z, m + 1) - 2.0 * lam * jost_psi(s, z, m);
      double scale = 1 + std::abs(lam * jost_psi(s, z, m)) + std::abs(jost_psi(s, z, m - 1));
      CHECK(std::abs(r) < 1e-10 * scale);
    }
  }
}

TEST_CASE("kappa vanishes past the support and obeys its bound") {
  std::mt19937_64 rng(25);
  for (int t = 0; t < 30; ++t) {
    ComplexJacobiSpec s = testutil::random_complex_spec(rng, 8, 1.0);
    KappaTable k = taylor_recursion(s, 24);
    Envelope env = envelope(s);
    for (int j = 1; j <= 24; ++j) {
      for (int n = s.support(); n < s.support() + 3; ++n) CHECK(k(n, j) == cplx(0.0));
      for (int n = -1; n < s.support(); ++n) {
        double bnd = env.Hprod(n, j) * env.Hshift(n + 1 + j / 2);
        CHECK(std::abs(k(n, j)) <= bnd * (1 + 1e-12) + 1e-300);
      }
    }
  }
}

TEST_CASE("coefficient bound holds") {
  std::mt19937_64 rng(26);
  int violations = 0;
  for (int t = 0; t < 50; ++t) {
    ComplexJacobiSpec s = testutil::random_complex_spec(rng, 8, 2.0);
    DeterminantSeries ser = determinant_series(s, 64);
    for (int j = 0; j <= 64; ++j)
      if (std::abs(ser.coeffs[j]) > ser.bound(j) * (1 + 1e-12)) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("associated determinants settle to one at the support") {
  std::mt19937_64 rng(27);
  for (int t = 0; t < 30; ++t) {
    ComplexJacobiSpec s = testutil::random_complex_spec(rng, 8, 1.0);
    CHECK(det_volterra(s, std::polar(1.0, 0.3), s.support() - 1) == cplx(1.0));
    CHECK(det_volterra(s, std::polar(1.0, 0.3), s.support() + 4) == cplx(1.0));
  }
}

TEST_CASE("stabilization of associated determinants") {
  std::mt19937_64 rng(29);
  int non_monotone = 0;
  for (int t = 0; t < 30; ++t) {
    ComplexJacobiSpec s = testutil::random_complex_spec(rng, 8, 1.0);
    std::vector<double> sup(s.support() + 1, 0.0);
    for (int k = 0; k < 256; ++k) {
      auto D = det_volterra_all(s, std::polar(1.0, 2 * M_PI * k / 256));
      for (int m = 0; m <= s.support(); ++m) sup[m] = std::max(sup[m], std::abs(D[m + 1] - 1.0));
    }
    CHECK(sup[s.support() - 1] == 0.0);
    for (int m = 0; m + 1 <= s.support(); ++m)
      if (sup[m + 1] > sup[m] * (1 + 1e-12)) ++non_monotone;
  }
  CHECK(non_monotone == 0);
}

TEST_CASE("derivative bounds") {
  ComplexJacobiSpec free;
  for (int n = 1; n < 4; ++n) CHECK(derivative_max_bound(free, n) == 0.0);
  ComplexJacobiSpec one = testutil::single_b(1.0);
  CHECK(derivative_max_bound(one, 0) >= 3.0);

  std::mt19937_64 rng(28);
  for (int t = 0; t < 30; ++t) {
    ComplexJacobiSpec s = testutil::random_complex_spec(rng, 6, 1.0);
    DeterminantSeries ser = determinant_series(s, 2 * s.support() + 2);
    for (int n = 0; n <= 3; ++n) {
      double sampled = 0;
      for (int k = 0; k < 256; ++k) {
        cplx z = std::polar(1.0, 2 * M_PI * k / 256);
        cplx d = 0;
        for (int j = ser.order; j >= n; --j) {
          double f = 1;
          for (int i = j - n + 1; i <= j; ++i) f *= i;
          d = d * z + f * ser.coeffs[j];
        }
        // d currently holds sum f_j delta_j z^{j-n}
        sampled = std::max(sampled, std::abs(d));
      }
      CHECK(derivative_series_bound(ser, n) >= sampled * (1 - 1e-12));
      CHECK(derivative_max_bound(s, n) >= derivative_series_bound(ser, n) * (1 - 1e-12));
    }
  }
}
