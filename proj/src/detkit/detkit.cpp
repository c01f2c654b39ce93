#include "jacobi/detkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace jacobi {

cplx det_truncation_ratio(const ComplexJacobiSpec& spec, cplx z, int m) {
  if (std::abs(z) >= 1.0) throw DomainError("det_truncation_ratio: |z| >= 1");
  if (m < 0) throw DomainError("det_truncation_ratio: m < 0");
  if (z == cplx(0.0)) return 1.0;
  const cplx lam = joukowski(z);
  // both recurrences are rescaled by the same factor, so the ratio is untouched
  cplx d1 = 1.0, d0 = spec.b(0) - lam;
  cplx f1 = 1.0, f0 = -lam;
  for (int k = 1; k <= m; ++k) {
    cplx d = (spec.b(k) - lam) * d0 - spec.a(k - 1) * spec.c(k - 1) * d1;
    cplx f = -lam * f0 - 0.25 * f1;
    double s = std::abs(f);
    if (!(s > 0) || !std::isfinite(s)) s = std::max(std::abs(d), 1.0);
    d1 = d0 / s;
    d0 = d / s;
    f1 = f0 / s;
    f0 = f / s;
  }
  if (std::abs(f0) == 0.0)
    throw DomainError("det_truncation_ratio: lambda is an eigenvalue of the free truncation, m = " +
                      std::to_string(m));
  return d0 / f0;
}

SeriesValue det_ratio_estimate(const ComplexJacobiSpec& spec, cplx z, const RatioOptions& opt) {
  int m = opt.m0 > 0 ? opt.m0 : std::max(200, 4 * spec.support());
  cplx prev = det_truncation_ratio(spec, z, m);
  while (2 * m <= opt.max_m) {
    m *= 2;
    cplx cur = det_truncation_ratio(spec, z, m);
    const double change = std::abs(cur - prev);
    if (change <= opt.tol * std::max(1.0, std::abs(cur))) return {cur, change + m * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(cur))};
    prev = cur;
  }
  throw ConvergenceError("det_ratio_auto: no agreement up to m = " + std::to_string(m));
}

cplx det_ratio_auto(const ComplexJacobiSpec& spec, cplx z, const RatioOptions& opt) {
  return det_ratio_estimate(spec, z, opt).value;
}

std::vector<cplx> det_volterra_all(const ComplexJacobiSpec& spec, cplx z) {
  if (std::abs(z) > 1.0 + 1e-14) throw DomainError("det_volterra: |z| > 1");
  const int N = spec.support();
  // P_k(z) = 2z sum_{i<k} z^{2i}; kernel M(n,m) = -b_m P_k + (1/2 - 2 a_{m-1} c_{m-1}) z P_{k-1}, k = m - n
  std::vector<cplx> P(N + 3);
  P[0] = 0.0;
  cplx z2k = 1.0;
  for (int k = 1; k < static_cast<int>(P.size()); ++k) {
    P[k] = P[k - 1] + 2.0 * z * z2k;
    z2k *= z * z;
  }
  std::vector<cplx> bm(N + 1), em(N + 1);
  for (int m = 0; m <= N; ++m) {
    bm[m] = spec.b(m);
    em[m] = m > 0 ? -0.5 * spec.e(m - 1) : cplx(0.0);
  }
  // D[n + 1] = Delta(z, J^(n)), n = -1 .. N
  std::vector<cplx> D(N + 2, cplx(1.0));
  for (int n = N - 2; n >= -1; --n) {
    cplx s = 1.0;
    for (int m = n + 1; m <= N; ++m) {
      const int k = m - n;
      cplx ker = -bm[m] * P[k] + em[m] * z * P[k - 1];
      s += ker * D[m + 1];
    }
    D[n + 1] = s;
  }
  return D;
}

cplx det_volterra(const ComplexJacobiSpec& spec, cplx z, int n) {
  if (n < -1) throw DomainError("det_volterra: n < -1");
  if (n >= spec.support() - 1) return 1.0;
  if (z == cplx(0.0)) return 1.0;
  return det_volterra_all(spec, z)[n + 1];
}

cplx jost_psi(const ComplexJacobiSpec& spec, cplx z, int n) {
  if (n < -1) throw DomainError("jost_psi: n < -1");
  if (n == -1 && z == cplx(0.0)) throw DomainError("jost_psi: z = 0 with n = -1");
  return std::pow(z, n) * det_volterra(spec, z, n);
}

KappaTable::KappaTable(int support, int order)
    : N_(support), order_(order), data_(static_cast<std::size_t>(support + 1) * (order + 1), cplx(0.0)) {
  for (int n = -1; n < N_; ++n) at(n, 0) = 1.0;
}

cplx KappaTable::operator()(int n, int j) const {
  if (j == 0) return 1.0;
  if (n >= N_ - 1 || j < 0 || j > order_) return 0.0;
  return data_[static_cast<std::size_t>(n + 1) * (order_ + 1) + j];
}

cplx& KappaTable::at(int n, int j) { return data_[static_cast<std::size_t>(n + 1) * (order_ + 1) + j]; }

KappaTable taylor_recursion(const ComplexJacobiSpec& spec, int order) {
  if (order < 1) throw DomainError("taylor_recursion: order < 1");
  const int N = spec.support();
  KappaTable t(N, order);
  if (N == 0) return t;
  for (int j = 1; j <= order; ++j) {
    // suffix sum over m > n, descending n
    cplx acc = 0.0;
    for (int n = N - 2; n >= -1; --n) {
      const int m = n + 1;
      const cplx b = spec.b(m), e = spec.e(m);
      if (j == 1) {
        acc += 2.0 * b;
        t.at(n, 1) = -acc;
      } else if (j == 2) {
        acc += 2.0 * b * t(m, 1) + e;
        t.at(n, 2) = -acc;
      } else {
        acc += 2.0 * b * t(m, j - 1) + e * t(m + 1, j - 2);
        t.at(n, j) = t(n + 1, j - 2) - acc;
      }
    }
  }
  return t;
}

double coefficient_bound(const Envelope& env, int j) {
  if (j <= 0) return 1.0;
  return env.Hprod(-1, j) * env.Hshift(j / 2);
}

DeterminantSeries series_from_kappa(const KappaTable& table, const ComplexJacobiSpec& spec) {
  DeterminantSeries s;
  s.order = table.order();
  s.coeffs.resize(s.order + 1);
  s.coeffs[0] = 1.0;
  for (int j = 1; j <= s.order; ++j) s.coeffs[j] = table(-1, j);
  const Envelope env = envelope(spec);
  const int last = std::max(s.order, 2 * spec.support() + 2);
  s.tail_bound.resize(last + 1);
  for (int j = 0; j <= last; ++j) s.tail_bound[j] = coefficient_bound(env, j);
  return s;
}

DeterminantSeries determinant_series(const ComplexJacobiSpec& spec, int order) {
  return series_from_kappa(taylor_recursion(spec, order), spec);
}

SeriesValue eval_series(const DeterminantSeries& series, cplx z) {
  if (std::abs(z) > 1.0 + 1e-14) throw DomainError("eval_series: |z| > 1");
  SeriesValue out;
  cplx v = 0.0;
  for (int j = series.order; j >= 0; --j) v = v * z + series.coeffs[j];
  out.value = v;
  const double r = std::abs(z);
  double err = 0;
  for (int j = series.order + 1; j < static_cast<int>(series.tail_bound.size()); ++j)
    err += series.tail_bound[j] * std::pow(r, j);
  out.error_bound = err;
  return out;
}

double derivative_constant(const ComplexJacobiSpec& spec) {
  const Envelope env = envelope(spec);
  double cmax = 0;
  for (int k = 0; k < spec.support(); ++k) cmax = std::max(cmax, std::abs(spec.c(k) - 0.5));
  const double L = 2.0 + 4.0 * cmax;
  return 8.0 * L * env.Hprod_all(0);
}

double derivative_max_bound(const ComplexJacobiSpec& spec, int n) {
  if (n < 0) throw DomainError("derivative_max_bound: n < 0");
  double v = derivative_constant(spec) * std::pow(4.0, n) / (n + 1.0) * moment(spec, n + 1);
  return n == 0 ? v + 1.0 : v;
}

double derivative_series_bound(const DeterminantSeries& series, int n) {
  if (n < 0) throw DomainError("derivative_series_bound: n < 0");
  const int last = std::max(series.order, static_cast<int>(series.tail_bound.size()) - 1);
  double s = 0;
  for (int k = n; k <= last; ++k) {
    double c = k <= series.order ? std::abs(series.coeffs[k]) : series.bound(k);
    double f = 1;
    for (int i = k - n + 1; i <= k; ++i) f *= i;
    s += f * c;
  }
  return s;
}

}  // namespace jacobi
