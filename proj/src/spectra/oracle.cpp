#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "jacobi/spectra.hpp"

namespace jacobi {

namespace {

// QL with implicit Wilkinson shifts on a complex symmetric tridiagonal matrix
// (complex orthogonal rotations, c^2 + s^2 = 1)
void tql_complex(std::vector<cplx>& d, std::vector<cplx>& e) {
  const int n = static_cast<int>(d.size());
  const double eps = std::numeric_limits<double>::epsilon();
  const int max_iter = 60;
  std::vector<cplx> d_save, e_save;
  for (int l = 0; l < n; ++l) {
    int iter = 0, breakdowns = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (iter++ == max_iter)
        throw ConvergenceError("tridiagonal QL: no convergence after " + std::to_string(max_iter) +
                               " iterations for eigenvalue " + std::to_string(l));
      cplx g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      cplx r = std::sqrt(g * g + 1.0);
      cplx shift_den = std::abs(g + r) >= std::abs(g - r) ? g + r : g - r;
      g = d[m] - d[l] + e[l] / shift_den;
      if (breakdowns > 0) {
        // exceptional shift after a rotation breakdown
        g += std::abs(e[l]) * cplx(0.37 * breakdowns, 0.61 * breakdowns);
      }
      d_save.assign(d.begin() + l, d.begin() + m + 1);
      e_save.assign(e.begin() + l, e.begin() + m + 1);
      cplx s = 1.0, c = 1.0, p = 0.0;
      bool broke = false;
      for (int i = m - 1; i >= l; --i) {
        cplx f = s * e[i];
        cplx b = c * e[i];
        r = std::sqrt(f * f + g * g);
        e[i + 1] = r;
        if (std::abs(r) <= 1e-13 * (std::abs(f) + std::abs(g))) {
          if (std::abs(f) + std::abs(g) == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          broke = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        if (i == l) {
          d[l] -= p;
          e[l] = g;
          e[m] = 0.0;
        }
      }
      if (broke) {
        std::copy(d_save.begin(), d_save.end(), d.begin() + l);
        std::copy(e_save.begin(), e_save.end(), e.begin() + l);
        ++breakdowns;
        if (breakdowns > 20) throw ConvergenceError("tridiagonal QL: repeated rotation breakdown");
      }
    } while (m != l);
  }
}

bool by_key(cplx a, cplx b) {
  const double ia = std::abs(a.imag()), ib = std::abs(b.imag());
  if (ia != ib) return ia < ib;
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace

std::vector<cplx> tridiagonal_eigenvalues(const std::vector<cplx>& d, const std::vector<cplx>& a,
                                          const std::vector<cplx>& c) {
  const std::size_t n = d.size();
  if (n == 0) return {};
  if (a.size() + 1 < n || c.size() + 1 < n) throw DomainError("tridiagonal_eigenvalues: off-diagonal too short");
  std::vector<cplx> dd = d, e(n, cplx(0.0));
  // diagonal similarity turns (a, c) into the symmetric pair sqrt(a c)
  for (std::size_t k = 0; k + 1 < n; ++k) e[k] = std::sqrt(a[k] * c[k]);
  tql_complex(dd, e);
  std::sort(dd.begin(), dd.end(), by_key);
  return dd;
}

std::vector<cplx> truncation_eigenvalues(const ComplexJacobiSpec& spec, int m) {
  if (m < 0) throw DomainError("truncation_eigenvalues: m < 0");
  std::vector<cplx> d(m + 1), a(m), c(m);
  for (int k = 0; k <= m; ++k) d[k] = spec.b(k);
  for (int k = 0; k < m; ++k) {
    a[k] = spec.a(k);
    c[k] = spec.c(k);
  }
  return tridiagonal_eigenvalues(d, a, c);
}

std::vector<cplx> dense_truncation_oracle(const ComplexJacobiSpec& spec, int m, const OracleOptions& opt) {
  if (m < spec.support() + 10) throw DomainError("dense_truncation_oracle: m must be at least N + 10");
  const std::vector<cplx> e1 = truncation_eigenvalues(spec, m);
  const std::vector<cplx> e2 = truncation_eigenvalues(spec, 2 * m);
  std::vector<bool> used(e2.size(), false);
  std::vector<cplx> out;
  for (cplx l : e1) {
    if (dist_to_cut(l) <= opt.min_cut_distance) continue;
    double best = opt.match_tol;
    int bi = -1;
    for (std::size_t j = 0; j < e2.size(); ++j) {
      if (used[j]) continue;
      const double dj = std::abs(e2[j] - l);
      if (dj <= best) {
        best = dj;
        bi = static_cast<int>(j);
      }
    }
    if (bi >= 0) {
      used[bi] = true;
      out.push_back(e2[bi]);
    }
  }
  std::sort(out.begin(), out.end(), by_key);
  return out;
}

bool match_multisets(const std::vector<cplx>& a, const std::vector<cplx>& b, double tol, double* worst) {
  double w = 0;
  bool ok = a.size() == b.size();
  std::vector<bool> used(b.size(), false);
  for (cplx x : a) {
    double best = std::numeric_limits<double>::infinity();
    int bi = -1;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double dj = std::abs(b[j] - x);
      if (dj < best) {
        best = dj;
        bi = static_cast<int>(j);
      }
    }
    if (bi < 0) {
      ok = false;
      continue;
    }
    used[bi] = true;
    w = std::max(w, best);
    if (best > tol) ok = false;
  }
  if (worst) *worst = w;
  return ok;
}

OracleComparison compare_with_oracle(const SpectrumResult& result, const std::vector<cplx>& oracle, double radius,
                                     double tol, double min_cut_distance) {
  OracleComparison cmp;
  cmp.oracle = oracle;
  std::vector<bool> eligible(oracle.size()), used(oracle.size(), false);
  for (std::size_t j = 0; j < oracle.size(); ++j) eligible[j] = std::abs(inverse_joukowski(oracle[j])) <= radius;
  for (const auto& e : result.eigenvalues)
    for (int k = 0; k < e.multiplicity; ++k) cmp.computed.push_back(e.lambda);
  for (cplx x : cmp.computed) {
    if (dist_to_cut(x) < min_cut_distance) {
      cmp.partner.push_back(-2);
      continue;
    }
    double best = std::numeric_limits<double>::infinity();
    int bi = -1;
    for (std::size_t j = 0; j < oracle.size(); ++j) {
      if (used[j] || !eligible[j]) continue;
      const double dj = std::abs(oracle[j] - x);
      if (dj < best) {
        best = dj;
        bi = static_cast<int>(j);
      }
    }
    if (bi >= 0 && best <= tol) {
      used[bi] = true;
      cmp.worst = std::max(cmp.worst, best);
      cmp.partner.push_back(bi);
    } else {
      cmp.partner.push_back(-1);
      cmp.agree = false;
    }
  }
  for (std::size_t j = 0; j < oracle.size(); ++j)
    if (eligible[j] && !used[j]) {
      cmp.unmatched_oracle.push_back(static_cast<int>(j));
      cmp.agree = false;
    }
  return cmp;
}

}  // namespace jacobi
