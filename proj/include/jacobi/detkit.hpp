#pragma once

#include <vector>

#include "jacobi/core.hpp"

namespace jacobi {

// det(J_m - lambda) / det(J_{0,m} - lambda), J_m the leading (m+1)x(m+1) block
cplx det_truncation_ratio(const ComplexJacobiSpec& spec, cplx z, int m);

struct RatioOptions {
  int m0 = 0;  // 0 -> max(200, 4N)
  double tol = 1e-9;  // relative to max(1, |value|)
  int max_m = 1 << 20;
};

// truncation ratio with m doubled until two successive values agree
cplx det_ratio_auto(const ComplexJacobiSpec& spec, cplx z, const RatioOptions& opt = {});

// Delta(z, J^(n)) for n >= -1; J^(-1) = J
cplx det_volterra(const ComplexJacobiSpec& spec, cplx z, int n = -1);

// all associated determinants, index n + 1 for n = -1 .. N
std::vector<cplx> det_volterra_all(const ComplexJacobiSpec& spec, cplx z);

// psi_n = z^n Delta(z, J^(n))
cplx jost_psi(const ComplexJacobiSpec& spec, cplx z, int n);

class KappaTable {
 public:
  KappaTable() = default;
  KappaTable(int support, int order);

  int support() const { return N_; }
  int order() const { return order_; }
  // kappa(n, 0) = 1, kappa(n, j) = 0 for n >= N - 1 and j >= 1
  cplx operator()(int n, int j) const;
  cplx& at(int n, int j);

 private:
  int N_ = 0, order_ = 0;
  std::vector<cplx> data_;  // rows n = -1 .. N-1, cols j = 0 .. order
};

KappaTable taylor_recursion(const ComplexJacobiSpec& spec, int order);

struct DeterminantSeries {
  std::vector<cplx> coeffs;       // delta_0 .. delta_order
  std::vector<double> tail_bound;  // bound for |delta_j|, j = 0 .. last nonzero bound
  int order = 0;

  double bound(int j) const { return j < static_cast<int>(tail_bound.size()) ? tail_bound[j] : 0.0; }
};

double coefficient_bound(const Envelope& env, int j);

DeterminantSeries series_from_kappa(const KappaTable& table, const ComplexJacobiSpec& spec);
DeterminantSeries determinant_series(const ComplexJacobiSpec& spec, int order);

struct SeriesValue {
  cplx value;
  double error_bound = 0;
};

SeriesValue eval_series(const DeterminantSeries& series, cplx z);

// det_ratio_auto; the estimate is the last change between truncations plus m eps |value|
SeriesValue det_ratio_estimate(const ComplexJacobiSpec& spec, cplx z, const RatioOptions& opt = {});

// C(J) 4^n/(n+1) M_{n+1}
double derivative_max_bound(const ComplexJacobiSpec& spec, int n);
double derivative_constant(const ComplexJacobiSpec& spec);
// sum_j (j+1)...(j+n) |delta_{j+n}|, plus the certified tail beyond the series order
double derivative_series_bound(const DeterminantSeries& series, int n);

enum class Engine { Ratio, Volterra, Series };

}  // namespace jacobi
