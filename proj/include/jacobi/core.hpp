#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "jacobi/errors.hpp"

namespace jacobi {

using cplx = std::complex<double>;

struct Deviation {
  int n = 0;
  cplx da{};  // a_n - 1/2
  cplx db{};  // b_n
  cplx dc{};  // c_n - 1/2
};

// Complex Jacobi matrix: diagonal b_n, super-diagonal c_n (row n, col n+1),
// sub-diagonal a_n (row n+1, col n). Free entries a = c = 1/2, b = 0.
class ComplexJacobiSpec {
 public:
  ComplexJacobiSpec() = default;
  explicit ComplexJacobiSpec(std::vector<Deviation> deviations);

  int support() const { return static_cast<int>(a_.size()); }
  cplx a(int n) const { return n >= 0 && n < support() ? a_[n] : cplx(0.5); }
  cplx b(int n) const { return n >= 0 && n < support() ? b_[n] : cplx(0.0); }
  cplx c(int n) const { return n >= 0 && n < support() ? c_[n] : cplx(0.5); }
  // 4 a_n c_n - 1
  cplx e(int n) const { return 4.0 * a(n) * c(n) - 1.0; }

  const std::vector<Deviation>& deviations() const { return devs_; }
  bool is_free() const;

 private:
  std::vector<Deviation> devs_;
  std::vector<cplx> a_, b_, c_;
};

// Real symmetric Jacobi matrix, zero-based: diagonal b_n, off-diagonal a_n > 0.
class RealJacobiSpec {
 public:
  RealJacobiSpec() = default;
  RealJacobiSpec(std::vector<double> a, std::vector<double> b);

  int support() const { return n_; }
  double a(int n) const { return n >= 0 && n < static_cast<int>(a_.size()) ? a_[n] : 0.5; }
  double b(int n) const { return n >= 0 && n < static_cast<int>(b_.size()) ? b_[n] : 0.0; }
  const std::vector<double>& a_list() const { return a_; }
  const std::vector<double>& b_list() const { return b_; }

  ComplexJacobiSpec to_complex() const;

 private:
  std::vector<double> a_, b_;
  int n_ = 0;
};

cplx joukowski(cplx z);
cplx inverse_joukowski(cplx lambda);
double dist_to_cut(cplx lambda);

double moment(const ComplexJacobiSpec& spec, int r);

struct Envelope {
  // h[n] = |2 b_n| + |4 a_n c_n - 1|, hs[n] = |2 b_n| + |4 a_{n-1} c_{n-1} - 1|
  std::vector<double> h, hs;
  std::vector<double> tail, tail_shifted;  // suffix sums, size N + 2

  double H(int n) const;
  double Hshift(int n) const;
  // prod_{j=n+1}^{n+m-1} (1 + H(j))
  double Hprod(int n, int m) const;
  // prod_{j>=from} (1 + H(j))
  double Hprod_all(int from) const;
};

Envelope envelope(const ComplexJacobiSpec& spec);

struct DecayFit {
  bool finite_support = false;
  double beta = 0, C1 = 0, C2 = 0, residual = 0;
};

std::vector<double> default_beta_grid();

DecayFit classify_decay(const std::vector<std::pair<double, double>>& samples,
                        const std::vector<double>& beta_grid = default_beta_grid());

}  // namespace jacobi
