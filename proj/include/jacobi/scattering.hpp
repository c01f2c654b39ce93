#pragma once

#include <limits>
#include <string>
#include <vector>

#include "jacobi/core.hpp"

namespace jacobi {

// Rows are zero-based: f_n for n >= -1, with the off-matrix entry a_{-1} = 1/2.
// g_n = f_n z^{-n} is kept instead of f_n; it is a polynomial in z.
class JostSolution {
 public:
  JostSolution(const RealJacobiSpec& spec, cplx z);

  cplx z() const { return z_; }
  int support() const { return N_; }
  cplx f(int n) const;
  cplx g(int n) const;
  // z f_{-1}: equals 1 for the free matrix and 1 - 2bz for a single diagonal entry b at row 0
  cplx jost_function() const { return g(-1); }
  // a_n (f_n conj f_{n+1} - f_{n+1} conj f_n), meaningful for |z| = 1
  cplx wronskian(int n, const RealJacobiSpec& spec) const;

 private:
  cplx z_;
  int N_;
  std::vector<cplx> g_;  // index n + 1, n = -1 .. N
};

JostSolution jost_solution(const RealJacobiSpec& spec, cplx z);

// coefficients of the Jost function z f_{-1}(z) as a polynomial in z
std::vector<double> jost_polynomial(const RealJacobiSpec& spec);

struct JostReport {
  std::vector<cplx> disk_zeros;  // zeros with |z| < 1
  bool resonance_plus = false;   // f(1) = 0
  bool resonance_minus = false;  // f(-1) = 0
  double min_abs_on_circle = 0;
  double zero_modulus = std::numeric_limits<double>::infinity();  // smallest |z| over all zeros
  bool admissible() const { return disk_zeros.empty() && !resonance_plus && !resonance_minus; }
};

JostReport jost_function_check(const RealJacobiSpec& spec, double resonance_tol = 1e-10);

// Two-sided Fourier data: F(n) = -(1/2 pi) int S(e^{i t}) e^{i n t} dt, S = conj(f)/f
struct ScatteringData {
  int grid_k = 0;
  std::vector<cplx> S;       // S(2 pi j / 2^k)
  std::vector<double> F;     // F(n), n = 0 .. 2^{k-1} - 1
  std::vector<double> Fneg;  // F(-n), n = 0 .. 2^{k-1} - 1
  std::vector<double> Fhat;  // sum_{k >= n} |F(k) - F(k+2)|
  double max_imag = 0;       // largest |Im| discarded when F was taken real
  // zero_modulus^{-2^{k-1}}: size of the geometric tail of F(-n) wrapped around the grid
  double aliasing = 0;

  double at(long n) const;  // F(n) for any integer n, zero outside the grid range
};

ScatteringData scattering_function(const RealJacobiSpec& spec, int grid_k = 14);

// data reconstructed from F(n), n >= 0 only
ScatteringData scattering_from_coefficients(std::vector<double> F, int grid_k);

// Sites are one-based: site n + 1 carries row n of the spec.
struct MarchenkoSolution {
  int n_max = 0, j_max = 0;
  std::vector<std::vector<double>> tau;  // tau[s - 1][j], sites s = 1 .. n_max + 1
  std::vector<double> K_diag;            // K(s, s), s = 1 .. n_max + 1
  std::vector<double> K_off;             // K(s, s + 1)
  double kappa1 = 0;                     // K(0,1) / K(0,0) from the site-0 equations
  double max_residual = 0;
  RealJacobiSpec reconstructed;
};

MarchenkoSolution marchenko_solve(const ScatteringData& data, int n_max, int j_max);
RealJacobiSpec reconstruct(MarchenkoSolution& sol);

struct InverseOptions {
  int n_max = -1;      // -1: from the decay of F
  int support_hint = 0;  // j_max starts at 4 * support_hint + 32
  double tol = 1e-9;
};

// marchenko_solve + reconstruct with j_max doubling until entries settle
MarchenkoSolution inverse_scattering(const ScatteringData& data, const InverseOptions& opt = {});

struct DecayBoundReport {
  double C = 0;  // smallest admissible constant
  bool finite = true;
  bool passed = false;
  std::vector<double> lhs, rhs;  // per site n = 1 .. n_max
  bool fhat_monotone = true;
  bool pointwise_bound = true;  // |F(k)| + |F(k+1)| <= Fhat(k)
};

DecayBoundReport verify_decay_bound(const ScatteringData& data, const RealJacobiSpec& spec, int n_max = 40,
                                    double c_limit = 1e6);

}  // namespace jacobi
