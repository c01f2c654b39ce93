#include "jacobi/scattering.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

namespace jacobi {

namespace {

std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}

// out[n] = sum_j in[j] exp(+2 pi i j n / M)
std::vector<cplx> fft_backward(const std::vector<cplx>& in) {
  const int M = static_cast<int>(in.size());
  std::vector<cplx> out(M);
  std::vector<cplx> work(in);
  fftw_plan p;
  {
    std::lock_guard<std::mutex> lk(fftw_plan_mutex());
    p = fftw_plan_dft_1d(M, reinterpret_cast<fftw_complex*>(work.data()), reinterpret_cast<fftw_complex*>(out.data()),
                         FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(p);
  {
    std::lock_guard<std::mutex> lk(fftw_plan_mutex());
    fftw_destroy_plan(p);
  }
  return out;
}

void fill_fhat(ScatteringData& d) {
  const int n = static_cast<int>(d.F.size());
  d.Fhat.assign(n, 0.0);
  double acc = 0;
  for (int k = n - 1; k >= 0; --k) {
    acc += std::abs(d.at(k) - d.at(k + 2));
    d.Fhat[k] = acc;
  }
}

}  // namespace

JostSolution::JostSolution(const RealJacobiSpec& spec, cplx z) : z_(z), N_(spec.support()), g_(N_ + 2, cplx(1.0)) {
  if (std::abs(z) > 1.0 + 1e-14) throw DomainError("jost_solution: |z| > 1");
  const cplx z2 = z * z;
  for (int n = N_; n >= 0; --n) {
    const double am1 = n > 0 ? spec.a(n - 1) : 0.5;
    const cplx gn = g_[n + 1];
    const cplx gn1 = n + 2 < static_cast<int>(g_.size()) ? g_[n + 2] : cplx(1.0);
    g_[n] = ((z2 + 1.0) * gn - 2.0 * spec.b(n) * z * gn - 2.0 * spec.a(n) * z2 * gn1) / (2.0 * am1);
  }
}

cplx JostSolution::g(int n) const {
  if (n < -1) throw DomainError("JostSolution: n < -1");
  return n + 1 < static_cast<int>(g_.size()) ? g_[n + 1] : cplx(1.0);
}

cplx JostSolution::f(int n) const {
  if (n == -1) {
    if (z_ == cplx(0.0)) throw DomainError("JostSolution: f_{-1} at z = 0");
    return g(-1) / z_;
  }
  return std::pow(z_, n) * g(n);
}

cplx JostSolution::wronskian(int n, const RealJacobiSpec& spec) const {
  const double a = n >= 0 ? spec.a(n) : 0.5;
  const cplx fn = f(n), fn1 = f(n + 1);
  return a * (fn * std::conj(fn1) - fn1 * std::conj(fn));
}

JostSolution jost_solution(const RealJacobiSpec& spec, cplx z) { return JostSolution(spec, z); }

std::vector<double> jost_polynomial(const RealJacobiSpec& spec) {
  using Poly = std::vector<double>;
  const int N = spec.support();
  auto shift = [](const Poly& p, int k, double c) {
    Poly q(p.size() + k, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) q[i + k] = c * p[i];
    return q;
  };
  auto add = [](Poly a, const Poly& b) {
    if (b.size() > a.size()) a.resize(b.size(), 0.0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
    return a;
  };
  Poly gn1{1.0}, gn{1.0};
  for (int n = N; n >= 0; --n) {
    const double am1 = n > 0 ? spec.a(n - 1) : 0.5;
    Poly t = add(add(gn, shift(gn, 2, 1.0)), shift(gn, 1, -2.0 * spec.b(n)));
    t = add(t, shift(gn1, 2, -2.0 * spec.a(n)));
    for (double& c : t) c /= 2.0 * am1;
    gn1 = gn;
    gn = t;
  }
  while (gn.size() > 1 && gn.back() == 0.0) gn.pop_back();
  return gn;
}

JostReport jost_function_check(const RealJacobiSpec& spec, double resonance_tol) {
  JostReport r;
  std::vector<double> p = jost_polynomial(spec);
  // drop negligible leading coefficients before forming the companion matrix
  double scale = 0;
  for (double c : p) scale = std::max(scale, std::abs(c));
  while (p.size() > 1 && std::abs(p.back()) <= 1e-15 * scale) p.pop_back();
  const int d = static_cast<int>(p.size()) - 1;
  if (d >= 1) {
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(d, d);
    for (int i = 1; i < d; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) C(i, d - 1) = -p[i] / p[d];
    Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
    for (int i = 0; i < d; ++i) {
      cplx root = es.eigenvalues()[i];
      r.zero_modulus = std::min(r.zero_modulus, std::abs(root));
      if (std::abs(root) < 1.0 - 1e-9) r.disk_zeros.push_back(root);
    }
    std::sort(r.disk_zeros.begin(), r.disk_zeros.end(),
              [](cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
  }
  r.resonance_plus = std::abs(JostSolution(spec, 1.0).jost_function()) <= resonance_tol;
  r.resonance_minus = std::abs(JostSolution(spec, -1.0).jost_function()) <= resonance_tol;
  double mn = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 1024; ++k)
    mn = std::min(mn, std::abs(JostSolution(spec, std::polar(1.0, 2 * M_PI * k / 1024)).jost_function()));
  r.min_abs_on_circle = mn;
  return r;
}

double ScatteringData::at(long n) const {
  if (n >= 0) return n < static_cast<long>(F.size()) ? F[n] : 0.0;
  return -n < static_cast<long>(Fneg.size()) ? Fneg[-n] : 0.0;
}

ScatteringData scattering_function(const RealJacobiSpec& spec, int grid_k) {
  if (grid_k < 4 || grid_k > 24) throw DomainError("scattering_function: grid_k out of range [4, 24]");
  JostReport rep = jost_function_check(spec);
  if (!rep.disk_zeros.empty())
    throw PreconditionError("scattering_function: Jost function has zeros in the disk (discrete spectrum)");
  if (rep.resonance_plus || rep.resonance_minus)
    throw PreconditionError("scattering_function: resonance at z = +-1");
  ScatteringData d;
  d.grid_k = grid_k;
  const int M = 1 << grid_k;
  d.aliasing = std::isfinite(rep.zero_modulus) ? std::pow(rep.zero_modulus, -M / 2.0) : 0.0;
  d.S.resize(M);
  for (int j = 0; j < M; ++j) {
    const cplx f = JostSolution(spec, std::polar(1.0, 2 * M_PI * j / M)).jost_function();
    d.S[j] = std::conj(f) / f;
  }
  std::vector<cplx> c = fft_backward(d.S);
  d.F.resize(M / 2);
  d.Fneg.resize(M / 2);
  for (int n = 0; n < M / 2; ++n) {
    const cplx fp = -c[n] / static_cast<double>(M);
    const cplx fm = -c[(M - n) % M] / static_cast<double>(M);
    d.F[n] = fp.real();
    d.Fneg[n] = fm.real();
    d.max_imag = std::max({d.max_imag, std::abs(fp.imag()), std::abs(fm.imag())});
  }
  fill_fhat(d);
  return d;
}

ScatteringData scattering_from_coefficients(std::vector<double> F, int grid_k) {
  ScatteringData d;
  d.grid_k = grid_k;
  d.F = std::move(F);
  fill_fhat(d);
  return d;
}

namespace {

// x_j + sum_m F(off + j + m) x_m = -F(rhs_off + j), j, m = 0 .. J
std::vector<double> solve_row(const ScatteringData& d, int off, int rhs_off, int J, double& residual) {
  if (off + 2 * J >= static_cast<int>(d.F.size()))
    throw PreconditionError("marchenko_solve: F grid too small for j_max = " + std::to_string(J));
  Eigen::MatrixXd A(J + 1, J + 1);
  Eigen::VectorXd y(J + 1);
  for (int j = 0; j <= J; ++j) {
    for (int m = 0; m <= J; ++m) A(j, m) = (j == m ? 1.0 : 0.0) + d.at(off + j + m);
    y(j) = -d.at(rhs_off + j);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (lu.rcond() < 1e-14)
    throw ConvergenceError("marchenko_solve: truncated I + F_n is singular; the operator is invertible on l1 "
                           "only without discrete spectrum, or j_max is too small");
  Eigen::VectorXd x = lu.solve(y);
  residual = std::max(residual, (A * x - y).cwiseAbs().maxCoeff());
  return std::vector<double>(x.data(), x.data() + x.size());
}

}  // namespace

MarchenkoSolution marchenko_solve(const ScatteringData& data, int n_max, int j_max) {
  if (n_max < 1 || j_max < 2) throw DomainError("marchenko_solve: need n_max >= 1, j_max >= 2");
  MarchenkoSolution sol;
  sol.n_max = n_max;
  sol.j_max = j_max;
  for (int s = 1; s <= n_max + 1; ++s) sol.tau.push_back(solve_row(data, 2 * s, 2 * s, j_max, sol.max_residual));
  // site 0: the m >= 1 equations fix K(0,m)/K(0,0)
  sol.kappa1 = solve_row(data, 2, 1, j_max, sol.max_residual)[0];
  return sol;
}

RealJacobiSpec reconstruct(MarchenkoSolution& sol) {
  const int S = static_cast<int>(sol.tau.size());
  sol.K_diag.resize(S);
  sol.K_off.resize(S);
  for (int s = 0; s < S; ++s) {
    const double t0 = sol.tau[s][0];
    if (!(t0 > -1.0)) throw ConvergenceError("reconstruct: tau(n,0) <= -1 (non-physical data)");
    sol.K_diag[s] = std::sqrt(1.0 + t0);
    sol.K_off[s] = sol.tau[s][1] / sol.K_diag[s];
  }
  std::vector<double> a(S - 1), b(S - 1);
  for (int r = 0; r + 1 < S; ++r) a[r] = sol.K_diag[r + 1] / (2 * sol.K_diag[r]);
  b[0] = sol.K_off[0] / (2 * sol.K_diag[0]) - 0.5 * sol.kappa1;
  for (int r = 1; r + 1 < S; ++r) b[r] = sol.K_off[r] / (2 * sol.K_diag[r]) - sol.K_off[r - 1] / (2 * sol.K_diag[r - 1]);
  try {
    sol.reconstructed = RealJacobiSpec(a, b);
  } catch (const DomainError& e) {
    throw ConvergenceError(std::string("reconstruct: ") + e.what());
  }
  return sol.reconstructed;
}

MarchenkoSolution inverse_scattering(const ScatteringData& data, const InverseOptions& opt) {
  int n_max = opt.n_max;
  const int size = static_cast<int>(data.F.size());
  if (n_max < 1) {
    int last = 0;
    for (int k = 0; k < size; ++k)
      if (std::abs(data.F[k]) > 1e-13) last = k;
    n_max = std::clamp(last / 2 + 2, std::max(2, opt.support_hint + 2), std::max(2, size / 16));
  }
  int J = 4 * (opt.support_hint > 0 ? opt.support_hint : n_max) + 32;
  auto run = [&](int j) {
    MarchenkoSolution s = marchenko_solve(data, n_max, j);
    reconstruct(s);
    return s;
  };
  MarchenkoSolution prev = run(J);
  while (2 * (n_max + 1) + 4 * J < size) {
    J *= 2;
    MarchenkoSolution cur = run(J);
    double diff = 0;
    for (int r = 0; r < n_max; ++r) {
      diff = std::max(diff, std::abs(cur.reconstructed.a(r) - prev.reconstructed.a(r)));
      diff = std::max(diff, std::abs(cur.reconstructed.b(r) - prev.reconstructed.b(r)));
    }
    prev = std::move(cur);
    if (diff < opt.tol) return prev;
  }
  return prev;
}

DecayBoundReport verify_decay_bound(const ScatteringData& data, const RealJacobiSpec& spec, int n_max,
                                    double c_limit) {
  DecayBoundReport rep;
  for (int n = 1; n <= n_max; ++n) {
    const double lhs = std::abs(2 * spec.a(n - 1) - 1) + std::abs(spec.b(n - 1));
    const double fh = 2 * n - 2 < static_cast<int>(data.Fhat.size()) ? data.Fhat[2 * n - 2] : 0.0;
    const double rhs = std::abs(data.at(2 * n - 1) - data.at(2 * n + 1)) + std::abs(data.at(2 * n) - data.at(2 * n + 2)) +
                       fh * fh;
    rep.lhs.push_back(lhs);
    rep.rhs.push_back(rhs);
    if (lhs == 0) continue;
    if (rhs == 0) {
      rep.finite = false;
      continue;
    }
    rep.C = std::max(rep.C, lhs / rhs);
  }
  const int nf = static_cast<int>(data.Fhat.size());
  for (int k = 0; k + 1 < nf; ++k) {
    if (data.Fhat[k + 1] > data.Fhat[k] * (1 + 1e-14) + 1e-300) rep.fhat_monotone = false;
    if (std::abs(data.at(k)) + std::abs(data.at(k + 1)) > data.Fhat[k] * (1 + 1e-9) + 1e-14) rep.pointwise_bound = false;
  }
  rep.passed = rep.finite && rep.C <= c_limit;
  return rep;
}

}  // namespace jacobi
