#include "jacobi/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace jacobi {

ComplexJacobiSpec::ComplexJacobiSpec(std::vector<Deviation> deviations) : devs_(std::move(deviations)) {
  std::sort(devs_.begin(), devs_.end(), [](const Deviation& x, const Deviation& y) { return x.n < y.n; });
  int N = 0;
  for (std::size_t i = 0; i < devs_.size(); ++i) {
    if (devs_[i].n < 0) throw DomainError("deviation index must be nonnegative");
    if (i > 0 && devs_[i].n == devs_[i - 1].n)
      throw DomainError("duplicate deviation record at n = " + std::to_string(devs_[i].n));
    N = devs_[i].n + 1;
  }
  a_.assign(N, cplx(0.5));
  b_.assign(N, cplx(0.0));
  c_.assign(N, cplx(0.5));
  for (const auto& d : devs_) {
    a_[d.n] = 0.5 + d.da;
    b_[d.n] = d.db;
    c_[d.n] = 0.5 + d.dc;
  }
}

bool ComplexJacobiSpec::is_free() const {
  return std::all_of(devs_.begin(), devs_.end(), [](const Deviation& d) {
    return d.da == cplx(0.0) && d.db == cplx(0.0) && d.dc == cplx(0.0);
  });
}

RealJacobiSpec::RealJacobiSpec(std::vector<double> a, std::vector<double> b) : a_(std::move(a)), b_(std::move(b)) {
  for (double v : a_)
    if (!(v > 0)) throw DomainError("real Jacobi spec requires a_n > 0");
  std::size_t n = std::max(a_.size(), b_.size());
  // trim trailing free entries so that support() is tight
  while (n > 0) {
    bool fa = n - 1 >= a_.size() || a_[n - 1] == 0.5;
    bool fb = n - 1 >= b_.size() || b_[n - 1] == 0.0;
    if (!(fa && fb)) break;
    --n;
  }
  a_.resize(n, 0.5);
  b_.resize(n, 0.0);
  n_ = static_cast<int>(n);
}

ComplexJacobiSpec RealJacobiSpec::to_complex() const {
  std::vector<Deviation> devs;
  for (int n = 0; n < n_; ++n) devs.push_back({n, cplx(a_[n] - 0.5), cplx(b_[n]), cplx(a_[n] - 0.5)});
  return ComplexJacobiSpec(std::move(devs));
}

cplx joukowski(cplx z) {
  if (z == cplx(0.0)) throw DomainError("joukowski: z = 0");
  return 0.5 * (z + 1.0 / z);
}

cplx inverse_joukowski(cplx lambda) {
  if (lambda.imag() == 0.0 && std::abs(lambda.real()) <= 1.0)
    throw BranchError("inverse_joukowski: lambda on [-1,1]");
  // z^2 - 2 lambda z + 1 = 0; roots are reciprocal, take the smaller one
  cplx s = std::sqrt(lambda * lambda - 1.0);
  cplx r1 = lambda + s, r2 = lambda - s;
  cplx big = std::abs(r1) >= std::abs(r2) ? r1 : r2;
  cplx z = 1.0 / big;
  if (std::abs(z) >= 1.0) throw BranchError("inverse_joukowski: preimage on the unit circle");
  return z;
}

double dist_to_cut(cplx lambda) {
  double x = std::clamp(lambda.real(), -1.0, 1.0);
  return std::abs(lambda - cplx(x));
}

double moment(const ComplexJacobiSpec& spec, int r) {
  double s = 0;
  for (int k = 0; k < spec.support(); ++k) {
    double w = std::abs(spec.a(k) - 0.5) + std::abs(spec.b(k)) + std::abs(spec.c(k) - 0.5);
    s += std::pow(k + 1.0, r) * w;
  }
  return s;
}

double Envelope::H(int n) const {
  n = std::max(n, 0);
  return n < static_cast<int>(tail.size()) ? tail[n] : 0.0;
}

double Envelope::Hshift(int n) const {
  n = std::max(n, 0);
  return n < static_cast<int>(tail_shifted.size()) ? tail_shifted[n] : 0.0;
}

double Envelope::Hprod(int n, int m) const {
  double p = 1;
  int hi = std::min(n + m - 1, static_cast<int>(h.size()) - 1);
  for (int j = n + 1; j <= hi; ++j) p *= 1 + H(j);
  return p;
}

double Envelope::Hprod_all(int from) const {
  double p = 1;
  for (int j = std::max(from, 0); j < static_cast<int>(h.size()); ++j) p *= 1 + H(j);
  return p;
}

Envelope envelope(const ComplexJacobiSpec& spec) {
  const int N = spec.support();
  Envelope env;
  env.h.resize(N);
  env.hs.resize(N + 1);
  for (int n = 0; n < N; ++n) env.h[n] = std::abs(2.0 * spec.b(n)) + std::abs(spec.e(n));
  for (int n = 0; n <= N; ++n)
    env.hs[n] = std::abs(2.0 * spec.b(n)) + (n > 0 ? std::abs(spec.e(n - 1)) : 0.0);
  env.tail.assign(N + 2, 0.0);
  env.tail_shifted.assign(N + 2, 0.0);
  for (int n = N - 1; n >= 0; --n) env.tail[n] = env.tail[n + 1] + env.h[n];
  for (int n = N; n >= 0; --n) env.tail_shifted[n] = env.tail_shifted[n + 1] + env.hs[n];
  return env;
}

std::vector<double> default_beta_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 20; ++i) g.push_back(0.05 * i);
  return g;
}

namespace {

struct LinFit {
  double c0, c1, ss;
};

// y ~ c0 - c1 x
LinFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  double slope = sxx > 0 ? sxy / sxx : 0.0;
  LinFit f{my - slope * mx, -slope, 0.0};
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - (f.c0 - f.c1 * x[i]);
    f.ss += r * r;
  }
  return f;
}

}  // namespace

DecayFit classify_decay(const std::vector<std::pair<double, double>>& samples, const std::vector<double>& beta_grid) {
  std::vector<double> ns, ys;
  bool all_zero = !samples.empty();
  for (auto [n, v] : samples) {
    if (v != 0.0) all_zero = false;
    if (v > 0) {
      ns.push_back(n);
      ys.push_back(std::log(v));
    }
  }
  DecayFit out;
  if (all_zero) {
    out.finite_support = true;
    return out;
  }
  if (ns.size() < 8) throw PreconditionError("classify_decay: need at least 8 positive samples");
  if (beta_grid.empty()) throw PreconditionError("classify_decay: empty beta grid");

  double ymin = *std::min_element(ys.begin(), ys.end());
  double ymax = *std::max_element(ys.begin(), ys.end());
  if (ymax - ymin <= 1e-12 * (1 + std::abs(ymax))) {
    out.beta = 0;
    out.C1 = std::exp(ymax);
    out.C2 = 0;
    out.residual = 0;
    return out;
  }

  auto eval = [&](double beta) {
    std::vector<double> x(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i) x[i] = std::pow(ns[i], beta);
    return fit_line(x, ys);
  };

  std::size_t best = 0;
  double best_ss = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < beta_grid.size(); ++i) {
    double ss = eval(beta_grid[i]).ss;
    if (ss < best_ss) {
      best_ss = ss;
      best = i;
    }
  }
  double lo = beta_grid[best > 0 ? best - 1 : best];
  double hi = beta_grid[best + 1 < beta_grid.size() ? best + 1 : best];
  double beta = beta_grid[best];
  if (hi > lo) {
    const double g = (std::sqrt(5.0) - 1) / 2;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = eval(x1).ss, f2 = eval(x2).ss;
    for (int it = 0; it < 80 && hi - lo > 1e-10; ++it) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = eval(x1).ss;
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = eval(x2).ss;
      }
    }
    double cand = 0.5 * (lo + hi);
    if (eval(cand).ss <= best_ss) beta = cand;
  }
  LinFit f = eval(beta);
  out.beta = beta;
  out.C1 = std::exp(f.c0);
  out.C2 = f.c1;
  out.residual = f.ss;
  return out;
}

}  // namespace jacobi
