#include "jacobi/pavlov.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "jacobi/detkit.hpp"
#include "jacobi/parallel.hpp"

namespace jacobi {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

constexpr double kPi = 3.14159265358979323846;

double neville_at_zero(const std::vector<double>& h, const std::vector<double>& y) {
  std::vector<double> p(y);
  const std::size_t n = h.size();
  for (std::size_t k = 1; k < n; ++k)
    for (std::size_t i = 0; i + k < n; ++i) p[i] = (h[i + k] * p[i] - h[i] * p[i + 1]) / (h[i + k] - h[i]);
  return p[0];
}

std::string fmt_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

PavlovModel::PavlovModel(double g, double k, QuadSettings q) : gamma(g), kappa(k), quad(q) {
  if (!(g > 0 && g < 1)) throw DomainError("PavlovModel: gamma must lie in (0,1)");
  if (!(k > -1 && k < 1)) throw DomainError("PavlovModel: kappa must lie in (-1,1)");
  if (!(q.tol > 0) || q.max_depth < 1) throw DomainError("PavlovModel: bad quadrature settings");
}

cplx PavlovModel::chi(cplx xi) const { return std::pow(1.0 + xi * xi, gamma - 1.0) / 32.0; }

cplx PavlovModel::integrand(cplx xi) const {
  const cplx s = 1.0 + xi * xi;
  if (std::abs(s) < 1e-300) return 0.0;
  const cplx c = std::pow(s, gamma - 1.0) / 32.0;
  const cplx ig(0.0, gamma);
  // e^{-chi} cos(gamma chi) without overflow in the cosine
  return 0.5 * (std::exp(-c * (1.0 - ig)) + std::exp(-c * (1.0 + ig)));
}

cplx PavlovModel::mobius(cplx z) const { return (z - kappa) / (1.0 - kappa * z); }
cplx PavlovModel::mobius_inv(cplx w) const { return (w + kappa) / (1.0 + kappa * w); }

cplx pavlov_V(const PavlovModel& model, cplx z, double* error) {
  if (std::abs(z) > 1.0 + 1e-12) throw DomainError("pavlov_V: |z| > 1");
  if (z == cplx(0.0)) {
    if (error) *error = 0;
    return 0.0;
  }
  auto f = [&](double t) { return model.integrand(t * z) * z; };
  // bisection refines geometrically towards an endpoint next to +-i
  double err_total = 0, l1_total = 0;
  const cplx total = GK::integrate(f, 0.0, 1.0, model.quad.max_depth, model.quad.tol, &err_total, &l1_total);
  if (error) *error = err_total;
  if (!(err_total <= 10 * model.quad.tol * std::max(1.0, l1_total)) || !std::isfinite(total.real()) || !std::isfinite(total.imag()))
    throw ConvergenceError("pavlov_V: refinement depth exceeded, estimated error " + fmt_sci(err_total));
  return total;
}

cplx pavlov_V_shifted(const PavlovModel& model, cplx z) {
  if (model.kappa == 0.0) return pavlov_V(model, z);
  cplx w = model.mobius(z);
  if (std::abs(w) > 1.0) w /= std::abs(w);
  return pavlov_V(model, w);
}

double chi_imag_axis(double gamma, double t) {
  if (!(t >= 0 && t < 1)) throw DomainError("chi_imag_axis: t outside [0,1)");
  return std::pow(1.0 - t * t, gamma - 1.0) / 32.0;
}

double t_from_chi(double gamma, double u) {
  if (!(u >= 1.0 / 32.0)) throw DomainError("t_from_chi: u < 1/32");
  const double w = std::pow(32.0 * u, -1.0 / (1.0 - gamma));
  return std::sqrt(std::max(0.0, 1.0 - w));
}

namespace {

// ds/du along s = t_from_chi(u)
double rho(double gamma, double u) {
  const double w = std::pow(32.0 * u, -1.0 / (1.0 - gamma));
  const double s = std::sqrt(std::max(0.0, 1.0 - w));
  return w / (2.0 * s * (1.0 - gamma) * u);
}

double tail_in_u(const PavlovModel& model, double u0) {
  const double g = model.gamma;
  auto f = [&](double v) { return std::exp(-v) * std::cos(g * (u0 + v)) * rho(g, u0 + v); };
  double err = 0;
  double total = 0;
  for (auto [a, b] : {std::pair{0.0, 4.0}, std::pair{4.0, 16.0}, std::pair{16.0, 48.0}, std::pair{48.0, 90.0}})
    total += GK::integrate(f, a, b, model.quad.max_depth, model.quad.tol, &err);
  return total;
}

}  // namespace

double root_function(const PavlovModel& model, double t) {
  const double u0 = chi_imag_axis(model.gamma, t);
  if (t == 0.0) {
    // the u-substitution is singular at s = 0; integrate in s instead
    auto f = [&](double s) { return std::exp(-chi_imag_axis(model.gamma, s)) *
                                    std::cos(model.gamma * chi_imag_axis(model.gamma, s)); };
    double err = 0;
    double v = GK::integrate(f, 0.0, 0.9, model.quad.max_depth, model.quad.tol, &err) +
               GK::integrate(f, 0.9, 1.0, model.quad.max_depth, model.quad.tol, &err);
    return std::exp(u0) * v;
  }
  return tail_in_u(model, u0);
}

std::vector<double> find_roots(PavlovModel& model, int count) {
  if (count < 1) throw DomainError("find_roots: count must be >= 1");
  const double g = model.gamma;
  // beyond this u the root would sit closer than 1e-15 to t = 1
  const double u_floor = std::pow(2e-15, -(1.0 - g)) / 32.0;
  const double step = kPi / (8.0 * g);
  std::vector<double> us;
  double u = 1.0 / 32.0 + 1e-3;
  double fu = tail_in_u(model, u);
  while (static_cast<int>(us.size()) < count && u < u_floor) {
    const double un = std::min(u + step, u_floor);
    const double fn = tail_in_u(model, un);
    if (fu == 0.0) {
      us.push_back(u);
    } else if (fu * fn < 0) {
      boost::uintmax_t it = 200;
      auto r = boost::math::tools::toms748_solve([&](double x) { return tail_in_u(model, x); }, u, un, fu, fn,
                                                 boost::math::tools::eps_tolerance<double>(48), it);
      us.push_back(0.5 * (r.first + r.second));
    }
    u = un;
    fu = fn;
  }
  std::vector<double> ts;
  for (double x : us) ts.push_back(t_from_chi(g, x));
  if (static_cast<int>(ts.size()) < count)
    model.warnings.push_back("find_roots: only " + std::to_string(ts.size()) +
                             " roots resolved before the floor near t = 1");
  model.roots = ts;
  return ts;
}

std::vector<cplx> predicted_z(const PavlovModel& model) {
  std::vector<cplx> out;
  for (double t : model.roots) out.push_back(model.mobius_inv(cplx(0, t)));
  return out;
}

std::vector<cplx> predicted_eigenvalues(const PavlovModel& model) {
  std::vector<cplx> out;
  for (cplx z : predicted_z(model)) out.push_back(joukowski(z));
  return out;
}

double accumulation_point(double kappa) {
  const cplx w = (cplx(0, 1) + kappa) / (1.0 + cplx(0, kappa));
  return joukowski(w).real();
}

cplx herglotz_f(const PavlovModel& model, cplx lambda) {
  const cplx z = inverse_joukowski(lambda);
  return -1.0 / pavlov_V_shifted(model, -z);
}

namespace {

// Im f(cos theta + i0); lambda = x + i0 pulls back to the lower semicircle z = e^{-i theta}
double boundary_im_theta(const PavlovModel& model, double theta) {
  const cplx z = std::polar(1.0, -theta);
  return (-1.0 / pavlov_V_shifted(model, -z)).imag();
}

}  // namespace

double herglotz_boundary_im(const PavlovModel& model, double x) {
  if (!(x > -1 && x < 1)) throw DomainError("herglotz_boundary_im: x outside (-1,1)");
  return boundary_im_theta(model, std::acos(x));
}

namespace {

double boundary_integral(const PavlovModel& model) {
  auto f = [&](double th) { return boundary_im_theta(model, th) * std::sin(th); };
  double err = 0;
  const double tol = model.quad.tol;
  double v = 0;
  for (auto [a, b] : {std::pair{0.0, kPi / 4}, std::pair{kPi / 4, kPi / 2}, std::pair{kPi / 2, 3 * kPi / 4},
                      std::pair{3 * kPi / 4, kPi}})
    v += GK::integrate(f, a, b, 15, tol, &err);
  return v;
}

}  // namespace

HerglotzConstants herglotz_constants(PavlovModel& model) {
  HerglotzConstants hc;
  const std::vector<double> ys{10, 20, 40, 80};
  std::vector<double> h, ra, rb;
  for (double y : ys) {
    const cplx lam(0, y);
    const cplx fv = herglotz_f(model, lam);
    h.push_back(1.0 / (y * y));
    ra.push_back((fv / lam).real());
    rb.push_back(fv.real());
  }
  hc.alpha = neville_at_zero(h, ra);
  hc.beta = neville_at_zero(h, rb);
  const std::vector<double> h3(h.begin(), h.end() - 1);
  hc.alpha_error = std::abs(hc.alpha - neville_at_zero(h3, std::vector<double>(ra.begin(), ra.end() - 1)));
  hc.beta_error = std::abs(hc.beta - neville_at_zero(h3, std::vector<double>(rb.begin(), rb.end() - 1)));
  if (hc.alpha_error > 1e-6 * std::max(1.0, std::abs(hc.alpha)) || hc.beta_error > 1e-6)
    throw ConvergenceError("herglotz_constants: extrapolation did not settle");
  const double mass = boundary_integral(model);
  if (!(mass > 0)) throw ConvergenceError("herglotz_constants: int Im f <= 0, wrong boundary branch");
  hc.A = 1.0 / mass;
  model.herglotz = hc;
  return hc;
}

double WeightTable::mass() const {
  double s = 0;
  for (std::size_t i = 0; i < values.size(); ++i) s += values[i] * weights[i];
  return s;
}

WeightTable weight_table(const PavlovModel& model, int node_count) {
  if (node_count < 2 || node_count % 2 != 0) throw DomainError("weight_table: node_count must be even and >= 2");
  if (!(model.herglotz.A > 0)) throw PreconditionError("weight_table: herglotz constants not computed");
  const int K = node_count;
  WeightTable t;
  t.nodes.resize(K);
  t.values.resize(K);
  t.weights.resize(K);
  parallel_for(K, [&](std::size_t i) {
    const double th = (static_cast<double>(i) + 0.5) * kPi / K;
    t.nodes[i] = std::cos(th);
    t.weights[i] = kPi / K * std::sin(th);
    t.values[i] = model.herglotz.A * boundary_im_theta(model, th);
  });
  for (int i = 0; i < K; ++i)
    if (t.values[i] < -1e-9)
      throw BranchError("weight_table: negative weight at x = " + std::to_string(t.nodes[i]) +
                        " (wrong boundary approach)");
  return t;
}

std::vector<double> Recurrence::deviation() const {
  std::vector<double> d(a.size());
  for (std::size_t n = 0; n < a.size(); ++n) d[n] = std::abs(a[n] - 0.5) + std::abs(b[n]);
  return d;
}

Recurrence recurrence_from_weight(const WeightTable& table, int n_max) {
  const std::size_t K = table.nodes.size();
  if (n_max < 1) throw DomainError("recurrence_from_weight: n_max must be >= 1");
  if (K < 8 * static_cast<std::size_t>(n_max))
    throw PreconditionError("recurrence_from_weight: need node_count >= 8 n_max");
  std::vector<double> mu(K);
  double mass = 0;
  for (std::size_t i = 0; i < K; ++i) {
    mu[i] = std::max(0.0, table.values[i]) * table.weights[i];
    mass += mu[i];
  }
  if (!(mass > 0)) throw PreconditionError("recurrence_from_weight: zero mass");
  std::vector<double> p0(K, 0.0), p1(K, 1.0 / std::sqrt(mass)), q(K);
  Recurrence rec;
  double a_prev = 0;
  for (int n = 0; n < n_max; ++n) {
    double bn = 0;
    for (std::size_t i = 0; i < K; ++i) bn += mu[i] * table.nodes[i] * p1[i] * p1[i];
    double a2 = 0;
    for (std::size_t i = 0; i < K; ++i) {
      q[i] = (table.nodes[i] - bn) * p1[i] - a_prev * p0[i];
      a2 += mu[i] * q[i] * q[i];
    }
    if (!(a2 > 0))
      throw ConvergenceError("recurrence_from_weight: loss of orthogonality at n = " + std::to_string(n) +
                             "; use more nodes or extended precision");
    const double an = std::sqrt(a2);
    rec.a.push_back(an);
    rec.b.push_back(bn);
    for (std::size_t i = 0; i < K; ++i) {
      p0[i] = p1[i];
      p1[i] = q[i] / an;
    }
    a_prev = an;
  }
  return rec;
}

AssembledMatrix assemble_matrix(const PavlovModel& model, const Recurrence& rec, double floor) {
  const HerglotzConstants& hc = model.herglotz;
  if (model.kappa != 0.0)
    throw PreconditionError("assemble_matrix: the shifted function has alpha = 0; only kappa = 0 is constructible");
  if (!(hc.alpha * hc.A > 0)) throw PreconditionError("assemble_matrix: alpha A <= 0");
  AssembledMatrix m;
  m.a0 = cplx(1.0 / std::sqrt(kPi * hc.alpha * hc.A), 0.0);
  const cplx vi = pavlov_V(model, cplx(0, 1));
  m.b0 = -hc.beta / hc.alpha - 1.0 / (hc.alpha * std::conj(vi));
  const std::vector<double> d = rec.deviation();
  int last = -1;
  for (int n = 0; n < static_cast<int>(d.size()); ++n)
    if (d[n] >= floor) last = n;
  m.kept_rows = last + 1;
  std::vector<Deviation> devs;
  devs.push_back({0, m.a0 - 0.5, m.b0, m.a0 - 0.5});
  for (int n = 0; n <= last; ++n) devs.push_back({n + 1, rec.a[n] - 0.5, rec.b[n], rec.a[n] - 0.5});
  m.spec = ComplexJacobiSpec(devs);
  return m;
}

PavlovBuild build_pavlov_matrix(double gamma, double kappa, int n_max, int node_count, int root_count) {
  if (n_max < 1) throw DomainError("build_pavlov_matrix: n_max < 1");
  if (kappa != 0.0) throw PreconditionError("build_pavlov_matrix: only kappa = 0 is constructible");
  PavlovModel model(gamma, kappa);
  find_roots(model, root_count);
  herglotz_constants(model);
  const int K = node_count > 0 ? node_count : 8 * n_max;
  Recurrence rec = recurrence_from_weight(weight_table(model, K), n_max);
  AssembledMatrix mat = assemble_matrix(model, rec);
  return {std::move(model), std::move(rec), std::move(mat)};
}

cplx weyl_transform(const PavlovModel& model, cplx lambda) {
  const double A = model.herglotz.A;
  if (!(A > 0)) throw PreconditionError("weyl_transform: herglotz constants not computed");
  if (lambda.imag() == 0.0 && std::abs(lambda.real()) <= 1.0)
    throw BranchError("weyl_transform: lambda on [-1,1]");
  // subtract the density at Re lambda when lambda sits over the interval
  const bool over = std::abs(lambda.real()) < 1.0;
  const double th0 = over ? std::acos(lambda.real()) : kPi / 2;
  const double s0 = over ? boundary_im_theta(model, th0) : 0.0;
  auto f = [&](double th) {
    return (boundary_im_theta(model, th) - s0) * std::sin(th) / (cplx(std::cos(th)) - lambda);
  };
  std::vector<double> cuts{0.0, kPi / 2, th0, kPi};
  std::sort(cuts.begin(), cuts.end());
  cplx v = 0;
  double err = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    if (cuts[i + 1] > cuts[i]) v += GK::integrate(f, cuts[i], cuts[i + 1], 15, model.quad.tol, &err);
  if (over) v += s0 * (std::log(1.0 - lambda) - std::log(-1.0 - lambda));
  return A * v;
}

double weyl_pole_residual(const PavlovModel& model, const AssembledMatrix& mat, cplx lambda) {
  return std::abs(mat.b0 - lambda - mat.a0 * mat.a0 * weyl_transform(model, lambda));
}

AccumulationReport verify_accumulation(const ComplexJacobiSpec& spec, const std::vector<cplx>& predicted,
                                       const AccumulationOptions& opt) {
  if (opt.oracle_m < 200) throw DomainError("verify_accumulation: m must be >= 200");
  AccumulationReport rep;
  const int m = std::max(opt.oracle_m, spec.support() + 10);
  rep.oracle = dense_truncation_oracle(spec, m);
  SpectrumResult disk = discrete_spectrum(spec, opt.radius, opt.roots);
  for (const auto& e : disk.eigenvalues)
    for (int k = 0; k < e.multiplicity; ++k) rep.disk.push_back(e.lambda);
  for (auto& w : disk.warnings) rep.warnings.push_back(w);

  // local argument-principle search next to the circle, where the predicted z_k live
  DetFn det = [&spec](cplx z) { return det_volterra(spec, z, -1); };
  std::vector<PolarBox> boxes;
  for (cplx lam : predicted) {
    cplx z;
    try {
      z = inverse_joukowski(lam);
    } catch (const BranchError&) {
      continue;
    }
    const double r = std::abs(z), th = std::arg(z), hw = opt.local_halfwidth;
    PolarBox b{std::max(opt.radius, r - hw), 1.0 - 1e-9, th - hw, th + hw};
    if (b.r0 >= r) b.r0 = std::max(0.0, r - hw);
    boxes.push_back(b);
  }
  // merge overlapping boxes so each zero is counted once
  std::sort(boxes.begin(), boxes.end(), [](const PolarBox& a, const PolarBox& b) { return a.t0 < b.t0; });
  std::vector<PolarBox> merged;
  for (const auto& b : boxes) {
    if (!merged.empty() && b.t0 <= merged.back().t1) {
      merged.back().t1 = std::max(merged.back().t1, b.t1);
      merged.back().r0 = std::min(merged.back().r0, b.r0);
    } else {
      merged.push_back(b);
    }
  }
  for (const auto& b : merged) {
    try {
      ZeroSearch zs = find_zeros_box(det, b, opt.roots);
      for (const auto& z : zs.zeros)
        for (int k = 0; k < z.multiplicity; ++k) rep.local.push_back(joukowski(z.z));
      for (auto& w : zs.warnings) rep.warnings.push_back(w);
    } catch (const Error& e) {
      rep.warnings.push_back(std::string("local search: ") + e.what());
    }
  }

  std::vector<cplx> pool;
  auto add_unique = [&](const std::vector<cplx>& v) {
    for (cplx l : v) {
      bool dup = false;
      for (cplx p : pool) dup = dup || std::abs(p - l) < 1e-6;
      if (!dup) pool.push_back(l);
    }
  };
  add_unique(rep.local);
  add_unique(rep.disk);
  add_unique(rep.oracle);
  std::vector<bool> used(pool.size(), false);
  for (std::size_t k = 0; k < predicted.size(); ++k) {
    AccumulationRow row;
    row.k = static_cast<int>(k) + 1;
    row.predicted = predicted[k];
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = pool.size();
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (used[i]) continue;
      const double d = std::abs(pool[i] - predicted[k]);
      if (d < best) {
        best = d;
        bi = i;
      }
    }
    if (bi < pool.size() && best <= opt.match_tol) {
      used[bi] = true;
      row.matched = true;
      row.computed = pool[bi];
      row.distance = best;
      ++rep.matched;
      if (std::abs(row.computed.real()) > opt.real_tol) rep.real_parts_ok = false;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace jacobi
