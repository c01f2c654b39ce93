#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "jacobi/parallel.hpp"
#include "jacobi/spectra.hpp"

namespace jacobi {

namespace {

constexpr double kTwoPi = 2 * M_PI;

struct ContourHit : ConvergenceError {
  using ConvergenceError::ConvergenceError;
};

using Path = std::function<cplx(double)>;

double segment_phase(const DetFn& f, const Path& path, double s0, double s1, cplx v0, cplx v1, double tol,
                     int depth) {
  const double sm = 0.5 * (s0 + s1);
  const cplx vm = f(path(sm));
  if (!(std::abs(vm) > tol)) throw ContourHit("zero on contour");
  const double d = std::arg(v1 / v0);
  const double d1 = std::arg(vm / v0), d2 = std::arg(v1 / vm);
  if (std::abs(d1) < M_PI / 4 && std::abs(d2) < M_PI / 4 && std::abs(d1 + d2 - d) < 1e-9) return d1 + d2;
  if (depth > 48) throw ContourHit("phase tracking did not resolve");
  return segment_phase(f, path, s0, sm, v0, vm, tol, depth + 1) + segment_phase(f, path, sm, s1, vm, v1, tol, depth + 1);
}

double edge_phase(const DetFn& f, const Path& path, double length, double tol) {
  const int n0 = std::clamp(static_cast<int>(std::ceil(length * 48)), 8, 4096);
  std::vector<cplx> v(n0 + 1);
  for (int i = 0; i <= n0; ++i) {
    v[i] = f(path(static_cast<double>(i) / n0));
    if (!(std::abs(v[i]) > tol)) throw ContourHit("zero on contour");
  }
  double total = 0;
  for (int i = 0; i < n0; ++i)
    total += segment_phase(f, path, static_cast<double>(i) / n0, static_cast<double>(i + 1) / n0, v[i], v[i + 1],
                           tol, 0);
  return total;
}

cplx box_center(const PolarBox& b) {
  if (b.full() && b.r0 == 0) return 0.0;
  if (b.full()) return std::polar(0.5 * (b.r0 + b.r1), b.t0);
  return std::polar(0.5 * (b.r0 + b.r1), 0.5 * (b.t0 + b.t1));
}

struct Polished {
  cplx z;
  double residual;
  bool converged;
};

Polished polish(const DetFn& f, cplx z, int mult, double step_tol) {
  bool converged = false;
  cplx fz = f(z);
  for (int it = 0; it < 100; ++it) {
    const double h = 1e-7 * std::max(1.0, std::abs(z));
    const cplx df = (f(z + h) - f(z - h)) / (2 * h);
    if (df == cplx(0.0)) break;
    const cplx step = static_cast<double>(mult) * fz / df;
    z -= step;
    fz = f(z);
    if (std::abs(step) <= step_tol * std::max(1.0, std::abs(z))) {
      converged = true;
      break;
    }
  }
  return {z, std::abs(fz), converged};
}

std::vector<PolarBox> split_box(const PolarBox& b, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> jit(0.42, 0.58);
  const double xi = jit(rng);
  if (b.full() && b.r0 == 0) {
    const double r = xi * b.r1;
    return {PolarBox{0, r, b.t0, b.t0 + kTwoPi}, PolarBox{r, b.r1, b.t0, b.t0 + kTwoPi}};
  }
  if (b.full()) {
    const double ts = b.t0 + kTwoPi * jit(rng);
    return {PolarBox{b.r0, b.r1, ts, ts + M_PI}, PolarBox{b.r0, b.r1, ts + M_PI, ts + kTwoPi}};
  }
  const double rm = 0.5 * (b.r0 + b.r1);
  if (b.r1 - b.r0 > rm * (b.t1 - b.t0)) {
    const double r = b.r0 + xi * (b.r1 - b.r0);
    return {PolarBox{b.r0, r, b.t0, b.t1}, PolarBox{r, b.r1, b.t0, b.t1}};
  }
  const double t = b.t0 + xi * (b.t1 - b.t0);
  return {PolarBox{b.r0, b.r1, b.t0, t}, PolarBox{b.r0, b.r1, t, b.t1}};
}

struct Item {
  PolarBox box;
  int winding;
  std::uint64_t id;
  int depth;
};

struct Outcome {
  std::vector<Item> children;
  std::vector<DiskZero> zeros;
  std::vector<std::string> warnings;
};

std::string describe(const PolarBox& b) {
  std::ostringstream os;
  os << "r in [" << b.r0 << ", " << b.r1 << "], arg in [" << b.t0 << ", " << b.t1 << "]";
  return os.str();
}

DiskZero make_zero(const DetFn& f, cplx z, int mult) {
  DiskZero dz;
  dz.z = z;
  dz.multiplicity = mult;
  dz.eigenvalue = joukowski(z);
  dz.residual = std::abs(f(z));
  return dz;
}

Outcome process(const DetFn& f, const Item& it, const RootOptions& opt) {
  Outcome out;
  const double diam = it.box.diameter();
  if (diam < opt.cluster_size || it.depth >= opt.max_depth) {
    Polished p = polish(f, box_center(it.box), it.winding, opt.newton_tol);
    cplx z = it.box.contains(p.z, diam) ? p.z : box_center(it.box);
    out.zeros.push_back(make_zero(f, z, it.winding));
    return out;
  }
  if (it.winding == 1 && diam < 0.05) {
    Polished p = polish(f, box_center(it.box), 1, opt.newton_tol);
    if (p.converged && it.box.contains(p.z, 1e-12)) {
      out.zeros.push_back(make_zero(f, p.z, 1));
      return out;
    }
  }
  for (int attempt = 0; attempt <= opt.max_retries; ++attempt) {
    std::mt19937_64 rng(opt.seed ^ (it.id * 0x9E3779B97F4A7C15ULL) ^ (static_cast<std::uint64_t>(attempt) << 56));
    std::vector<PolarBox> kids = split_box(it.box, rng);
    try {
      std::vector<Item> items;
      int sum = 0;
      for (std::size_t k = 0; k < kids.size(); ++k) {
        int w = box_winding(f, kids[k], opt.tol);
        sum += w;
        items.push_back({kids[k], w, it.id * 4 + k + 1, it.depth + 1});
      }
      if (sum != it.winding) continue;
      for (auto& c : items)
        if (c.winding > 0) out.children.push_back(c);
      return out;
    } catch (const ContourHit&) {
      continue;
    }
  }
  out.warnings.push_back("boundary cluster: winding unstable after retries in box " + describe(it.box));
  Polished p = polish(f, box_center(it.box), it.winding, opt.newton_tol);
  out.zeros.push_back(make_zero(f, it.box.contains(p.z, diam) ? p.z : box_center(it.box), it.winding));
  return out;
}

}  // namespace

bool PolarBox::full() const { return t1 - t0 >= kTwoPi - 1e-12; }

double PolarBox::diameter() const {
  if (full()) return 2 * r1;
  return std::hypot(r1 - r0, r1 * std::min(t1 - t0, M_PI));
}

bool PolarBox::contains(cplx z, double slack) const {
  const double r = std::abs(z);
  if (r < r0 - slack || r > r1 + slack) return false;
  if (full()) return true;
  double dt = std::fmod(std::arg(z) - t0, kTwoPi);
  if (dt < 0) dt += kTwoPi;
  const double ang_slack = r > 0 ? slack / r : M_PI;
  return dt <= (t1 - t0) + ang_slack || dt >= kTwoPi - ang_slack;
}

int box_winding(const DetFn& f, const PolarBox& b, double tol) {
  double phase = 0;
  auto arc = [&](double r, double ta, double tb) {
    return edge_phase(f, [=](double s) { return std::polar(r, ta + s * (tb - ta)); }, r * std::abs(tb - ta), tol);
  };
  auto ray = [&](double t, double ra, double rb) {
    return edge_phase(f, [=](double s) { return std::polar(ra + s * (rb - ra), t); }, std::abs(rb - ra), tol);
  };
  if (b.full()) {
    phase += arc(b.r1, b.t0, b.t0 + kTwoPi);
    if (b.r0 > 0) phase += arc(b.r0, b.t0 + kTwoPi, b.t0);
  } else {
    phase += arc(b.r1, b.t0, b.t1);
    phase += ray(b.t1, b.r1, b.r0);
    if (b.r0 > 0) phase += arc(b.r0, b.t1, b.t0);
    phase += ray(b.t0, b.r0, b.r1);
  }
  const double w = phase / kTwoPi;
  const double rw = std::round(w);
  if (std::abs(w - rw) > 0.1) throw ContourHit("non-integer winding");
  return static_cast<int>(rw);
}

ZeroSearch find_zeros_box(const DetFn& f, const PolarBox& box0, const RootOptions& opt) {
  ZeroSearch res;
  PolarBox box = box0;
  int w = 0;
  bool ok = false;
  for (int attempt = 0; attempt <= opt.max_retries; ++attempt) {
    try {
      w = box_winding(f, box, opt.tol);
      ok = true;
      break;
    } catch (const ContourHit&) {
      // shrink the outer radius slightly and retry
      box.r1 *= 1 - 1e-5 * (attempt + 1);
    }
  }
  if (!ok) {
    res.warnings.push_back("boundary cluster: outer contour unstable after retries, " + describe(box0));
    return res;
  }
  res.winding = w;
  std::vector<Item> level;
  if (w > 0) level.push_back({box, w, 0, 0});
  while (!level.empty()) {
    std::vector<Outcome> outs(level.size());
    parallel_for(level.size(), [&](std::size_t i) { outs[i] = process(f, level[i], opt); });
    std::vector<Item> next;
    for (auto& o : outs) {
      next.insert(next.end(), o.children.begin(), o.children.end());
      res.zeros.insert(res.zeros.end(), o.zeros.begin(), o.zeros.end());
      res.warnings.insert(res.warnings.end(), o.warnings.begin(), o.warnings.end());
    }
    level = std::move(next);
  }
  std::sort(res.zeros.begin(), res.zeros.end(), [](const DiskZero& a, const DiskZero& b) {
    return a.z.real() != b.z.real() ? a.z.real() < b.z.real() : a.z.imag() < b.z.imag();
  });
  return res;
}

ZeroSearch find_zeros_disk(const DetFn& f, double radius, double tol, const RootOptions& opt) {
  if (!(radius > 0 && radius < 1)) throw DomainError("find_zeros_disk: radius must be in (0,1)");
  RootOptions o = opt;
  o.tol = tol;
  return find_zeros_box(f, PolarBox{0, radius, 0, kTwoPi}, o);
}

SpectrumResult discrete_spectrum(const ComplexJacobiSpec& spec, double radius, const RootOptions& opt) {
  SpectrumResult out;
  if (spec.is_free()) return out;
  DetFn f = [&spec](cplx z) { return det_volterra(spec, z, -1); };
  ZeroSearch zs = find_zeros_disk(f, radius, opt.tol, opt);
  out.winding = zs.winding;
  out.warnings = zs.warnings;
  for (const auto& z : zs.zeros) out.eigenvalues.push_back({z.eigenvalue, z.multiplicity, z.residual, z.z});
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), [](const Eigenvalue& a, const Eigenvalue& b) {
    double ia = std::abs(a.lambda.imag()), ib = std::abs(b.lambda.imag());
    if (ia != ib) return ia < ib;
    if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
    return a.lambda.imag() < b.lambda.imag();
  });
  return out;
}

}  // namespace jacobi
