#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "jacobi/parallel.hpp"
#include "jacobi/spectra.hpp"

namespace jacobi {

std::vector<Singularity> spectral_singularities(const ComplexJacobiSpec& spec, int grid_size) {
  if (grid_size < 256) throw DomainError("spectral_singularities: grid_size must be at least 256");
  std::vector<Singularity> out;
  if (spec.is_free()) return out;
  const double h = 2 * M_PI / grid_size;
  auto mag = [&](double t) { return std::abs(det_volterra(spec, std::polar(1.0, t), -1)); };
  std::vector<double> v(grid_size);
  parallel_for(grid_size, [&](std::size_t k) { v[k] = mag(h * static_cast<double>(k)); });

  std::vector<std::pair<double, double>> found;  // (theta, |Delta|)
  for (int k = 0; k < grid_size; ++k) {
    const double vl = v[(k + grid_size - 1) % grid_size], vr = v[(k + 1) % grid_size];
    if (!(v[k] <= vl && v[k] <= vr)) continue;
    if (v[k] == vl && k > 0) continue;  // plateau: keep the first sample only
    double lo = h * (k - 1), hi = h * (k + 1);
    const double g = (std::sqrt(5.0) - 1) / 2;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = mag(x1), f2 = mag(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - g * (hi - lo);
        f1 = mag(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + g * (hi - lo);
        f2 = mag(x2);
      }
    }
    double t = f1 < f2 ? x1 : x2;
    double fv = std::min(f1, f2);
    if (v[k] < fv) {
      t = h * k;
      fv = v[k];
    }
    if (fv < 1e-6) found.push_back({std::remainder(t, 2 * M_PI), fv});
  }
  std::sort(found.begin(), found.end());
  for (const auto& [t, fv] : found) {
    if (!out.empty() && std::abs(std::arg(out.back().zeta) - t) < 1e-9) continue;
    Singularity s;
    s.zeta = std::polar(1.0, t);
    s.abs_delta = fv;
    s.lambda = std::cos(t);
    out.push_back(s);
  }
  return out;
}

std::vector<double> default_eps_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 100; ++i) g.push_back(0.01 * i);
  return g;
}

std::vector<double> cantor_points(int depth) {
  if (depth < 0) throw DomainError("cantor_points: depth < 0");
  std::vector<double> pts{0.0, 1.0};
  std::vector<std::pair<double, double>> iv{{0.0, 1.0}};
  for (int d = 0; d < depth; ++d) {
    std::vector<std::pair<double, double>> next;
    for (auto [a, b] : iv) {
      const double l = (b - a) / 3;
      next.push_back({a, a + l});
      next.push_back({b - l, b});
      pts.push_back(a + l);
      pts.push_back(b - l);
    }
    iv = std::move(next);
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

PointSetMetrics limit_set_metrics(std::vector<double> points, const std::vector<double>& eps_grid) {
  PointSetMetrics out;
  for (double p : points)
    if (!(p >= -1.0 && p <= 1.0)) throw DomainError("limit_set_metrics: points must lie in [-1,1]");
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  out.points = points;
  for (std::size_t i = 1; i < points.size(); ++i) out.gaps.push_back(points[i] - points[i - 1]);
  if (out.gaps.size() < 2) return out;

  // bin the gaps by dyadic scale; the bin holding the smallest gap is the resolution floor
  std::map<long, std::vector<double>> bins;
  for (double g : out.gaps) bins[static_cast<long>(std::floor(-std::log2(g)))].push_back(g);
  if (bins.size() < 3) return out;
  auto last = std::prev(bins.end(), 2);
  auto prev = std::prev(last);
  for (double eps : eps_grid) {
    double sl = 0, sp = 0;
    for (double g : last->second) sl += std::pow(g, eps);
    for (double g : prev->second) sp += std::pow(g, eps);
    if (sl < sp) {
      out.tau_estimate = eps;
      return out;
    }
  }
  out.tau_estimate = 1.0;
  return out;
}

GevreyEnvelope gevrey_envelope(const DeterminantSeries& series, int n_max, const std::vector<double>& s_grid) {
  if (series.order < n_max + 10) throw DomainError("gevrey_envelope: series order must be at least n_max + 10");
  GevreyEnvelope env;
  for (int n = 0; n <= n_max; ++n) env.G.push_back(derivative_series_bound(series, n));
  for (double s : s_grid) {
    double t = std::numeric_limits<double>::infinity();
    double fact = 1, sp = 1;
    for (int k = 0; k <= n_max; ++k) {
      if (k > 0) {
        fact *= k;
        sp *= s;
      }
      t = std::min(t, env.G[k] * sp / fact);
    }
    env.T.push_back({s, t});
  }
  return env;
}

GevreyMinimum gevrey_minimum(double t, double alpha) {
  if (!(t > 0 && t < 1 && alpha > 0)) throw DomainError("gevrey_minimum: need 0 < t < 1, alpha > 0");
  GevreyMinimum g;
  g.x1 = std::exp(-1.0) * std::pow(t, -1.0 / alpha);
  g.v_min = std::exp(-alpha * g.x1);
  auto v = [&](double x) { return x <= 0 ? 1.0 : std::exp(x * std::log(t) + alpha * x * std::log(x)); };
  const long lo = static_cast<long>(std::floor(g.x1));
  g.n_best = lo;
  g.v_integer = v(static_cast<double>(lo));
  if (v(static_cast<double>(lo + 1)) < g.v_integer) {
    g.n_best = lo + 1;
    g.v_integer = v(static_cast<double>(lo + 1));
  }
  return g;
}

}  // namespace jacobi
