#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "jacobi/core.hpp"
#include "jacobi/detkit.hpp"

namespace jacobi {

using DetFn = std::function<cplx(cplx)>;

struct DiskZero {
  cplx z;
  int multiplicity = 1;
  cplx eigenvalue;
  double residual = 0;
};

struct RootOptions {
  double tol = 1e-12;        // |Delta| below this on a contour makes the winding count unstable
  double newton_tol = 1e-14;  // step size for polishing
  double cluster_size = 1e-5; // boxes smaller than this are reported as one multiple zero
  std::uint64_t seed = 0x5eed;
  int max_retries = 5;
  int max_depth = 60;
};

// polar box {r0 <= |z| <= r1, t0 <= arg z <= t1}; t1 - t0 = 2 pi means a full annulus / disk
struct PolarBox {
  double r0 = 0, r1 = 1, t0 = 0, t1 = 2 * 3.14159265358979323846;
  bool full() const;
  double diameter() const;
  bool contains(cplx z, double slack = 0) const;
};

struct ZeroSearch {
  std::vector<DiskZero> zeros;  // sorted by (re z, im z)
  int winding = 0;              // winding number of Delta on the outer contour
  std::vector<std::string> warnings;
};

// winding number of f along the boundary of the box; throws ConvergenceError if |f| < tol on it
int box_winding(const DetFn& f, const PolarBox& box, double tol);

ZeroSearch find_zeros_box(const DetFn& f, const PolarBox& box, const RootOptions& opt = {});
ZeroSearch find_zeros_disk(const DetFn& f, double radius, double tol = 1e-12, const RootOptions& opt = {});

struct Eigenvalue {
  cplx lambda;
  int multiplicity = 1;
  double residual = 0;
  cplx z;
};

struct SpectrumResult {
  std::vector<Eigenvalue> eigenvalues;  // sorted by |Im lambda| then Re lambda
  int winding = 0;
  std::vector<std::string> warnings;
};

SpectrumResult discrete_spectrum(const ComplexJacobiSpec& spec, double radius = 0.995, const RootOptions& opt = {});

// all eigenvalues of the (n x n) tridiagonal matrix with diagonal d, sub a, super c
std::vector<cplx> tridiagonal_eigenvalues(const std::vector<cplx>& d, const std::vector<cplx>& a,
                                          const std::vector<cplx>& c);

// eigenvalues of J_m, (m+1) x (m+1)
std::vector<cplx> truncation_eigenvalues(const ComplexJacobiSpec& spec, int m);

struct OracleOptions {
  double match_tol = 1e-6;
  double min_cut_distance = 1e-3;
};

// eigenvalues of J_m stable under m -> 2m and away from the cut (values from J_{2m})
std::vector<cplx> dense_truncation_oracle(const ComplexJacobiSpec& spec, int m, const OracleOptions& opt = {});

struct Singularity {
  cplx zeta;
  double abs_delta = 0;
  double lambda = 0;  // Re zeta, the point on [-1,1]
};

std::vector<Singularity> spectral_singularities(const ComplexJacobiSpec& spec, int grid_size);

struct PointSetMetrics {
  std::vector<double> points;
  std::vector<double> gaps;
  double tau_estimate = 0;
};

std::vector<double> default_eps_grid();
// endpoints of the middle-thirds construction on [0, 1] after `depth` steps
std::vector<double> cantor_points(int depth);
PointSetMetrics limit_set_metrics(std::vector<double> points, const std::vector<double>& eps_grid = default_eps_grid());

struct GevreyEnvelope {
  std::vector<double> G;                 // G_n, n = 0 .. n_max
  std::vector<std::pair<double, double>> T;  // (s, T(s))
};

GevreyEnvelope gevrey_envelope(const DeterminantSeries& series, int n_max, const std::vector<double>& s_grid);

struct GevreyMinimum {
  double x1 = 0;         // continuous minimizer e^{-1} t^{-1/alpha}
  double v_min = 0;      // exp(-(alpha/e) t^{-1/alpha})
  long n_best = 0;       // best integer near x1
  double v_integer = 0;  // v(n_best)
};

// minimum of v(x) = t^x x^{alpha x}
GevreyMinimum gevrey_minimum(double t, double alpha);

// Root-finder eigenvalues (expanded by multiplicity) against oracle values. Only values comparable by both
// methods enter: root-finder values at least min_cut_distance from the cut, oracle values with |z| <= radius.
struct OracleComparison {
  std::vector<cplx> computed;
  std::vector<int> partner;  // index into oracle, -1 unmatched, -2 not compared
  std::vector<cplx> oracle;
  std::vector<int> unmatched_oracle;
  double worst = 0;
  bool agree = true;
};

OracleComparison compare_with_oracle(const SpectrumResult& result, const std::vector<cplx>& oracle, double radius,
                                     double tol, double min_cut_distance = 1e-3);

// multiset matching: every value of a has a distinct partner in b within tol and sizes agree
bool match_multisets(const std::vector<cplx>& a, const std::vector<cplx>& b, double tol, double* worst = nullptr);

}  // namespace jacobi
