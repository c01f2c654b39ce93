#pragma once

#include <string>
#include <vector>

#include "jacobi/core.hpp"
#include "jacobi/spectra.hpp"

namespace jacobi {

struct QuadSettings {
  // relative tolerance on the Kronrod-Gauss difference; the Kronrod value itself is far more accurate
  double tol = 1e-10;
  int max_depth = 25;
};

struct HerglotzConstants {
  double alpha = 0, beta = 0, A = 0;
  double alpha_error = 0, beta_error = 0;  // spread of the last two extrapolants
};

// Pavlov's function V(z) = int_0^z e^{-chi} cos(gamma chi) dxi, chi = (1 + xi^2)^{gamma - 1} / 32,
// optionally composed with the disk automorphism (z - kappa) / (1 - kappa z).
struct PavlovModel {
  PavlovModel(double gamma, double kappa = 0.0, QuadSettings quad = {});

  double gamma, kappa;
  QuadSettings quad;
  std::vector<double> roots;  // t_k
  HerglotzConstants herglotz;
  std::vector<std::string> warnings;

  cplx chi(cplx xi) const;
  cplx integrand(cplx xi) const;
  cplx mobius(cplx z) const;    // (z - kappa) / (1 - kappa z)
  cplx mobius_inv(cplx w) const;  // (w + kappa) / (1 + kappa w)
};

// unshifted V along the straight segment 0 -> z, |z| <= 1
cplx pavlov_V(const PavlovModel& model, cplx z, double* error = nullptr);
// V(mobius(z))
cplx pavlov_V_shifted(const PavlovModel& model, cplx z);

// e^{u} int_t^1 e^{-chi(is)} cos(gamma chi(is)) ds with u = chi(it); same sign as the tail integral
double root_function(const PavlovModel& model, double t);
double chi_imag_axis(double gamma, double t);   // chi(it)
double t_from_chi(double gamma, double u);       // inverse of chi_imag_axis

// the `count` smallest roots t_k in (0,1); stored in model.roots
std::vector<double> find_roots(PavlovModel& model, int count);

// lambda_k = joukowski(z_k), z_k = mobius_inv(i t_k)
std::vector<cplx> predicted_eigenvalues(const PavlovModel& model);
std::vector<cplx> predicted_z(const PavlovModel& model);
// accumulation point joukowski(mobius_inv(i)) on (-1, 1)
double accumulation_point(double kappa);

// f(lambda) = -1 / V_kappa(-z(lambda)), lambda off [-1, 1]
cplx herglotz_f(const PavlovModel& model, cplx lambda);
// Im f(x + i0), x in (-1, 1)
double herglotz_boundary_im(const PavlovModel& model, double x);

// alpha and beta by Richardson extrapolation in 1/y^2 along i y, A = 1 / int Im f(x) dx; stored in model.herglotz
HerglotzConstants herglotz_constants(PavlovModel& model);

struct WeightTable {
  std::vector<double> nodes;    // x_i = cos(theta_i), theta_i = (i + 1/2) pi / K
  std::vector<double> values;   // w(x_i) = A Im f(x_i)
  std::vector<double> weights;  // (pi / K) sin(theta_i)
  double mass() const;
};

WeightTable weight_table(const PavlovModel& model, int node_count);

struct Recurrence {
  std::vector<double> a, b;  // orthonormal three-term coefficients, n = 0 .. n_max - 1
  std::vector<double> deviation() const;  // |a_n - 1/2| + |b_n|
};

// discretized Stieltjes procedure
Recurrence recurrence_from_weight(const WeightTable& table, int n_max);

struct AssembledMatrix {
  ComplexJacobiSpec spec;
  cplx a0, b0;
  int kept_rows = 0;  // rows n >= 1 retained above the precision floor
};

// border row a_0 = (pi alpha A)^{-1/2} > 0, b_0 = -beta / alpha - 1 / (alpha conj V(i)), rows n >= 1 from rec;
// then b_0 - lambda - a_0^2 m(lambda) = -(f(lambda) + 1 / conj V(i)) / alpha vanishes at every lambda_k
AssembledMatrix assemble_matrix(const PavlovModel& model, const Recurrence& rec, double floor = 1e-13);

struct PavlovBuild {
  PavlovModel model;
  Recurrence recurrence;
  AssembledMatrix matrix;
};

// roots, Herglotz constants, a weight table with node_count nodes (0: 8 n_max) and the assembled matrix
PavlovBuild build_pavlov_matrix(double gamma, double kappa, int n_max, int node_count = 0, int root_count = 5);

// m(lambda) = int w(x) / (x - lambda) dx with w = A Im f, by adaptive quadrature
cplx weyl_transform(const PavlovModel& model, cplx lambda);
// |b_0 - lambda - a_0^2 m(lambda)|, the denominator of ((J - lambda)^{-1})_{00}
double weyl_pole_residual(const PavlovModel& model, const AssembledMatrix& mat, cplx lambda);

struct AccumulationOptions {
  int oracle_m = 400;
  double radius = 0.995;
  double match_tol = 0.05;
  double real_tol = 1e-3;
  double local_halfwidth = 0.05;  // half-size of the local search box around each predicted z_k
  RootOptions roots;
};

struct AccumulationRow {
  int k = 0;
  double t = 0;
  cplx predicted;
  bool matched = false;
  cplx computed;
  double distance = 0;
  double weyl_residual = -1;  // negative when not computed
};

struct AccumulationReport {
  std::vector<AccumulationRow> rows;
  std::vector<cplx> oracle;      // stable dense-truncation eigenvalues
  std::vector<cplx> disk;        // root-finder eigenvalues with |z| <= radius
  std::vector<cplx> local;       // zeros found near the predicted z_k
  int matched = 0;
  bool real_parts_ok = true;
  std::vector<std::string> warnings;
};

AccumulationReport verify_accumulation(const ComplexJacobiSpec& spec, const std::vector<cplx>& predicted,
                                       const AccumulationOptions& opt = {});

}  // namespace jacobi
