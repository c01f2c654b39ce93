#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "jacobi/core.hpp"

namespace testutil {

using jacobi::cplx;

inline cplx rand_disk(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double r = radius * std::sqrt(u(rng));
  double t = 2 * M_PI * u(rng);
  return std::polar(r, t);
}

// support in [1, max_support], every entry deviates with modulus <= mag
inline jacobi::ComplexJacobiSpec random_complex_spec(std::mt19937_64& rng, int max_support, double mag) {
  std::uniform_int_distribution<int> sd(1, max_support);
  int N = sd(rng);
  std::vector<jacobi::Deviation> devs;
  for (int n = 0; n < N; ++n) devs.push_back({n, rand_disk(rng, mag), rand_disk(rng, mag), rand_disk(rng, mag)});
  return jacobi::ComplexJacobiSpec(devs);
}

inline jacobi::ComplexJacobiSpec single_b(cplx b0) { return jacobi::ComplexJacobiSpec({{0, 0.0, b0, 0.0}}); }

}  // namespace testutil
