#ifndef DDIV_TEST_UTIL_HPP
#define DDIV_TEST_UTIL_HPP

#include <cmath>

#include "ddiv/rng.hpp"
#include "ddiv/symtensor.hpp"

namespace ddiv::testutil {

inline SymMat random_symmat(RngStream& rng, int n, double frob_radius) {
  std::vector<double> v(sym_vec_dim(n));
  double s = 0;
  for (double& x : v) {
    x = rng.normal();
    s += x * x;
  }
  s = std::sqrt(s);
  double scale = frob_radius * rng.uniform01() / (s > 0 ? s : 1.0);
  for (double& x : v) x *= scale;
  return vec_to_sym(n, v);
}

inline Tensor4 random_tensor4(RngStream& rng, int n, double scale) {
  return Tensor4::from_entries(
      n, [&](int, int, int, int) { return scale * rng.normal(); });
}

inline bool close(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

inline bool close_rel(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * (1.0 + std::max(std::fabs(a), std::fabs(b)));
}

}  // namespace ddiv::testutil

#endif
