#ifndef DDIV_SMALLEIG_HPP
#define DDIV_SMALLEIG_HPP

#include <vector>

#include "ddiv/symtensor.hpp"

namespace ddiv {

// Eigenvalues of a dense symmetric matrix of dimension <= 6 by cyclic
// Jacobi rotations; returned sorted ascending. Deterministic (fixed sweep
// order, fixed convergence threshold), accurate to ~1e-14 relative.
std::vector<double> sym_eigenvalues(const QuadForm& q);

// Full eigensystem; vectors[k] is the unit eigenvector for values[k].
struct EigenSys {
  std::vector<double> values;
  std::vector<std::array<double, 6>> vectors;
};
EigenSys sym_eigensystem(const QuadForm& q);

double min_eigenvalue(const QuadForm& q);
double max_eigenvalue(const QuadForm& q);

// eigenvalues of a SymMat (n <= 3), ascending
std::vector<double> sym_eigenvalues(const SymMat& m);

// spectral norm max |lambda_i|
double operator_norm(const SymMat& m);

}  // namespace ddiv

#endif
