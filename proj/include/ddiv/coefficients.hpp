#ifndef DDIV_COEFFICIENTS_HPP
#define DDIV_COEFFICIENTS_HPP

#include <vector>

#include "ddiv/functionals.hpp"
#include "ddiv/symtensor.hpp"

namespace ddiv {

// Gauss-Legendre nodes/weights on [0,1], computed by Newton iteration on
// the Legendre polynomial. Deterministic; count >= 1.
struct Quadrature01 {
  std::vector<double> nodes;
  std::vector<double> weights;
};
Quadrature01 gauss_legendre_01(int count);

// Coefficient tensor of the induced weak form at Hessian value M:
//   a[i][j][k][l] = G_il d_jk + G_kj d_il,  G = f.grad(M^2),
// symmetrized in (i,j) and (k,l). Has exact major symmetry.
Tensor4 a_tensor(const MatrixFunctional& f, const SymMat& m);

// |grad_F(M) - a(M):M|_F, which is zero up to round-off for every
// functional of the f(M^2) form (exact algebraic identity).
double structure_residual(const MatrixFunctional& f, const SymMat& m);

// Derivative of a_tensor in symmetric directions, as the sixth-order
// tensor da[p][q][k][l][i][j] = d a^{pq,kl}/d u_ij, computed analytically
// through the chain rule w = M^2 (dw = M E + E M) and f.hess.
Tensor6 da_tensor(const MatrixFunctional& f, const SymMat& m);

// b[i][j][k][l] = a[i][j][k][l] + sum_{pq} da[p][q][k][l][i][j] M_pq.
// apply_quadratic(b(M), xi) equals the second directional derivative of
// F at M in direction xi.
Tensor4 b_tensor(const MatrixFunctional& f, const SymMat& m);

// Difference-quotient companion of b: for Hessians M0 (base point) and M1
// (shifted point),
//   btilde = a(M1) + [int_0^1 da(t M1 + (1-t) M0) dt] : M0,
// the t-integral taken by Gauss-Legendre with quad_points nodes. Equals
// b(M0) exactly when M0 == M1 and approaches it at rate O(|M1 - M0|).
Tensor4 btilde_tensor(const MatrixFunctional& f, const SymMat& m0, const SymMat& m1,
                      int quad_points = 8);

}  // namespace ddiv

#endif
