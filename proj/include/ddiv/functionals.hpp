#ifndef DDIV_FUNCTIONALS_HPP
#define DDIV_FUNCTIONALS_HPP

#include <functional>
#include <string>
#include <vector>

#include "ddiv/symtensor.hpp"

namespace ddiv {

// A Hessian functional F(M) = f(M^T M) = f(M^2) for symmetric M, described
// through f and its first two derivatives in w = M^2. Derivatives use the
// independent-entries convention, i.e. for symmetric directions E, G:
//   d/dt f(w + tE)           = <grad(w), E>_F
//   d^2/(ds dt) f(w+sE+tG)   = sum_{ijkl} hess(w)[i][j][k][l] E_ij G_kl
// grad is symmetric at symmetric w; hess carries the minor symmetries and
// the major symmetry hess[ij][kl] == hess[kl][ij].
struct MatrixFunctional {
  std::string name;
  std::function<double(const SymMat&)> eval;          // w -> f(w)
  std::function<SymMat(const SymMat&)> grad;          // w -> df/dw
  std::function<Tensor4(const SymMat&)> hess;         // w -> d2f/dw2
  std::function<bool(const SymMat&)> domain_guard;    // predicate on w
};

// f(w) = tr(w); induces F(M) = |M|_F^2
MatrixFunctional trace_quadratic_functional();

// f(w) = sqrt(det(I + w)); induces the Lagrangian-graph area integrand
// F(M) = sqrt(det(I + M^2))
MatrixFunctional hamstat_functional();

// wraps user callbacks (used for fault-injection tests and extensions)
MatrixFunctional user_functional(std::string name,
                                 std::function<double(const SymMat&)> eval,
                                 std::function<SymMat(const SymMat&)> grad,
                                 std::function<Tensor4(const SymMat&)> hess,
                                 std::function<bool(const SymMat&)> guard);

// lookup by name ("trace_quadratic", "hamstat"); throws UsageError otherwise
MatrixFunctional functional_by_name(const std::string& name);

// F(M) = f(M^2); checks the guard at w = M^2
double eval_F(const MatrixFunctional& f, const SymMat& m);

// dF/dM as the Frechet derivative along symmetric directions:
// grad_F(M) = M G + G M with G = f.grad(M^2); for every f this satisfies
// the structure identity grad_F(M) = a(M) : M exactly.
SymMat grad_F(const MatrixFunctional& f, const SymMat& m);

// Cross-check of the supplied derivatives against central finite
// differences at the given w-space samples: grad vs FD(eval) and hess vs
// FD(grad) along a deterministic direction set. Returns the worst relative
// error over all samples and directions.
double check_derivatives(const MatrixFunctional& f, const std::vector<SymMat>& samples,
                         double step);

}  // namespace ddiv

#endif
