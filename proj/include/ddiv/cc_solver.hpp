#ifndef DDIV_CC_SOLVER_HPP
#define DDIV_CC_SOLVER_HPP

#include <utility>

#include "ddiv/fieldops.hpp"
#include "ddiv/functionals.hpp"
#include "ddiv/grid.hpp"
#include "ddiv/symtensor.hpp"

namespace ddiv {

// Constant-coefficient clamped problem on a lattice ball: find w with
//   sum_{x in Q} c0 : D^2 w(x) : D^2 eta(x) = 0  for all eta supported on R,
//   w = boundary_data on the two-node band around R,
// where R is the node set {|x-c| <= r}, the band is the Chebyshev 2-dilation
// of R minus R (it carries both the value and the normal derivative: the
// discrete clamped condition), and Q = R (+) 1 is the quadrature node set.
struct CCProblem {
  Tensor4 c0;
  BallRegion region;
  ScalarField boundary_data;  // must cover region (+) 2
};

struct CCSolveOptions {
  double tol = 1e-10;       // relative residual
  long long max_iter = 0;   // 0: default cap 50*sqrt(#unknowns)
  bool warm_start = true;   // start from boundary_data restricted to R
};

struct CCSolution {
  ScalarField w;            // boundary_data grid with R overwritten by the solution
  double residual_norm = 0; // final relative residual
  long long iterations = 0;
  int unknown_count = 0;
};

// Conjugate gradient on the energy form (SPD once legendre_constant(c0) > 0)
// with diagonal preconditioning, matrix-free. Deterministic.
CCSolution solve_cc(const CCProblem& problem, const CCSolveOptions& opts = {});

// Discrete weak-form residual of a solution against a compactly supported
// test field eta (supported strictly inside R):
//   sum_{x in Q} c0 : D^2 w : D^2 eta * h^n, normalized by ||D^2 eta||_L2.
double cc_weak_residual(const CCProblem& problem, const ScalarField& w,
                        const ScalarField& eta);

// Discrete energy sum_{x in Q} c0 : D^2 w : D^2 w * h^n of a candidate field
// (used by the minimality property tests).
double cc_energy(const CCProblem& problem, const ScalarField& w);

// Solves once and measures both Theorem-style decay functionals on
// concentric balls: energy(rho) = int_{B_rho} |D^2 w|^2 and the Campanato
// oscillation, with fitted log-log exponents (targets n and n+2).
struct DecayExperiment {
  DecayProfile energy;
  DecayProfile oscillation;
  CCSolution solution;
};
DecayExperiment decay_experiment(const Tensor4& c0, const ScalarField& boundary_data,
                                 const BallRegion& region, const std::vector<double>& radii,
                                 const CCSolveOptions& opts = {});

// The frozen-coefficient split g = v + w of the bootstrap proof: g is the
// one-step difference quotient of u along the axis, the coefficient field
// c(x) = btilde(D^2u(x), D^2u(x+h e_p)) is frozen at the ball center, w
// solves the constant-coefficient clamped problem with data g, and v = g - w.
// zeta is the coefficient oscillation max |c(x) - c(center)|_F over the ball;
// bound_ratio = Lambda^2 int |D^2 v|^2 / (zeta^2 int |D^2 g|^2), the discrete
// analogue of the correction bound (defined as 0 when the denominator
// vanishes). lambda is legendre_constant(c(center)).
struct FreezeSplit {
  ScalarField g;
  ScalarField v;
  ScalarField w;
  double zeta = 0;
  double lambda = 0;
  double bound_ratio = 0;
  double d2v_l2sq = 0;
  double d2g_l2sq = 0;
};
FreezeSplit freeze_split(const ScalarField& u, const MatrixFunctional& f, int axis,
                         const BallRegion& ball, const CCSolveOptions& opts = {});

}  // namespace ddiv

#endif
