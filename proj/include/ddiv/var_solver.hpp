#ifndef DDIV_VAR_SOLVER_HPP
#define DDIV_VAR_SOLVER_HPP

#include <vector>

#include "ddiv/fieldops.hpp"
#include "ddiv/functionals.hpp"
#include "ddiv/grid.hpp"

namespace ddiv {

// Clamped variational problem on the square: minimize
//   E(u) = sum_{x in box-1} F(D^2 u(x)) h^n
// over node values on box-2, with u fixed to boundary_data on the two
// outermost node layers (the clamped band: value and normal derivative).
struct VarProblem {
  MatrixFunctional f;
  Grid grid;
  ScalarField boundary_data;  // full grid; only the band values are used
  ScalarField init;           // must match boundary_data on the band
};

// band = full box minus box-2
IndexBox var_unknown_box(const Grid& g);
IndexBox var_quadrature_box(const Grid& g);

// init field equal to boundary_data on the band and interior_value inside
ScalarField clamped_init(const ScalarField& boundary_data, double interior_value = 0.0);

// grid-continuation init: interpolate a coarse solution onto the fine grid
// (m_fine = 2 m_coarse - 1) and re-clamp the band to the fine boundary data
ScalarField continued_init(const ScalarField& boundary_data_fine,
                           const ScalarField& coarse_solution);

double energy(const VarProblem& problem, const ScalarField& u);

// Exact gradient of the discrete energy with respect to the unknown node
// values; zero on the clamped band.
ScalarField grad_energy(const VarProblem& problem, const ScalarField& u);

struct MinimizeOptions {
  double grad_tol = 1e-8;       // sup-norm of the energy gradient
  long long max_iter = 200000;
  bool use_lbfgs = true;        // quasi-Newton acceleration flag
  int lbfgs_memory = 10;
  double armijo_c = 1e-4;
  double backtrack = 0.5;
  double certified_radius = 0;  // > 0: warn when max |D^2 u|_F leaves it
  bool check_gradient = true;   // FD spot-check of grad_energy at start
};

struct SolveTrace {
  std::vector<double> energy;        // per accepted iterate
  std::vector<double> grad_sup;      // sup-norm per iterate
  std::vector<double> max_hessian;   // max node |D^2 u|_F per iterate
  bool converged = false;
  long long iterations = 0;
  bool region_warning = false;
  double region_warning_radius = 0;
  double final_weak_residual = 0;
};

struct MinimizeResult {
  ScalarField u;
  SolveTrace trace;
};

// Descent with Armijo backtracking; Barzilai-Borwein step estimate for the
// plain-gradient path, optional limited-memory quasi-Newton directions.
// Energy strictly decreases across accepted steps. Line-search failure or
// guard violations raise; the trace is embedded in the error message.
MinimizeResult minimize(const VarProblem& problem, const MinimizeOptions& opts = {});

struct WeakResidualOptions {
  int test_count = 20;
  std::vector<double> widths;  // empty: {0.4, 0.2, 0.1} floored at 6h
};

// Euler-Lagrange residual in the weak sense: max over deterministic
// compactly supported quartic bumps eta (low-discrepancy centers, dyadic
// widths, support inside box-2) of
//   |sum_x a(D^2u) : D^2u : D^2 eta h^n| / ||D^2 eta||_{L^2}.
double weak_residual(const VarProblem& problem, const ScalarField& u,
                     const WeakResidualOptions& opts = {});

}  // namespace ddiv

#endif
