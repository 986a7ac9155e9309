#ifndef DDIV_FIELDOPS_HPP
#define DDIV_FIELDOPS_HPP

#include <optional>
#include <vector>

#include "ddiv/grid.hpp"

namespace ddiv {

// Forward difference quotient (u(x + s h e_p) - u(x)) / (s h), s = h_steps.
// The domain shrinks by h_steps nodes at the upper end of axis p.
ScalarField diff_quotient(const ScalarField& u, int axis, int h_steps = 1);
// Backward quotient (u(x) - u(x - s h e_p)) / (s h); shrinks at the lower end.
ScalarField diff_quotient_backward(const ScalarField& u, int axis, int h_steps = 1);
// Same quotients applied entrywise to a matrix field.
MatField diff_quotient(const MatField& f, int axis, int h_steps = 1);

// Second-order central stencils: u_ii by (1,-2,1)/h^2 and u_ij (i != j) by
// the 4-point cross stencil / (4 h^2); exact on cubics. Box shrinks by 1.
MatField hessian(const ScalarField& u);

// Central differences of the Hessian field; box shrinks by 2 total.
ThirdField third_derivatives(const ScalarField& u);

// Nodes of the field box inside the closed ball, in a fixed lexicographic
// order (the deterministic ordering every reduction below relies on).
std::vector<Index> ball_nodes(const IndexBox& box, const Grid& g, const BallRegion& ball);

// Arithmetic node mean over the ball; requires at least 5 nodes.
SymMat ball_mean(const MatField& f, const BallRegion& ball);

// sum_{ball} |F|_F^2 h^n
double ball_l2sq(const MatField& f, const BallRegion& ball);

// Campanato functional sum_{ball} |F - mean|_F^2 h^n.
double campanato(const MatField& f, const BallRegion& ball);

// Hoelder seminorm estimate: max over deterministically chosen node pairs
// of |F(x) - F(y)| / |x - y|^alpha, pairs with |x - y| < 2h excluded.
// All pairs are used when their number is within pair_budget; otherwise a
// low-discrepancy subset of exactly pair_budget pairs.
double holder_seminorm(const ScalarField& f, double alpha, const BallRegion& region,
                       long long pair_budget);
double holder_seminorm(const MatField& f, double alpha, const BallRegion& region,
                       long long pair_budget);
double holder_seminorm(const ThirdField& f, double alpha, const BallRegion& region,
                       long long pair_budget);

// C^{1,1} cutoff bump ((1 - |x-c|^2/W^2)_+)^2, sampled on the full grid.
ScalarField quartic_bump(const Grid& g, const std::array<double, 3>& center, double width);

struct DecayProfile {
  std::vector<double> radii;   // strictly increasing
  std::vector<double> values;  // nonnegative
  double fitted_exponent = 0;
  double fit_residual = 0;
  int dropped_zeros = 0;
};

// Least-squares slope of log(value) against log(radius). Nonpositive
// values are dropped (counted in dropped_zeros); fewer than 4 usable
// points is a usage error. Returns the profile with the fit filled in.
DecayProfile decay_fit(DecayProfile profile);

// Dyadic radii r_max * 2^-k, k = levels-1 .. 0, ascending.
std::vector<double> dyadic_radii(double r_max, int levels);

// Linear interpolation of a full-grid field onto the refined grid with
// m_fine = 2*m-1 nodes per axis (grid continuation for solver warm starts).
ScalarField refine_field(const ScalarField& coarse);

}  // namespace ddiv

#endif
