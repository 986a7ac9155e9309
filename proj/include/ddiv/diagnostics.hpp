#ifndef DDIV_DIAGNOSTICS_HPP
#define DDIV_DIAGNOSTICS_HPP

#include <vector>

#include "ddiv/fieldops.hpp"
#include "ddiv/functionals.hpp"
#include "ddiv/grid.hpp"

namespace ddiv {

struct BootstrapConfig {
  double r_max = 0.4;           // largest dyadic profile radius
  int levels = 4;               // dyadic radii r_max * 2^-k
  double holder_radius = 0.25;  // Hoelder seminorms measured on this ball
  long long pair_budget = 500000;
  double tol_energy = 0.3;      // pass: energy exponent >= n - tol_energy
  double tol_osc = 0.5;         // pass: oscillation exponent >= n + 2 alpha - tol_osc
};

struct DirectionReport {
  int axis = 0;
  DecayProfile energy;       // int_{B_rho} |D^2 g|^2
  DecayProfile oscillation;  // campanato of D^2 g
  double holder_d2g = 0;     // [D^2 g]_alpha on the Hoelder ball
  bool vacuous = false;      // profiles at round-off level (e.g. quadratic u)
  bool pass_energy = true;
  bool pass_osc = true;
};

struct BootstrapReport {
  double alpha = 0;
  double predicted_energy_exp = 0;  // n
  double predicted_osc_exp = 0;     // n + 2 alpha
  std::vector<DirectionReport> directions;
  double holder_d3u = 0;  // [D^3 u]_alpha on the Hoelder ball
  double max_hessian = 0;
  bool guard_ok = true;
  bool pass = true;
};

// For each axis m: g = u^{h_m}, decay profiles of |D^2 g|^2 and its
// Campanato oscillation on dyadic balls, fitted exponents, Hoelder
// seminorms of D^2 g and D^3 u. Flags compare fitted exponents against the
// predicted n and n + 2 alpha with the configured slack.
BootstrapReport bootstrap_report(const ScalarField& u, const MatrixFunctional& f,
                                 double alpha, const BootstrapConfig& cfg = {});

struct RefinementRow {
  double h_coarse = 0, h_fine = 0;
  double holder_d3u_coarse = 0, holder_d3u_fine = 0;
  double rel_change = 0;
  bool pass = false;
};

// Hoelder-seminorm stability across a grid refinement (the regularity
// evidence of the bootstrap): relative change of [D^3 u]_alpha.
RefinementRow compare_refinement(const BootstrapReport& coarse, double h_coarse,
                                 const BootstrapReport& fine, double h_fine,
                                 double tol_rel = 0.2);

struct ProbeConfig {
  std::vector<int> axes;  // multi-index of length order-2; default all along x1
  int test_count = 12;
  std::vector<double> widths;  // empty: defaults as in weak_residual
};

struct ProbeReport {
  int order = 0;
  double residual = 0;     // weak residual of the differentiated equation
  double noise_floor = 0;  // round-off amplification estimate
  bool vacuous = false;    // iterated quotients at round-off level
};

// Weak residual of the equation satisfied by v = iterated difference
// quotients of u (order-2 of them): the b-coefficient field against D^2 v
// plus the discrete commutator source
//   f^kl = D^a(b(D^2u) : D^2u) - b(D^2u) : D^a D^2u,
// tested against compactly supported bumps. order in {3, 4}.
ProbeReport higher_order_probe(const ScalarField& u, const MatrixFunctional& f, int order,
                               const ProbeConfig& cfg = {});

}  // namespace ddiv

#endif
