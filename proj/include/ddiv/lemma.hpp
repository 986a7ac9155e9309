#ifndef DDIV_LEMMA_HPP
#define DDIV_LEMMA_HPP

#include <utility>
#include <vector>

#include "ddiv/rng.hpp"

namespace ddiv {

// Sampled instance of the Campanato iteration lemma: a nonnegative,
// nondecreasing phi on (0, R] with constants A, B, alpha, beta (beta < alpha),
// gamma in (beta, alpha), and the epsilon of the hypothesis
//   phi(rho) <= A [ (rho/r)^alpha + epsilon ] phi(r) + B r^beta.
struct IterationLemmaCase {
  std::vector<double> radii;  // strictly increasing, all in (0, R]
  std::vector<double> phi;    // nonnegative, nondecreasing
  double R = 1.0;
  double A = 1.0;
  double B = 0.0;
  double alpha = 1.0;
  double beta = 0.0;
  double gamma = 0.5;
  double epsilon = 0.0;
};

// Constructive constants of the standard proof: tau solves 2 A' tau^alpha =
// tau^gamma with A' = max(A, 1); epsilon0 = tau^alpha; the conclusion holds
// with c = max(tau^-gamma, tau^-beta / (1 - tau^(gamma-beta))).
double lemma_epsilon0(double A, double alpha, double gamma);
double lemma_c_theory(double A, double alpha, double beta, double gamma);

struct LemmaCheckResult {
  bool hypothesis_holds = false;
  bool conclusion_holds = false;
  double epsilon0 = 0;
  double c_theory = 0;
  double c_star = 0;  // smallest c making the conclusion hold at all samples
  bool has_witness = false;
  std::pair<double, double> witness{0, 0};  // (rho, r) of the first violation
};

// Scans all sampled pairs 0 < rho <= r <= R for the hypothesis; when it
// holds and epsilon < epsilon0, checks the conclusion
//   phi(rho) <= c_theory [ (rho/r)^gamma phi(r) + B r^beta ]
// on all pairs and reports the smallest empirical c. Malformed cases
// (beta >= alpha, gamma outside (beta, alpha), non-monotone phi) raise.
LemmaCheckResult lemma_check(const IterationLemmaCase& c);

// Seeded synthetic case used by the validation sweep and the CLI: power
// laws, power laws plus a B-scaled beta term, and monotonized noisy power
// laws, with epsilon drawn below epsilon0.
IterationLemmaCase make_synthetic_case(RngStream& rng);

}  // namespace ddiv

#endif
