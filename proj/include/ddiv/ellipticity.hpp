#ifndef DDIV_ELLIPTICITY_HPP
#define DDIV_ELLIPTICITY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ddiv/functionals.hpp"
#include "ddiv/symtensor.hpp"

namespace ddiv {

// Minimum of the quadratic form xi -> T:xi:xi over unit-Frobenius symmetric
// xi (the full Legendre constant): the smallest eigenvalue of the
// major-symmetrized tensor in vectorized coordinates. Exact up to the
// Jacobi eigensolver tolerance.
double legendre_constant(const Tensor4& t);

// Minimum of the same form restricted to symmetrized rank-one directions
// sym(p (x) q), normalized by |sym(p (x) q)|_F^2. Computed by multi-start
// block-coordinate minimization (each half-step solves a small generalized
// eigenproblem exactly); the result is an upper bound on the true rank-one
// constant and always >= legendre_constant(T) - eps.
double rank_one_constant(const Tensor4& t, int restarts = 8);

enum class SamplerMode { FrobeniusBall, OperatorBall, ExplicitList };

// Deterministic sampler over a region of Hessian space.
struct HessianSampler {
  SamplerMode mode = SamplerMode::FrobeniusBall;
  int n = 2;
  double radius = 1.0;
  int count = 100;
  uint64_t seed = 0;
  std::vector<SymMat> explicit_list;

  std::vector<SymMat> generate() const;
  std::string mode_name() const;
};

enum class Verdict { RegularPlus, RegularMinus, Fails };

struct EllipticityReport {
  double lambda_legendre = 0;   // min over samples, full Legendre constant of a
  double lambda_rank_one = 0;   // min over samples, rank-one upper bound for a
  double lambda_b_plus = 0;     // min over samples of legendre_constant(b)
  double lambda_b_minus = 0;    // min over samples of legendre_constant(-b)
  SymMat worst_sample;
  Verdict verdict = Verdict::Fails;
  bool guard_failed = false;
  std::optional<SymMat> guard_failure_sample;
  std::string sampler_mode;
  double sampler_radius = 0;
  int sample_count = 0;
  double threshold = 0;
  bool rank_one_is_upper_bound = true;  // never a certified minimum
};

std::string verdict_name(Verdict v);

// Evaluates the Legendre constants of a and +/-b at every sample and
// aggregates per the regularity definition: the verdict is RegularPlus when
// min lambda_a > threshold and min lambda_b_plus > threshold (RegularMinus
// with -b), else Fails. Deterministic for a fixed sampler.
EllipticityReport certify_region(const MatrixFunctional& f, const HessianSampler& sampler,
                                 double threshold = 0.0);

struct FrontierResult {
  bool found = false;   // false: still convex at the max probe radius
  double t_star = 0;    // largest t with legendre_constant(b(t*dir)) >= 0
  double max_probe = 0;
};

// Bisection along the ray t * direction/|direction|_F for the largest t at
// which the b-form is still positive semidefinite; probes up to t = 10.
FrontierResult convexity_frontier(const MatrixFunctional& f, const SymMat& direction,
                                  double tol);

}  // namespace ddiv

#endif
