#include "ddiv/lemma.hpp"

#include <cmath>

#include "ddiv/errors.hpp"

namespace ddiv {

namespace {

double tau_of(double A, double alpha, double gamma) {
  double Ap = std::max(A, 1.0);
  // 2 A' tau^alpha = tau^gamma, gamma < alpha  =>  tau = (2A')^(-1/(alpha-gamma))
  return std::pow(2.0 * Ap, -1.0 / (alpha - gamma));
}

void validate(const IterationLemmaCase& c) {
  if (!(c.alpha > 0) || c.beta < 0 || c.beta >= c.alpha)
    throw UsageError("lemma_check: need 0 <= beta < alpha");
  if (!(c.gamma > c.beta) || !(c.gamma < c.alpha))
    throw UsageError("lemma_check: need gamma in (beta, alpha)");
  if (c.A < 0 || c.B < 0 || c.epsilon < 0)
    throw UsageError("lemma_check: constants must be nonnegative");
  if (c.radii.size() != c.phi.size() || c.radii.size() < 2)
    throw UsageError("lemma_check: need matching radii/phi with >= 2 samples");
  for (size_t i = 0; i < c.radii.size(); ++i) {
    if (!(c.radii[i] > 0) || c.radii[i] > c.R * (1 + 1e-12))
      throw UsageError("lemma_check: radii must lie in (0, R]");
    if (i && c.radii[i] <= c.radii[i - 1])
      throw UsageError("lemma_check: radii must be strictly increasing");
    if (c.phi[i] < 0) throw UsageError("lemma_check: phi must be nonnegative");
    if (i && c.phi[i] < c.phi[i - 1] * (1 - 1e-12))
      throw UsageError("lemma_check: phi must be nondecreasing");
  }
}

}  // namespace

double lemma_epsilon0(double A, double alpha, double gamma) {
  return std::pow(tau_of(A, alpha, gamma), alpha);
}

double lemma_c_theory(double A, double alpha, double beta, double gamma) {
  double tau = tau_of(A, alpha, gamma);
  double c1 = std::pow(tau, -gamma);
  double c2 = std::pow(tau, -beta) / (1.0 - std::pow(tau, gamma - beta));
  return std::max(c1, c2);
}

LemmaCheckResult lemma_check(const IterationLemmaCase& c) {
  validate(c);
  LemmaCheckResult res;
  res.epsilon0 = lemma_epsilon0(c.A, c.alpha, c.gamma);
  res.c_theory = lemma_c_theory(c.A, c.alpha, c.beta, c.gamma);

  const double slack = 1.0 + 1e-9;
  size_t n = c.radii.size();

  res.hypothesis_holds = true;
  for (size_t i = 0; i < n && res.hypothesis_holds; ++i)
    for (size_t j = i; j < n; ++j) {
      double rho = c.radii[i], r = c.radii[j];
      double bound =
          c.A * (std::pow(rho / r, c.alpha) + c.epsilon) * c.phi[j] +
          c.B * std::pow(r, c.beta);
      if (c.phi[i] > bound * slack + 1e-300) {
        res.hypothesis_holds = false;
        res.has_witness = true;
        res.witness = {rho, r};
        break;
      }
    }

  if (!res.hypothesis_holds || c.epsilon >= res.epsilon0) return res;

  res.conclusion_holds = true;
  res.c_star = 0;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i; j < n; ++j) {
      double rho = c.radii[i], r = c.radii[j];
      double denom = std::pow(rho / r, c.gamma) * c.phi[j] + c.B * std::pow(r, c.beta);
      if (denom <= 0) {
        if (c.phi[i] > 0) {
          res.conclusion_holds = false;
          res.has_witness = true;
          res.witness = {rho, r};
          return res;
        }
        continue;
      }
      double ratio = c.phi[i] / denom;
      res.c_star = std::max(res.c_star, ratio);
      if (ratio > res.c_theory * slack) {
        res.conclusion_holds = false;
        res.has_witness = true;
        res.witness = {rho, r};
        return res;
      }
    }
  return res;
}

IterationLemmaCase make_synthetic_case(RngStream& rng) {
  IterationLemmaCase c;
  c.R = 1.0;
  c.alpha = rng.uniform(0.8, 4.0);
  c.beta = rng.uniform(0.0, 0.8 * c.alpha);
  c.gamma = c.beta + rng.uniform(0.25, 0.75) * (c.alpha - c.beta);
  c.A = rng.uniform(1.0, 4.0);
  c.B = rng.uniform01() < 0.3 ? 0.0 : rng.uniform(0.1, 5.0);
  c.epsilon = rng.uniform(0.0, 0.9) * lemma_epsilon0(c.A, c.alpha, c.gamma);

  int count = 40;
  c.radii.resize(count);
  for (int k = 0; k < count; ++k)
    c.radii[k] = std::exp(std::log(0.01) * (1.0 - double(k) / (count - 1)));

  int family = static_cast<int>(rng.below(3));
  if (family == 1 && c.B == 0.0) family = 0;
  double s = c.alpha + rng.uniform(0.0, 2.0);
  double c1 = rng.uniform(0.1, 10.0);
  c.phi.resize(count);
  switch (family) {
    case 0:
      for (int k = 0; k < count; ++k) c.phi[k] = c1 * std::pow(c.radii[k], s);
      break;
    case 1: {
      double c2 = rng.uniform(0.0, 1.0) * c.B;
      for (int k = 0; k < count; ++k)
        c.phi[k] = c1 * std::pow(c.radii[k], s) + c2 * std::pow(c.radii[k], c.beta);
      break;
    }
    default: {
      double phase = rng.uniform(0, 2 * M_PI);
      double running = 0;
      for (int k = 0; k < count; ++k) {
        double v = c1 * std::pow(c.radii[k], s) *
                   (1.0 + 0.2 * std::sin(3.0 * std::log(c.radii[k]) + phase));
        running = std::max(running, v);
        c.phi[k] = running;  // monotonized
      }
      break;
    }
  }
  return c;
}

}  // namespace ddiv
