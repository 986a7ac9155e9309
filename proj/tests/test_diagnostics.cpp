#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ddiv/diagnostics.hpp"
#include "ddiv/errors.hpp"
#include "ddiv/lemma.hpp"
#include "ddiv/var_solver.hpp"
#include "test_util.hpp"

using namespace ddiv;
using namespace ddiv::testutil;

namespace {

ScalarField sample2(int m, const std::function<double(double, double)>& fn) {
  Grid g(2, m);
  return ScalarField::sample(g, [&](const std::array<double, 3>& x) {
    return fn(x[0], x[1]);
  });
}

IterationLemmaCase power_case(double expo, double A, double B, double alpha, double beta,
                              double gamma, double eps) {
  IterationLemmaCase c;
  c.A = A;
  c.B = B;
  c.alpha = alpha;
  c.beta = beta;
  c.gamma = gamma;
  c.epsilon = eps;
  for (int k = 0; k < 30; ++k) {
    double r = std::exp(std::log(0.01) * (1.0 - k / 29.0));
    c.radii.push_back(r);
    c.phi.push_back(std::pow(r, expo));
  }
  return c;
}

}  // namespace

TEST_CASE("lemma_check: exact power law phi = rho^alpha with B = 0") {
  auto c = power_case(/*expo=*/2.0, /*A=*/2.0, /*B=*/0.0, /*alpha=*/2.0, /*beta=*/0.2,
                      /*gamma=*/1.0, /*eps=*/0.0);
  auto res = lemma_check(c);
  CHECK(res.hypothesis_holds);
  CHECK(res.conclusion_holds);
  CHECK(res.c_star == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("lemma_check sharpness: phi = rho^gamma needs epsilon >= epsilon0") {
  // sup_t t^gamma / (t^alpha + eps) <= A holds exactly when eps >= 1/(4A^2)
  // for alpha = 2, gamma = 1, which is epsilon0 itself: the gamma-rate
  // function is the boundary case the lemma's epsilon threshold excludes.
  double A = 2.0, alpha = 2.0, gamma = 1.0;
  double eps0 = lemma_epsilon0(A, alpha, gamma);
  auto c = power_case(/*expo=*/1.0, A, /*B=*/0.0, alpha, /*beta=*/0.2, gamma,
                      /*eps=*/0.95 * eps0);
  auto res = lemma_check(c);
  CHECK_FALSE(res.hypothesis_holds);

  auto c2 = power_case(/*expo=*/1.0, A, /*B=*/0.0, alpha, /*beta=*/0.2, gamma,
                       /*eps=*/1.2 * eps0);
  auto res2 = lemma_check(c2);
  CHECK(res2.hypothesis_holds);  // holds once eps crosses the threshold
}

TEST_CASE("lemma_check: phi = rho^beta with large B") {
  auto c = power_case(/*expo=*/0.3, /*A=*/1.5, /*B=*/2.0, /*alpha=*/2.0, /*beta=*/0.3,
                      /*gamma=*/1.0, /*eps=*/0.0);
  auto res = lemma_check(c);
  CHECK(res.hypothesis_holds);
  CHECK(res.conclusion_holds);
  CHECK(res.c_star <= res.c_theory);
}

TEST_CASE("lemma_check: malformed cases are rejected") {
  auto c = power_case(1.0, 2.0, 0.0, 2.0, 0.2, 1.0, 0.0);
  auto bad_beta = c;
  bad_beta.beta = 2.5;  // beta >= alpha
  CHECK_THROWS_AS(lemma_check(bad_beta), UsageError);
  auto bad_gamma = c;
  bad_gamma.gamma = 0.1;  // outside (beta, alpha)
  CHECK_THROWS_AS(lemma_check(bad_gamma), UsageError);
  auto jump = c;
  jump.phi[10] = jump.phi[12] * 2.0;  // violates monotonicity
  CHECK_THROWS_AS(lemma_check(jump), UsageError);
}

TEST_CASE("lemma validation sweep: no hypothesis-true/conclusion-false cases") {
  RngStream rng(2026, "lemma");
  int hypothesis_true = 0, bad = 0;
  for (int k = 0; k < 1000; ++k) {
    auto c = make_synthetic_case(rng);
    auto res = lemma_check(c);
    if (res.hypothesis_holds) {
      ++hypothesis_true;
      if (!res.conclusion_holds) ++bad;
    }
  }
  CHECK(bad == 0);
  CHECK(hypothesis_true > 500);  // the generator mostly produces valid cases
}

TEST_CASE("bootstrap_report: quadratic field passes vacuously") {
  RngStream rng(501, "bq");
  SymMat a = random_symmat(rng, 2, 1.0);
  ScalarField q = sample2(65, [&](double x, double y) {
    return 0.5 * (a(0, 0) * x * x + 2 * a(0, 1) * x * y + a(1, 1) * y * y);
  });
  auto rep = bootstrap_report(q, hamstat_functional(), 0.5);
  CHECK(rep.pass);
  for (const auto& dir : rep.directions) {
    CHECK(dir.vacuous);
    CHECK(dir.holder_d2g < 1e-7);
  }
  CHECK(rep.holder_d3u < 1e-7);
}

TEST_CASE("bootstrap_report: smooth quartic field meets the predicted exponents") {
  ScalarField u = sample2(129, [](double x, double y) {
    return 0.1 * (x * x * x * x + y * y * y * y);
  });
  auto rep = bootstrap_report(u, hamstat_functional(), 0.5);
  CHECK(rep.pass);
  for (const auto& dir : rep.directions) {
    CHECK_FALSE(dir.vacuous);
    CHECK(dir.energy.fitted_exponent >= 2.0 - 0.3);
    CHECK(dir.oscillation.fitted_exponent >= 3.0 - 0.5);
  }
  CHECK(rep.holder_d3u > 0);
}

TEST_CASE("bootstrap_report: a C^{1,1} kink trips the oscillation flag") {
  ScalarField u = sample2(129, [](double x, double) { return 0.1 * x * std::fabs(x); });
  auto rep = bootstrap_report(u, hamstat_functional(), 0.5);
  CHECK_FALSE(rep.pass);
  CHECK_FALSE(rep.directions[0].pass_osc);
}

TEST_CASE("compare_refinement: smooth field is stable across grids") {
  auto field = [](int m) {
    return sample2(m, [](double x, double y) {
      return 0.1 * (x * x * x * x + y * y * y * y);
    });
  };
  auto r32 = bootstrap_report(field(65), hamstat_functional(), 0.5);
  auto r64 = bootstrap_report(field(129), hamstat_functional(), 0.5);
  auto row = compare_refinement(r32, 1.0 / 32, r64, 1.0 / 64, 0.2);
  CHECK(row.pass);
}

TEST_CASE("higher_order_probe: quadratic and exact linear minimizer give zero") {
  RngStream rng(521, "probe");
  SymMat a = random_symmat(rng, 2, 1.0);
  ScalarField q = sample2(65, [&](double x, double y) {
    return 0.5 * (a(0, 0) * x * x + 2 * a(0, 1) * x * y + a(1, 1) * y * y);
  });
  auto rep = higher_order_probe(q, trace_quadratic_functional(), 3);
  CHECK(rep.residual < 1e-10);
  CHECK(rep.vacuous);  // D^2 of the quotient of a quadratic is round-off

  auto rep4 = higher_order_probe(q, trace_quadratic_functional(), 4, {{0, 1}, 12, {}});
  CHECK(rep4.residual < 1e-8);
}

TEST_CASE("higher_order_probe: residual shrinks under refinement at a minimizer") {
  auto solve_at = [&](int m) {
    ScalarField data = sample2(m, [](double x, double y) {
      return 0.1 * (x * x * x * x + y * y * y * y);
    });
    VarProblem prob{hamstat_functional(), data.grid(), data, clamped_init(data)};
    MinimizeOptions o;
    // above the round-off floor at both resolutions; the probe residual is
    // discretization-dominated well before these levels
    o.grad_tol = m > 100 ? 3e-6 : 1e-6;
    o.check_gradient = false;
    return minimize(prob, o).u;
  };
  ScalarField u32 = solve_at(65);
  ScalarField u64 = solve_at(129);
  ProbeConfig cfg;
  cfg.widths = {0.4, 0.25};
  auto r32 = higher_order_probe(u32, hamstat_functional(), 3, cfg);
  auto r64 = higher_order_probe(u64, hamstat_functional(), 3, cfg);
  CHECK_FALSE(r32.vacuous);
  CHECK_FALSE(r64.vacuous);
  CHECK(r32.residual / r64.residual >= 1.5);
}

TEST_CASE("higher_order_probe rejects bad orders and coarse grids") {
  ScalarField u = sample2(33, [](double x, double) { return x; });
  CHECK_THROWS_AS(higher_order_probe(u, hamstat_functional(), 5), UsageError);
  CHECK_THROWS_AS(higher_order_probe(u, hamstat_functional(), 2), UsageError);
}
