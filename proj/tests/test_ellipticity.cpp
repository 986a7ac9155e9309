#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ddiv/coefficients.hpp"
#include "ddiv/ellipticity.hpp"
#include "ddiv/errors.hpp"
#include "ddiv/smalleig.hpp"
#include "test_util.hpp"

using namespace ddiv;
using namespace ddiv::testutil;

TEST_CASE("legendre_constant anchor values") {
  CHECK(legendre_constant(Tensor4::identity_pairing(2)) == doctest::Approx(1.0));
  CHECK(legendre_constant(Tensor4::identity_pairing(3)) == doctest::Approx(1.0));

  auto tq = trace_quadratic_functional();
  RngStream rng(101, "legendre");
  SymMat m = random_symmat(rng, 2, 1.0);
  CHECK(legendre_constant(a_tensor(tq, m)) == doctest::Approx(2.0).epsilon(1e-9));

  auto hs = hamstat_functional();
  CHECK(legendre_constant(a_tensor(hs, SymMat::zero(2))) ==
        doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("legendre_constant scales linearly") {
  RngStream rng(103, "scaling");
  for (int t = 0; t < 20; ++t) {
    Tensor4 T = random_tensor4(rng, 3, 1.0);
    double c = rng.uniform(0.1, 5.0);
    CHECK(close_rel(legendre_constant(c * T), c * legendre_constant(T), 1e-12));
  }
}

TEST_CASE("rank_one_constant: isotropic anchors and subset inequality") {
  CHECK(rank_one_constant(Tensor4::identity_pairing(2)) == doctest::Approx(1.0));
  auto tq = trace_quadratic_functional();
  CHECK(rank_one_constant(a_tensor(tq, SymMat::zero(2))) == doctest::Approx(2.0));

  RngStream rng(107, "rankone");
  for (int t = 0; t < 30; ++t) {
    int n = (t % 2) ? 3 : 2;
    Tensor4 T = random_tensor4(rng, n, 1.0);
    CHECK(rank_one_constant(T) >= legendre_constant(T) - 1e-9);
  }
}

TEST_CASE("rank_one_constant can exceed legendre: trace-form counterexample") {
  // Q(xi) = |xi|^2 - 0.9 (tr xi)^2 on n = 2: the Legendre minimizer is the
  // identity direction (value 1 - 1.8 = -0.8) which no sym(p x q) with
  // |p| = |q| = 1 attains; the rank-one minimum is 1 - 0.9 = 0.1 at p = q.
  Tensor4 tr_form = Tensor4::from_entries(
      2, [](int i, int j, int k, int l) { return (i == j && k == l) ? 1.0 : 0.0; });
  Tensor4 t = Tensor4::identity_pairing(2) - 0.9 * tr_form;
  CHECK(legendre_constant(t) == doctest::Approx(-0.8).epsilon(1e-10));
  double r1 = rank_one_constant(t);
  CHECK(r1 == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(r1 > legendre_constant(t) + 0.5);
}

TEST_CASE("HessianSampler: determinism and bounds") {
  HessianSampler s;
  s.mode = SamplerMode::OperatorBall;
  s.n = 2;
  s.radius = 0.5;
  s.count = 100;
  s.seed = 7;
  auto a = s.generate();
  auto b = s.generate();
  REQUIRE(a.size() == 100);
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK((a[i] - b[i]).frobenius_norm() == 0.0);
    CHECK(operator_norm(a[i]) <= 0.5 + 1e-12);
  }
  s.mode = SamplerMode::FrobeniusBall;
  for (const SymMat& m : s.generate()) CHECK(m.frobenius_norm() <= 0.5 + 1e-12);
}

TEST_CASE("certify_region: trace_quadratic is regular everywhere") {
  auto tq = trace_quadratic_functional();
  HessianSampler s;
  s.mode = SamplerMode::FrobeniusBall;
  s.n = 2;
  s.radius = 10.0;
  s.count = 200;
  s.seed = 3;
  auto rep = certify_region(tq, s);
  CHECK(rep.verdict == Verdict::RegularPlus);
  CHECK(rep.lambda_legendre == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(rep.lambda_b_plus == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(rep.lambda_rank_one >= rep.lambda_legendre - 1e-9);
}

TEST_CASE("certify_region: hamstat inside the unit operator ball") {
  auto hs = hamstat_functional();
  HessianSampler s;
  s.mode = SamplerMode::OperatorBall;
  s.n = 2;
  s.radius = 0.5;
  s.count = 500;
  s.seed = 7;
  auto rep = certify_region(hs, s);
  CHECK(rep.verdict == Verdict::RegularPlus);
  CHECK(rep.lambda_legendre > 0);
  CHECK(rep.lambda_b_plus > 0);

  HessianSampler zero;
  zero.mode = SamplerMode::ExplicitList;
  zero.n = 2;
  zero.explicit_list = {SymMat::zero(2)};
  auto rep0 = certify_region(hs, zero);
  CHECK(rep0.lambda_b_plus == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("certify_region: hamstat fails on a large ball") {
  auto hs = hamstat_functional();
  HessianSampler s;
  s.mode = SamplerMode::OperatorBall;
  s.n = 2;
  s.radius = 5.0;
  s.count = 300;
  s.seed = 11;
  auto rep = certify_region(hs, s);
  CHECK(rep.verdict == Verdict::Fails);
  CHECK(rep.lambda_b_plus < 0);
}

TEST_CASE("convexity => b-positivity inside small balls") {
  RngStream dummy(0, "x");
  for (const char* name : {"trace_quadratic", "hamstat"}) {
    auto f = functional_by_name(name);
    HessianSampler s;
    s.mode = SamplerMode::FrobeniusBall;
    s.n = 2;
    s.radius = 0.5;
    s.count = 100;
    s.seed = 13;
    for (const SymMat& m : s.generate())
      CHECK(legendre_constant(b_tensor(f, m)) > 0);
  }
}

TEST_CASE("convexity_frontier: trace has none; hamstat has an analytic one along I") {
  auto tq = trace_quadratic_functional();
  auto hs = hamstat_functional();
  SymMat dir = SymMat::identity(2);

  auto none = convexity_frontier(tq, dir, 1e-4);
  CHECK_FALSE(none.found);

  // along I/|I| the trace-free mode of the b-form crosses zero exactly at
  // t = sqrt(2): 1 - t^2/(1 + t^2/2) = 0
  auto res = convexity_frontier(hs, dir, 1e-5);
  REQUIRE(res.found);
  CHECK(res.t_star == doctest::Approx(std::sqrt(2.0)).epsilon(1e-4));
}

TEST_CASE("convexity_frontier: diag(1,0) direction stays convex (no frontier)") {
  auto hs = hamstat_functional();
  SymMat dir(2);
  dir.set(0, 0, 1.0);
  auto res = convexity_frontier(hs, dir, 1e-4);
  // the b-form at diag(t,0) is f*(b1^2 xi11^2 + 2 b1 xi12^2 + xi22^2),
  // positive for every t, so the probe reports no frontier below 10
  CHECK_FALSE(res.found);
}

TEST_CASE("convexity_frontier: bisection agrees with a dense scan") {
  auto hs = hamstat_functional();
  SymMat dir = SymMat::identity(2);
  double tol = 1e-3;
  auto res = convexity_frontier(hs, dir, tol);
  REQUIRE(res.found);
  double dn = dir.frobenius_norm();
  double last_ok = 0;
  for (double t = 0; t <= 10.0; t += tol) {
    if (legendre_constant(b_tensor(hs, (t / dn) * dir)) >= 0)
      last_ok = t;
    else
      break;
  }
  CHECK(std::fabs(res.t_star - last_ok) <= 2 * tol);
}

TEST_CASE("certify_region: guard failure is recorded") {
  auto f = user_functional(
      "guarded", [](const SymMat& w) { return w.trace(); },
      [](const SymMat& w) { return SymMat::identity(w.n()); },
      [](const SymMat& w) { return Tensor4::zero(w.n()); },
      [](const SymMat& w) { return w.trace() < 0.1; });
  HessianSampler s;
  s.mode = SamplerMode::FrobeniusBall;
  s.n = 2;
  s.radius = 2.0;
  s.count = 50;
  s.seed = 17;
  auto rep = certify_region(f, s);
  CHECK(rep.verdict == Verdict::Fails);
  CHECK(rep.guard_failed);
  CHECK(rep.guard_failure_sample.has_value());
}
