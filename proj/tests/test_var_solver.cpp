#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ddiv/coefficients.hpp"
#include "ddiv/errors.hpp"
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

VarProblem make_problem(const MatrixFunctional& f, const ScalarField& data,
                        bool init_from_data = false) {
  VarProblem p{f, data.grid(), data, init_from_data ? data : clamped_init(data)};
  return p;
}

double sup_diff(const ScalarField& a, const ScalarField& b) {
  double s = 0;
  a.box().for_each([&](const Index& i) { s = std::max(s, std::fabs(a.at(i) - b.at(i))); });
  return s;
}

}  // namespace

TEST_CASE("energy anchors") {
  Grid g(2, 33);
  ScalarField zero = sample2(33, [](double, double) { return 0.0; });
  auto hs = make_problem(hamstat_functional(), zero, true);
  double interior = std::pow(g.h, 2) * (g.m - 2) * (g.m - 2);
  CHECK(energy(hs, zero) == doctest::Approx(interior).epsilon(1e-12));

  RngStream rng(401, "energy");
  SymMat a = random_symmat(rng, 2, 1.0);
  ScalarField q = sample2(33, [&](double x, double y) {
    return 0.5 * (a(0, 0) * x * x + 2 * a(0, 1) * x * y + a(1, 1) * y * y);
  });
  auto tq = make_problem(trace_quadratic_functional(), q, true);
  double af2 = a.frobenius_norm() * a.frobenius_norm();
  CHECK(energy(tq, q) == doctest::Approx(interior * af2).epsilon(1e-10));

  // the Hessian kills constants
  ScalarField qc = q;
  qc.box().for_each([&](const Index& i) { qc.at(i) += 3.7; });
  CHECK(energy(tq, qc) == doctest::Approx(energy(tq, q)).epsilon(1e-12));
}

TEST_CASE("grad_energy: zero at discrete critical points, matches FD elsewhere") {
  RngStream rng(409, "grad");
  SymMat a = random_symmat(rng, 2, 1.0);
  ScalarField q = sample2(33, [&](double x, double y) {
    return 0.5 * (a(0, 0) * x * x + 2 * a(0, 1) * x * y + a(1, 1) * y * y);
  });
  auto tq = make_problem(trace_quadratic_functional(), q, true);
  CHECK(grad_energy(tq, q).max_abs() < 1e-10);

  ScalarField zero = sample2(33, [](double, double) { return 0.0; });
  auto hs = make_problem(hamstat_functional(), zero, true);
  CHECK(grad_energy(hs, zero).max_abs() == 0.0);

  // FD comparison at random interior nodes on a generic field
  ScalarField u = sample2(33, [](double x, double y) {
    return 0.08 * std::sin(2 * x) * std::cos(y) + 0.05 * x * x * y;
  });
  auto hsu = make_problem(hamstat_functional(), u, true);
  ScalarField gf = grad_energy(hsu, u);
  IndexBox inner = var_unknown_box(u.grid());
  RngStream pick(419, "nodes");
  for (int k = 0; k < 20; ++k) {
    Index i{static_cast<int>(inner.lo[0] + pick.below(inner.extent(0))),
            static_cast<int>(inner.lo[1] + pick.below(inner.extent(1))), 0};
    double step = 1e-6;
    ScalarField up = u, dn = u;
    up.at(i) += step;
    dn.at(i) -= step;
    double fd = (energy(hsu, up) - energy(hsu, dn)) / (2 * step);
    CHECK(std::fabs(fd - gf.at(i)) / (1.0 + std::fabs(fd)) < 1e-6);
  }
}

TEST_CASE("minimize: trace_quadratic recovers its quadratic clamped datum") {
  // the discrete energy is strictly convex and q is an exact critical point
  // (the stencils annihilate the constant grad_F field), so q is the unique
  // minimizer and serves as the oracle
  RngStream rng(421, "mintq");
  SymMat a = random_symmat(rng, 2, 1.0);
  ScalarField q = sample2(33, [&](double x, double y) {
    return 0.5 * (a(0, 0) * x * x + 2 * a(0, 1) * x * y + a(1, 1) * y * y) + 0.3 * x -
           0.1 * y;
  });
  auto prob = make_problem(trace_quadratic_functional(), q);  // zero interior init
  MinimizeOptions opts;
  // the energy round-off floor sits near grad_sup ~ 3e-7 at this size; 1e-6
  // still leaves the recovery error two orders below the 1e-6 target
  opts.grad_tol = 1e-6;
  auto res = minimize(prob, opts);
  CHECK(res.trace.converged);
  CHECK(sup_diff(res.u, q) < 1e-6);
  // energy strictly decreasing across accepted steps
  for (size_t k = 1; k < res.trace.energy.size(); ++k)
    CHECK(res.trace.energy[k] < res.trace.energy[k - 1]);
}

TEST_CASE("minimize: hamstat with zero data stays at zero") {
  ScalarField zero = sample2(33, [](double, double) { return 0.0; });
  auto prob = make_problem(hamstat_functional(), zero);
  auto res = minimize(prob);
  CHECK(res.trace.converged);
  CHECK(res.trace.iterations == 0);
  CHECK(res.u.max_abs() == 0.0);
}

TEST_CASE("minimize: hamstat converges on 0.1-scale data") {
  ScalarField data = sample2(33, [](double x, double y) { return 0.1 * (x * x - y * y); });
  auto prob = make_problem(hamstat_functional(), data);
  MinimizeOptions opts;
  opts.grad_tol = 1e-6;
  opts.certified_radius = 0.5;
  auto res = minimize(prob, opts);
  CHECK(res.trace.converged);
  for (size_t k = 1; k < res.trace.energy.size(); ++k)
    CHECK(res.trace.energy[k] < res.trace.energy[k - 1]);
  CHECK(res.trace.grad_sup.back() <= 1e-6);
  // the zero-interior init jumps at the band, so the monitor warns early on;
  // the minimizer itself sits inside the certified region
  CHECK(res.trace.region_warning);
  CHECK(res.trace.max_hessian.back() < 0.5);

  // quadratic clamped data makes the quadratic itself the minimizer for any
  // catalog functional (grad_F field is constant); verify against that oracle
  CHECK(sup_diff(res.u, data) < 1e-5);
}

TEST_CASE("weak_residual: exact linear minimizer and zero field") {
  RngStream rng(431, "weak");
  SymMat a = random_symmat(rng, 2, 1.0);
  ScalarField q = sample2(65, [&](double x, double y) {
    return 0.5 * (a(0, 0) * x * x + 2 * a(0, 1) * x * y + a(1, 1) * y * y);
  });
  auto tq = make_problem(trace_quadratic_functional(), q, true);
  CHECK(weak_residual(tq, q) < 1e-8);

  ScalarField zero = sample2(65, [](double, double) { return 0.0; });
  auto hs = make_problem(hamstat_functional(), zero, true);
  CHECK(weak_residual(hs, zero) < 1e-15);
}

TEST_CASE("critical-point structure identity lifted to fields") {
  // sum_x grad_F(D^2u) : D^2eta == sum_x (a(D^2u) : D^2u) : D^2eta for any u
  ScalarField u = sample2(49, [](double x, double y) {
    return 0.1 * std::sin(1.4 * x) * std::sin(0.8 * y) + 0.04 * x * x * x;
  });
  Grid g = u.grid();
  auto hs = hamstat_functional();
  MatField d2u = hessian(u);
  ScalarField eta = quartic_bump(g, {0.1, -0.05, 0}, 0.5);
  MatField d2eta = hessian(eta);
  double lhs = 0, rhs = 0;
  d2u.box().for_each([&](const Index& i) {
    SymMat m = d2u.at(i);
    lhs += frobenius_inner(grad_F(hs, m), d2eta.at(i));
    rhs += frobenius_inner(contract_ij(a_tensor(hs, m), m), d2eta.at(i));
  });
  CHECK(std::fabs(lhs - rhs) < 1e-9 * (1.0 + std::fabs(rhs)));
}

TEST_CASE("weak residual is bounded by the gradient sup-norm pairing") {
  // stop a solve early so the gradient is far from zero, then check the
  // one-sided normalization bound
  ScalarField data = sample2(33, [](double x, double y) { return 0.1 * (x * x - y * y); });
  auto prob = make_problem(hamstat_functional(), data);
  MinimizeOptions opts;
  opts.grad_tol = 1e-4;
  auto res = minimize(prob, opts);

  double grad_sup = grad_energy(prob, res.u).max_abs();
  // kappa = max over bumps of sum|eta| / ||D^2 eta||_(discrete L2)
  const Grid& g = data.grid();
  double kappa = 0;
  for (double w : {0.4, 0.2}) {
    ScalarField eta = quartic_bump(g, {0, 0, 0}, w);
    MatField d2eta = hessian(eta);
    double l1 = 0, l2 = 0;
    d2eta.box().for_each([&](const Index& i) {
      l1 += std::fabs(eta.at(i));
      double n2 = d2eta.at(i).frobenius_norm();
      l2 += n2 * n2 * g.h * g.h;
    });
    kappa = std::max(kappa, l1 / std::sqrt(l2));
  }
  double res_weak = weak_residual(prob, res.u, {20, {0.4, 0.2}});
  CHECK(res_weak <= 1.0001 * grad_sup * kappa);
}

TEST_CASE("guard violation at init names the offending node") {
  auto tight = user_functional(
      "tight", [](const SymMat& w) { return w.trace(); },
      [](const SymMat& w) { return SymMat::identity(w.n()); },
      [](const SymMat& w) { return Tensor4::zero(w.n()); },
      [](const SymMat& w) { return w.max_abs() < 0.05; });
  ScalarField data = sample2(33, [](double x, double y) { return x * x + y * y; });
  auto prob = make_problem(tight, data, true);
  try {
    energy(prob, data);
    CHECK(false);
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("node") != std::string::npos);
  }
}

TEST_CASE("minimize rejects init that disagrees with the band") {
  ScalarField data = sample2(33, [](double x, double y) { return x + y; });
  ScalarField bad = sample2(33, [](double, double) { return 0.0; });
  VarProblem prob{trace_quadratic_functional(), data.grid(), data, bad};
  CHECK_THROWS_AS(minimize(prob), UsageError);
}
