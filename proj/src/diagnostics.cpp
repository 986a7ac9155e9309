#include "ddiv/diagnostics.hpp"

#include <cmath>

#include "ddiv/coefficients.hpp"
#include "ddiv/errors.hpp"
#include "ddiv/rng.hpp"

namespace ddiv {

namespace {

double sup_hessian(const MatField& f, const std::vector<Index>& nodes) {
  double s = 0;
  for (const Index& i : nodes) s = std::max(s, f.at(i).frobenius_norm());
  return s;
}

}  // namespace

BootstrapReport bootstrap_report(const ScalarField& u, const MatrixFunctional& f,
                                 double alpha, const BootstrapConfig& cfg) {
  if (alpha <= 0 || alpha > 1) throw UsageError("bootstrap_report: need 0 < alpha <= 1");
  const Grid& g = u.grid();
  int n = g.n;

  BootstrapReport rep;
  rep.alpha = alpha;
  rep.predicted_energy_exp = n;
  rep.predicted_osc_exp = n + 2.0 * alpha;

  // guard sanity over the Hessian range of u
  MatField d2u = hessian(u);
  d2u.box().for_each([&](const Index& i) {
    rep.max_hessian = std::max(rep.max_hessian, d2u.at(i).frobenius_norm());
    if (rep.guard_ok && !f.domain_guard(d2u.at(i).square())) rep.guard_ok = false;
  });

  auto radii = dyadic_radii(cfg.r_max, cfg.levels);
  BallRegion holder_ball{{0, 0, 0}, cfg.holder_radius};
  double uscale = std::max(1.0, u.max_abs());

  for (int axis = 0; axis < n; ++axis) {
    DirectionReport dir;
    dir.axis = axis;
    ScalarField gq = diff_quotient(u, axis, 1);
    MatField d2g = hessian(gq);

    BallRegion outer{{0, 0, 0}, cfg.r_max};
    auto outer_nodes = ball_nodes(d2g.box(), g, outer);
    if (outer_nodes.size() < 5)
      throw UsageError("bootstrap_report: profile radii not resolved by the grid");
    double scale = sup_hessian(d2g, outer_nodes);

    // quadratic fields leave only round-off in D^2 g: report vacuously
    dir.vacuous = scale <= 1e-9 * uscale;
    if (!dir.vacuous) {
      dir.energy.radii = radii;
      dir.oscillation.radii = radii;
      for (double rho : radii) {
        BallRegion ball{{0, 0, 0}, rho};
        dir.energy.values.push_back(ball_l2sq(d2g, ball));
        dir.oscillation.values.push_back(campanato(d2g, ball));
      }
      dir.energy = decay_fit(dir.energy);
      dir.oscillation = decay_fit(dir.oscillation);
      dir.pass_energy = dir.energy.fitted_exponent >= n - cfg.tol_energy;
      dir.pass_osc = dir.oscillation.fitted_exponent >= n + 2 * alpha - cfg.tol_osc;
    }
    dir.holder_d2g = holder_seminorm(d2g, alpha, holder_ball, cfg.pair_budget);
    rep.pass = rep.pass && dir.pass_energy && dir.pass_osc;
    rep.directions.push_back(std::move(dir));
  }

  ThirdField d3u = third_derivatives(u);
  rep.holder_d3u = holder_seminorm(d3u, alpha, holder_ball, cfg.pair_budget);
  rep.pass = rep.pass && rep.guard_ok;
  return rep;
}

RefinementRow compare_refinement(const BootstrapReport& coarse, double h_coarse,
                                 const BootstrapReport& fine, double h_fine,
                                 double tol_rel) {
  RefinementRow row;
  row.h_coarse = h_coarse;
  row.h_fine = h_fine;
  row.holder_d3u_coarse = coarse.holder_d3u;
  row.holder_d3u_fine = fine.holder_d3u;
  double denom = std::max({coarse.holder_d3u, fine.holder_d3u, 1e-12});
  row.rel_change = std::fabs(fine.holder_d3u - coarse.holder_d3u) / denom;
  row.pass = row.rel_change <= tol_rel;
  return row;
}

ProbeReport higher_order_probe(const ScalarField& u, const MatrixFunctional& f, int order,
                               const ProbeConfig& cfg) {
  if (order < 3 || order > 4)
    throw UsageError("higher_order_probe: order must be 3 or 4");
  const Grid& g = u.grid();
  int n = g.n;
  int quotients = order - 2;

  std::vector<int> axes = cfg.axes;
  if (axes.empty()) axes.assign(quotients, 0);
  if (static_cast<int>(axes.size()) != quotients)
    throw UsageError("higher_order_probe: need order-2 quotient axes");
  for (int a : axes)
    if (a < 0 || a >= n) throw UsageError("higher_order_probe: bad axis");
  if (g.m < 9 + 2 * quotients)
    throw UsageError("higher_order_probe: grid too coarse for the requested order; "
                     "use a finer grid");

  // v1 = first quotient; the order-3 equation is int b(D^2u) : D^2 v1 : D^2 eta = 0
  // and the order-4 one takes one more quotient of its integrand, i.e. the
  // commutator source f^kl enters as D^a(b : D^2 v1) - b : D^2 v.
  ScalarField v1 = diff_quotient(u, axes[0], 1);
  MatField d2v1 = hessian(v1);
  MatField d2u = hessian(u);

  IndexBox base = d2v1.box().intersect(d2u.box());
  MatField w1(g, base);
  base.for_each([&](const Index& i) {
    w1.at(i) = contract_ij(b_tensor(f, d2u.at(i)), d2v1.at(i));
  });
  MatField resid = order == 3 ? w1 : diff_quotient(w1, axes[1], 1);
  IndexBox common = resid.box();
  if (common.empty())
    throw UsageError("higher_order_probe: empty probe domain; use a finer grid");

  ProbeReport rep;
  rep.order = order;
  // round-off amplification of (order-2) quotients followed by the Hessian
  rep.noise_floor =
      2.22e-16 * std::max(1.0, u.max_abs()) * std::pow(2.0 / g.h, order);
  ScalarField v = order == 3 ? v1 : diff_quotient(v1, axes[1], 1);
  MatField d2v = hessian(v);
  double d2v_sup = 0;
  d2v.box().intersect(common).for_each(
      [&](const Index& i) { d2v_sup = std::max(d2v_sup, d2v.at(i).frobenius_norm()); });
  rep.vacuous = d2v_sup <= 10.0 * rep.noise_floor;

  // weak pairing against compactly supported bumps inside the common box
  std::vector<double> widths = cfg.widths;
  if (widths.empty()) widths = {0.4, 0.2, 0.1};
  for (double& w : widths) w = std::max(w, 6.0 * g.h);
  double hn = std::pow(g.h, n);

  // bump centers restricted so the support stays inside the common box
  std::array<double, 3> clo{}, chi{};
  for (int a = 0; a < n; ++a) {
    clo[a] = g.coord(common.lo[a]);
    chi[a] = g.coord(common.hi[a]);
  }
  double worst = 0;
  double pt[3];
  for (int k = 0; k < cfg.test_count; ++k) {
    double width = widths[k % widths.size()];
    r2_point(static_cast<uint64_t>(k), n, pt);
    std::array<double, 3> center{};
    bool fits = true;
    for (int a = 0; a < n; ++a) {
      double lo = clo[a] + width + 3 * g.h, hi = chi[a] - width - 3 * g.h;
      if (lo >= hi) fits = false;
      else center[a] = lo + pt[a] * (hi - lo);
    }
    if (!fits) continue;
    ScalarField eta = quartic_bump(g, center, width);
    double acc = 0, eta_h2 = 0;
    IndexBox inner = common.shrunk(1).intersect(eta.box().shrunk(1));
    inner.for_each([&](const Index& i) {
      double h2 = g.h * g.h;
      SymMat de(n);
      for (int a = 0; a < n; ++a) {
        Index ip = i, im = i;
        ip[a] += 1;
        im[a] -= 1;
        de.set(a, a, (eta.at(ip) - 2 * eta.at(i) + eta.at(im)) / h2);
        for (int b = a + 1; b < n; ++b) {
          Index pp = i, pm = i, mp = i, mm = i;
          pp[a] += 1; pp[b] += 1;
          pm[a] += 1; pm[b] -= 1;
          mp[a] -= 1; mp[b] += 1;
          mm[a] -= 1; mm[b] -= 1;
          de.set(a, b, (eta.at(pp) - eta.at(pm) - eta.at(mp) + eta.at(mm)) / (4 * h2));
        }
      }
      acc += frobenius_inner(resid.at(i), de) * hn;
      double n2 = de.frobenius_norm();
      eta_h2 += n2 * n2 * hn;
    });
    if (eta_h2 > 0) worst = std::max(worst, std::fabs(acc) / std::sqrt(eta_h2));
  }
  rep.residual = worst;
  return rep;
}

}  // namespace ddiv
