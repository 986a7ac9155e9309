#include "ddiv/var_solver.hpp"

#include <cmath>
#include <deque>
#include <sstream>

#include "ddiv/coefficients.hpp"
#include "ddiv/errors.hpp"
#include "ddiv/rng.hpp"

namespace ddiv {

namespace {

Index shifted(Index i, int axis, int by) {
  i[axis] += by;
  return i;
}

std::string node_name(const Grid& g, const Index& i) {
  std::ostringstream os;
  os << "(";
  for (int a = 0; a < g.n; ++a) os << (a ? "," : "") << g.coord(i[a]);
  os << ")";
  return os.str();
}

SymMat node_hessian(const ScalarField& u, const Index& i) {
  int n = u.grid().n;
  double h2 = u.grid().h * u.grid().h;
  SymMat m(n);
  for (int a = 0; a < n; ++a) {
    m.set(a, a, (u.at(shifted(i, a, 1)) - 2.0 * u.at(i) + u.at(shifted(i, a, -1))) / h2);
    for (int b = a + 1; b < n; ++b) {
      m.set(a, b, (u.at(shifted(shifted(i, a, 1), b, 1)) -
                   u.at(shifted(shifted(i, a, 1), b, -1)) -
                   u.at(shifted(shifted(i, a, -1), b, 1)) +
                   u.at(shifted(shifted(i, a, -1), b, -1))) /
                      (4.0 * h2));
    }
  }
  return m;
}

// flatten/unflatten unknowns over box-2
struct UnknownMap {
  IndexBox box;
  std::vector<Index> nodes;

  explicit UnknownMap(const Grid& g) : box(var_unknown_box(g)) {
    nodes.reserve(static_cast<size_t>(box.node_count()));
    box.for_each([&](const Index& i) { nodes.push_back(i); });
  }
};

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double sup_norm(const std::vector<double>& a) {
  double s = 0;
  for (double x : a) s = std::max(s, std::fabs(x));
  return s;
}

}  // namespace

IndexBox var_unknown_box(const Grid& g) { return IndexBox::full(g).shrunk(2); }
IndexBox var_quadrature_box(const Grid& g) { return IndexBox::full(g).shrunk(1); }

ScalarField clamped_init(const ScalarField& boundary_data, double interior_value) {
  ScalarField u = boundary_data;
  IndexBox inner = var_unknown_box(u.grid());
  inner.for_each([&](const Index& i) { u.at(i) = interior_value; });
  return u;
}

ScalarField continued_init(const ScalarField& boundary_data_fine,
                           const ScalarField& coarse_solution) {
  ScalarField u = refine_field(coarse_solution);
  if (!(u.grid() == boundary_data_fine.grid()))
    throw UsageError("continued_init: refined grid does not match the fine data grid");
  IndexBox inner = var_unknown_box(u.grid());
  ScalarField out = boundary_data_fine;
  inner.for_each([&](const Index& i) { out.at(i) = u.at(i); });
  return out;
}

double energy(const VarProblem& problem, const ScalarField& u) {
  const Grid& g = problem.grid;
  double hn = std::pow(g.h, g.n);
  double acc = 0;
  IndexBox quad = var_quadrature_box(g);
  quad.for_each([&](const Index& i) {
    SymMat m = node_hessian(u, i);
    SymMat w = m.square();
    if (!problem.f.domain_guard(w))
      throw DomainError(problem.f.name + ": domain guard failed at node " +
                        node_name(g, i));
    acc += problem.f.eval(w) * hn;
  });
  return acc;
}

namespace {

ScalarField grad_energy_impl(const VarProblem& problem, const ScalarField& u,
                             double* max_hessian_out) {
  const Grid& g = problem.grid;
  int n = g.n;
  double hn = std::pow(g.h, g.n);
  double h2 = g.h * g.h;

  IndexBox quad = var_quadrature_box(g);
  MatField p(g, quad);
  double max_hess = 0;
  quad.for_each([&](const Index& i) {
    SymMat m = node_hessian(u, i);
    max_hess = std::max(max_hess, m.frobenius_norm());
    SymMat w = m.square();
    if (!problem.f.domain_guard(w))
      throw DomainError(problem.f.name + ": domain guard failed at node " +
                        node_name(g, i));
    p.at(i) = sym_anticommutator(problem.f.grad(w), m);  // grad_F at the node
  });
  if (max_hessian_out) *max_hessian_out = max_hess;

  ScalarField out(g, IndexBox::full(g), 0.0);
  var_unknown_box(g).for_each([&](const Index& y) {
    double s = 0;
    for (int a = 0; a < n; ++a) {
      s += (p.at(shifted(y, a, 1))(a, a) - 2.0 * p.at(y)(a, a) +
            p.at(shifted(y, a, -1))(a, a)) /
           h2;
      for (int b = a + 1; b < n; ++b) {
        s += 2.0 *
             (p.at(shifted(shifted(y, a, 1), b, 1))(a, b) -
              p.at(shifted(shifted(y, a, 1), b, -1))(a, b) -
              p.at(shifted(shifted(y, a, -1), b, 1))(a, b) +
              p.at(shifted(shifted(y, a, -1), b, -1))(a, b)) /
             (4.0 * h2);
      }
    }
    out.at(y) = hn * s;
  });
  return out;
}

}  // namespace

ScalarField grad_energy(const VarProblem& problem, const ScalarField& u) {
  return grad_energy_impl(problem, u, nullptr);
}

MinimizeResult minimize(const VarProblem& problem, const MinimizeOptions& opts) {
  const Grid& g = problem.grid;
  UnknownMap um(g);
  size_t nu = um.nodes.size();

  // init must agree with the boundary data on the band
  IndexBox full = IndexBox::full(g);
  bool band_ok = true;
  full.for_each([&](const Index& i) {
    if (!um.box.contains(i) && problem.init.at(i) != problem.boundary_data.at(i))
      band_ok = false;
  });
  if (!band_ok) throw UsageError("minimize: init does not match boundary_data on the band");

  ScalarField u = problem.init;
  auto gather = [&](const ScalarField& field) {
    std::vector<double> v(nu);
    for (size_t k = 0; k < nu; ++k) v[k] = field.at(um.nodes[k]);
    return v;
  };
  auto scatter_add = [&](ScalarField& field, const std::vector<double>& v, double t) {
    for (size_t k = 0; k < nu; ++k) field.at(um.nodes[k]) += t * v[k];
  };

  double e = energy(problem, u);
  double mh = 0;
  ScalarField gf = grad_energy_impl(problem, u, &mh);
  std::vector<double> grad = gather(gf);

  if (opts.check_gradient) {
    // FD spot-check at 5 interior nodes
    RngStream rng(2718281828ULL, "grad_check");
    double scale = std::max(1.0, u.max_abs());
    for (int c = 0; c < 5 && nu > 0; ++c) {
      size_t k = rng.below(nu);
      double step = 1e-6 * scale;
      ScalarField up = u, dn = u;
      up.at(um.nodes[k]) += step;
      dn.at(um.nodes[k]) -= step;
      double fd = (energy(problem, up) - energy(problem, dn)) / (2 * step);
      if (std::fabs(fd - grad[k]) > 1e-6 * (1.0 + std::fabs(fd)) + 1e-9 * scale)
        throw SolverError("minimize: grad_energy failed its finite-difference spot check");
    }
  }

  MinimizeResult res{u, {}};
  SolveTrace& tr = res.trace;
  tr.energy.push_back(e);
  tr.grad_sup.push_back(sup_norm(grad));
  tr.max_hessian.push_back(mh);
  if (opts.certified_radius > 0 && tr.max_hessian.back() > opts.certified_radius) {
    tr.region_warning = true;
    tr.region_warning_radius = tr.max_hessian.back();
  }

  std::deque<std::vector<double>> s_hist, y_hist;
  std::vector<double> prev_ydiff, prev_step;

  long long it = 0;
  for (; it < opts.max_iter; ++it) {
    if (sup_norm(grad) <= opts.grad_tol) {
      tr.converged = true;
      break;
    }

    // search direction
    std::vector<double> dir(nu);
    bool used_quasi_newton = false;
    if (opts.use_lbfgs && !s_hist.empty()) {
      // two-loop recursion
      std::vector<double> q = grad;
      std::vector<double> alpha(s_hist.size());
      std::vector<double> rho(s_hist.size());
      for (size_t m = 0; m < s_hist.size(); ++m)
        rho[m] = 1.0 / dot(y_hist[m], s_hist[m]);
      for (size_t m = s_hist.size(); m-- > 0;) {
        alpha[m] = rho[m] * dot(s_hist[m], q);
        for (size_t k = 0; k < nu; ++k) q[k] -= alpha[m] * y_hist[m][k];
      }
      double gamma = dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
      for (double& x : q) x *= gamma;
      for (size_t m = 0; m < s_hist.size(); ++m) {
        double beta = rho[m] * dot(y_hist[m], q);
        for (size_t k = 0; k < nu; ++k) q[k] += (alpha[m] - beta) * s_hist[m][k];
      }
      for (size_t k = 0; k < nu; ++k) dir[k] = -q[k];
      used_quasi_newton = dot(dir, grad) < 0;
    }
    if (!used_quasi_newton) {
      // plain gradient direction with a Barzilai-Borwein step built in
      double bb = 1.0;
      if (!prev_step.empty()) {
        double sy = dot(prev_step, prev_ydiff);
        double ss = dot(prev_step, prev_step);
        if (sy > 1e-300) bb = ss / sy;
      } else {
        double gn = sup_norm(grad);
        bb = gn > 0 ? std::min(1.0, 1.0 / gn) : 1.0;
      }
      for (size_t k = 0; k < nu; ++k) dir[k] = -bb * grad[k];
    }

    double slope = dot(grad, dir);
    double t = 1.0;
    double scale = std::max(1.0, u.max_abs());
    ScalarField next = u;
    scatter_add(next, dir, t);
    double e_next;
    int backtracks = 0;
    for (;;) {
      bool ok = true;
      e_next = 0;
      try {
        e_next = energy(problem, next);
      } catch (const DomainError&) {
        ok = false;  // guard violation: treat as insufficient decrease
      }
      if (ok && e_next <= e + opts.armijo_c * t * slope) break;
      t *= opts.backtrack;
      ++backtracks;
      if (t * sup_norm(dir) < 1e-17 * scale || backtracks > 120) {
        std::ostringstream os;
        os << "minimize: line search failed at iteration " << it << " (energy " << e
           << ", grad sup " << sup_norm(grad) << ")";
        throw SolverError(os.str());
      }
      next = u;
      scatter_add(next, dir, t);
    }

    ScalarField gf_next = grad_energy_impl(problem, next, &mh);
    std::vector<double> grad_next = gather(gf_next);

    std::vector<double> step(nu), ydiff(nu);
    for (size_t k = 0; k < nu; ++k) {
      step[k] = t * dir[k];
      ydiff[k] = grad_next[k] - grad[k];
    }
    if (dot(step, ydiff) > 1e-300) {
      s_hist.push_back(step);
      y_hist.push_back(ydiff);
      if (static_cast<int>(s_hist.size()) > opts.lbfgs_memory) {
        s_hist.pop_front();
        y_hist.pop_front();
      }
    }
    prev_step = step;
    prev_ydiff = ydiff;

    u = next;
    e = e_next;
    grad = std::move(grad_next);

    tr.energy.push_back(e);
    tr.grad_sup.push_back(sup_norm(grad));
    tr.max_hessian.push_back(mh);
    if (opts.certified_radius > 0 && tr.max_hessian.back() > opts.certified_radius &&
        !tr.region_warning) {
      tr.region_warning = true;
      tr.region_warning_radius = tr.max_hessian.back();
    }
  }
  if (!tr.converged && sup_norm(grad) <= opts.grad_tol) tr.converged = true;
  tr.iterations = it;
  res.u = u;
  res.trace.final_weak_residual = weak_residual(problem, u);
  return res;
}

double weak_residual(const VarProblem& problem, const ScalarField& u,
                     const WeakResidualOptions& opts) {
  const Grid& g = problem.grid;
  double hn = std::pow(g.h, g.n);

  // node field W = a(D^2u) : D^2u over the quadrature box
  IndexBox quad = var_quadrature_box(g);
  MatField wfield(g, quad);
  quad.for_each([&](const Index& i) {
    SymMat m = node_hessian(u, i);
    wfield.at(i) = contract_ij(a_tensor(problem.f, m), m);
  });

  std::vector<double> widths = opts.widths;
  if (widths.empty()) widths = {0.4, 0.2, 0.1};
  double wmin = 6.0 * g.h;
  for (double& w : widths) w = std::max(w, wmin);

  double worst = 0;
  double pt[3];
  for (int k = 0; k < opts.test_count; ++k) {
    double width = widths[k % widths.size()];
    // center inside the safe box: support must stay within box-2; keep a
    // 3h margin so the bump vanishes identically near the band
    double cmax = 1.0 - width - 3.0 * g.h;
    if (cmax <= 0) continue;
    r2_point(static_cast<uint64_t>(k), g.n, pt);
    std::array<double, 3> center{};
    for (int a = 0; a < g.n; ++a) center[a] = (2.0 * pt[a] - 1.0) * cmax;
    ScalarField eta = quartic_bump(g, center, width);

    double acc = 0, eta_h2 = 0;
    quad.for_each([&](const Index& i) {
      SymMat de = node_hessian(eta, i);
      acc += frobenius_inner(wfield.at(i), de) * hn;
      double n2 = de.frobenius_norm();
      eta_h2 += n2 * n2 * hn;
    });
    if (eta_h2 <= 0) continue;
    worst = std::max(worst, std::fabs(acc) / std::sqrt(eta_h2));
  }
  return worst;
}

}  // namespace ddiv
