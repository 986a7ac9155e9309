#include "ddiv/cc_solver.hpp"

#include <cmath>
#include <sstream>

#include "ddiv/coefficients.hpp"
#include "ddiv/ellipticity.hpp"
#include "ddiv/errors.hpp"

namespace ddiv {

namespace {

enum : int8_t { kOutside = 0, kUnknown = 1, kBand = 2 };

// Lattice geometry of a clamped ball: unknown set R, band = (R (+) 2) \ R
// in the Chebyshev metric (the 2-dilation covers every node the composed
// stencil can reach), quadrature set Q = R (+) 1.
struct DiscreteBall {
  Grid grid;
  IndexBox bb;                   // bounding box of R (+) 2
  std::vector<int8_t> role;      // over bb
  std::vector<int8_t> in_q;      // over bb
  std::vector<Index> unknowns;   // fixed lexicographic order
  std::vector<int> unknown_id;   // over bb, -1 if not an unknown

  bool is(const Index& i, int8_t r) const { return role[bb.flat(i)] == r; }
};

DiscreteBall make_discrete_ball(const Grid& grid, const IndexBox& data_box,
                                const BallRegion& ball) {
  DiscreteBall d;
  d.grid = grid;
  int n = grid.n;

  // bounding box of the ball plus the 2-node band
  IndexBox bb;
  bb.n = n;
  for (int a = 0; a < n; ++a) {
    int lo = static_cast<int>(std::floor((ball.center[a] - ball.radius + 1.0) / grid.h)) - 2;
    int hi = static_cast<int>(std::ceil((ball.center[a] + ball.radius + 1.0) / grid.h)) + 2;
    bb.lo[a] = lo;
    bb.hi[a] = hi;
    if (lo < data_box.lo[a] || hi > data_box.hi[a])
      throw UsageError("clamped ball plus band does not fit inside the data field");
  }
  d.bb = bb;
  d.role.assign(static_cast<size_t>(bb.node_count()), kOutside);
  d.in_q.assign(static_cast<size_t>(bb.node_count()), 0);
  d.unknown_id.assign(static_cast<size_t>(bb.node_count()), -1);

  double r2 = ball.radius * ball.radius * (1.0 + 1e-14);
  bb.for_each([&](const Index& i) {
    double s = 0;
    for (int a = 0; a < n; ++a) {
      double dx = grid.coord(i[a]) - ball.center[a];
      s += dx * dx;
    }
    if (s <= r2) d.role[bb.flat(i)] = kUnknown;
  });

  // band: Chebyshev 2-dilation of R, minus R; Q: 1-dilation of R
  auto dilate = [&](int radius, const std::function<void(const Index&)>& mark) {
    bb.for_each([&](const Index& i) {
      if (d.role[bb.flat(i)] != kUnknown) return;
      Index j{};
      for (int d0 = -radius; d0 <= radius; ++d0)
        for (int d1 = (n > 1 ? -radius : 0); d1 <= (n > 1 ? radius : 0); ++d1)
          for (int d2 = (n > 2 ? -radius : 0); d2 <= (n > 2 ? radius : 0); ++d2) {
            j = {i[0] + d0, n > 1 ? i[1] + d1 : 0, n > 2 ? i[2] + d2 : 0};
            if (bb.contains(j)) mark(j);
          }
    });
  };
  dilate(2, [&](const Index& j) {
    if (d.role[bb.flat(j)] == kOutside) d.role[bb.flat(j)] = kBand;
  });
  dilate(1, [&](const Index& j) { d.in_q[bb.flat(j)] = 1; });

  bb.for_each([&](const Index& i) {
    if (d.role[bb.flat(i)] == kUnknown) {
      d.unknown_id[bb.flat(i)] = static_cast<int>(d.unknowns.size());
      d.unknowns.push_back(i);
    }
  });
  if (d.unknowns.size() < 5)
    throw UsageError("clamped ball is too coarse (fewer than 5 unknowns)");
  return d;
}

Index shifted(Index i, int axis, int by) {
  i[axis] += by;
  return i;
}

// dense working field over the bounding box
struct BBField {
  const DiscreteBall* d;
  std::vector<double> v;
  explicit BBField(const DiscreteBall& db)
      : d(&db), v(static_cast<size_t>(db.bb.node_count()), 0.0) {}
  double at(const Index& i) const { return v[d->bb.flat(i)]; }
  double& at(const Index& i) { return v[d->bb.flat(i)]; }
};

SymMat stencil_hessian(const BBField& w, const Index& i, double h) {
  int n = w.d->grid.n;
  double h2 = h * h;
  SymMat m(n);
  for (int a = 0; a < n; ++a) {
    m.set(a, a, (w.at(shifted(i, a, 1)) - 2.0 * w.at(i) + w.at(shifted(i, a, -1))) / h2);
    for (int b = a + 1; b < n; ++b) {
      Index pp = shifted(shifted(i, a, 1), b, 1);
      Index pm = shifted(shifted(i, a, 1), b, -1);
      Index mp = shifted(shifted(i, a, -1), b, 1);
      Index mm = shifted(shifted(i, a, -1), b, -1);
      m.set(a, b, (w.at(pp) - w.at(pm) - w.at(mp) + w.at(mm)) / (4.0 * h2));
    }
  }
  return m;
}

// out(y) = h^n sum_kl D_kl(T_kl)(y) over unknowns, with T already holding
// contract_ij(c0, D^2 w) at every Q node (zero elsewhere; stencils at
// unknowns only read Q nodes).
void second_divergence(const DiscreteBall& d, const std::vector<SymMat>& t, double hn_scale,
                       std::vector<double>& out) {
  int n = d.grid.n;
  double h2 = d.grid.h * d.grid.h;
  for (size_t u = 0; u < d.unknowns.size(); ++u) {
    const Index& y = d.unknowns[u];
    double s = 0;
    for (int a = 0; a < n; ++a) {
      s += (t[d.bb.flat(shifted(y, a, 1))](a, a) - 2.0 * t[d.bb.flat(y)](a, a) +
            t[d.bb.flat(shifted(y, a, -1))](a, a)) /
           h2;
      for (int b = a + 1; b < n; ++b) {
        Index pp = shifted(shifted(y, a, 1), b, 1);
        Index pm = shifted(shifted(y, a, 1), b, -1);
        Index mp = shifted(shifted(y, a, -1), b, 1);
        Index mm = shifted(shifted(y, a, -1), b, -1);
        s += 2.0 *
             (t[d.bb.flat(pp)](a, b) - t[d.bb.flat(pm)](a, b) - t[d.bb.flat(mp)](a, b) +
              t[d.bb.flat(mm)](a, b)) /
             (4.0 * h2);
      }
    }
    out[u] = hn_scale * s;
  }
}

// K u (band frozen at zero) or the full operator on (u, band data)
void apply_operator(const DiscreteBall& d, const Tensor4& c0,
                    const std::vector<double>& u_values, const ScalarField* band_data,
                    std::vector<double>& out) {
  BBField w(d);
  d.bb.for_each([&](const Index& i) {
    size_t f = d.bb.flat(i);
    if (d.role[f] == kUnknown)
      w.v[f] = u_values[d.unknown_id[f]];
    else if (d.role[f] == kBand && band_data)
      w.v[f] = band_data->at(i);
  });
  std::vector<SymMat> t(static_cast<size_t>(d.bb.node_count()), SymMat(d.grid.n));
  d.bb.for_each([&](const Index& i) {
    size_t f = d.bb.flat(i);
    if (d.in_q[f]) t[f] = contract_ij(c0, stencil_hessian(w, i, d.grid.h));
  });
  second_divergence(d, t, std::pow(d.grid.h, d.grid.n), out);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// constant diagonal of K (every unknown has its full stencil inside Q)
double diag_entry(const DiscreteBall& d, const Tensor4& c0) {
  int n = d.grid.n;
  double h2 = d.grid.h * d.grid.h;
  double s = 0;
  Index zero{};
  auto stencil_at = [&](const Index& off) {
    SymMat m(n);
    for (int a = 0; a < n; ++a) {
      bool others_zero = true;
      for (int b = 0; b < n; ++b)
        if (b != a && off[b] != 0) others_zero = false;
      if (others_zero) {
        if (off[a] == 0) m.set(a, a, -2.0 / h2);
        if (off[a] == 1 || off[a] == -1) m.set(a, a, 1.0 / h2);
      }
      for (int b = a + 1; b < n; ++b) {
        bool rest_zero = true;
        for (int c = 0; c < n; ++c)
          if (c != a && c != b && off[c] != 0) rest_zero = false;
        if (rest_zero && (off[a] == 1 || off[a] == -1) && (off[b] == 1 || off[b] == -1))
          m.set(a, b, off[a] * off[b] / (4.0 * h2));
      }
    }
    return m;
  };
  Index off{};
  for (off[0] = -1; off[0] <= 1; ++off[0])
    for (off[1] = (n > 1 ? -1 : 0); off[1] <= (n > 1 ? 1 : 0); ++off[1])
      for (off[2] = (n > 2 ? -1 : 0); off[2] <= (n > 2 ? 1 : 0); ++off[2]) {
        SymMat sm = stencil_at(off);
        s += apply_quadratic(c0, sm);
      }
  (void)zero;
  return s * std::pow(d.grid.h, d.grid.n);
}

}  // namespace

CCSolution solve_cc(const CCProblem& problem, const CCSolveOptions& opts) {
  const Grid& grid = problem.boundary_data.grid();
  if (problem.c0.n() != grid.n) throw UsageError("solve_cc: tensor/grid dimension mismatch");
  double lam = legendre_constant(problem.c0);
  if (lam <= 0) {
    std::ostringstream os;
    os << "solve_cc: coefficient tensor is not Legendre-positive (lambda = " << lam << ")";
    throw SolverError(os.str());
  }

  DiscreteBall d =
      make_discrete_ball(grid, problem.boundary_data.box(), problem.region);
  size_t nu = d.unknowns.size();

  std::vector<double> rhs(nu, 0.0), zero(nu, 0.0);
  apply_operator(d, problem.c0, zero, &problem.boundary_data, rhs);
  for (double& x : rhs) x = -x;
  double rhs_norm = std::sqrt(dot(rhs, rhs));

  std::vector<double> u(nu, 0.0);
  if (opts.warm_start)
    for (size_t k = 0; k < nu; ++k) u[k] = problem.boundary_data.at(d.unknowns[k]);

  long long cap = opts.max_iter > 0
                      ? opts.max_iter
                      : static_cast<long long>(50.0 * std::sqrt(static_cast<double>(nu)));

  // Jacobi-preconditioned CG; the diagonal is constant over unknowns, so
  // this only rescales, but it keeps the solver in its documented form.
  double dg = diag_entry(d, problem.c0);
  double dinv = dg > 0 ? 1.0 / dg : 1.0;

  std::vector<double> r(nu), z(nu), p(nu), kp(nu);
  apply_operator(d, problem.c0, u, nullptr, kp);
  for (size_t k = 0; k < nu; ++k) r[k] = rhs[k] - kp[k];

  double floor_norm = std::max(rhs_norm, 1e-280);
  double rn = std::sqrt(dot(r, r));
  long long it = 0;
  if (rn > opts.tol * floor_norm) {
    for (size_t k = 0; k < nu; ++k) z[k] = dinv * r[k];
    p = z;
    double rz = dot(r, z);
    for (; it < cap; ++it) {
      apply_operator(d, problem.c0, p, nullptr, kp);
      double pkp = dot(p, kp);
      if (pkp <= 0) {
        std::ostringstream os;
        os << "solve_cc: energy form lost positivity during CG (p^T K p = " << pkp
           << "); the system is singular or ill-conditioned";
        throw SolverError(os.str());
      }
      double alpha = rz / pkp;
      for (size_t k = 0; k < nu; ++k) {
        u[k] += alpha * p[k];
        r[k] -= alpha * kp[k];
      }
      rn = std::sqrt(dot(r, r));
      if (rn <= opts.tol * floor_norm) {
        ++it;
        break;
      }
      for (size_t k = 0; k < nu; ++k) z[k] = dinv * r[k];
      double rz_next = dot(r, z);
      double beta = rz_next / rz;
      rz = rz_next;
      for (size_t k = 0; k < nu; ++k) p[k] = z[k] + beta * p[k];
    }
    if (rn > opts.tol * floor_norm) {
      std::ostringstream os;
      os << "solve_cc: no convergence within " << cap << " iterations (relative residual "
         << rn / floor_norm << "); best iterate discarded";
      throw SolverError(os.str());
    }
  }

  CCSolution sol;
  sol.w = problem.boundary_data;
  for (size_t k = 0; k < nu; ++k) sol.w.at(d.unknowns[k]) = u[k];
  sol.residual_norm = rhs_norm > 0 ? rn / rhs_norm : rn;
  sol.iterations = it;
  sol.unknown_count = static_cast<int>(nu);
  return sol;
}

double cc_weak_residual(const CCProblem& problem, const ScalarField& w,
                        const ScalarField& eta) {
  const Grid& grid = problem.boundary_data.grid();
  DiscreteBall d = make_discrete_ball(grid, problem.boundary_data.box(), problem.region);
  double hn = std::pow(grid.h, grid.n);
  double acc = 0, eta_h2 = 0;
  BBField wf(d), ef(d);
  d.bb.for_each([&](const Index& i) {
    wf.at(i) = w.box().contains(i) ? w.at(i) : 0.0;
    ef.at(i) = eta.box().contains(i) ? eta.at(i) : 0.0;
  });
  d.bb.for_each([&](const Index& i) {
    if (!d.in_q[d.bb.flat(i)]) return;
    SymMat dw = stencil_hessian(wf, i, grid.h);
    SymMat de = stencil_hessian(ef, i, grid.h);
    acc += frobenius_inner(contract_ij(problem.c0, dw), de) * hn;
    double n2 = de.frobenius_norm();
    eta_h2 += n2 * n2 * hn;
  });
  double norm = std::sqrt(eta_h2);
  return norm > 0 ? std::fabs(acc) / norm : 0.0;
}

double cc_energy(const CCProblem& problem, const ScalarField& w) {
  const Grid& grid = problem.boundary_data.grid();
  DiscreteBall d = make_discrete_ball(grid, problem.boundary_data.box(), problem.region);
  double hn = std::pow(grid.h, grid.n);
  BBField wf(d);
  d.bb.for_each([&](const Index& i) {
    wf.at(i) = w.box().contains(i) ? w.at(i) : 0.0;
  });
  double acc = 0;
  d.bb.for_each([&](const Index& i) {
    if (!d.in_q[d.bb.flat(i)]) return;
    SymMat dw = stencil_hessian(wf, i, grid.h);
    acc += apply_quadratic(problem.c0, dw) * hn;
  });
  return acc;
}

DecayExperiment decay_experiment(const Tensor4& c0, const ScalarField& boundary_data,
                                 const BallRegion& region, const std::vector<double>& radii,
                                 const CCSolveOptions& opts) {
  if (radii.empty()) throw UsageError("decay_experiment: no radii");
  for (double r : radii)
    if (r > region.radius)
      throw UsageError("decay_experiment: radius exceeds the solve region");

  CCProblem prob{c0, region, boundary_data};
  DecayExperiment ex;
  ex.solution = solve_cc(prob, opts);

  MatField d2w = hessian(ex.solution.w);
  ex.energy.radii = radii;
  ex.oscillation.radii = radii;
  for (double rho : radii) {
    BallRegion ball{region.center, rho};
    ex.energy.values.push_back(ball_l2sq(d2w, ball));
    ex.oscillation.values.push_back(campanato(d2w, ball));
  }
  ex.energy = decay_fit(ex.energy);
  ex.oscillation = decay_fit(ex.oscillation);
  return ex;
}

FreezeSplit freeze_split(const ScalarField& u, const MatrixFunctional& f, int axis,
                         const BallRegion& ball, const CCSolveOptions& opts) {
  const Grid& grid = u.grid();
  if (axis < 0 || axis >= grid.n) throw UsageError("freeze_split: bad axis");

  FreezeSplit out;
  out.g = diff_quotient(u, axis, 1);
  MatField d2u = hessian(u);

  // coefficient field c(x) = btilde(D^2u(x), D^2u(x + h e_axis)) on the ball
  auto nodes = ball_nodes(out.g.box().shrunk(1), grid, ball);
  if (nodes.size() < 5) throw UsageError("freeze_split: ball too coarse");

  // center: the node nearest to the ball center
  Index center{};
  for (int a = 0; a < grid.n; ++a)
    center[a] = static_cast<int>(std::lround((ball.center[a] + 1.0) / grid.h));
  if (!d2u.box().contains(center) || !d2u.box().contains(shifted(center, axis, 1)))
    throw UsageError("freeze_split: ball center outside the Hessian domain");

  auto coeff_at = [&](const Index& i) {
    return btilde_tensor(f, d2u.at(i), d2u.at(shifted(i, axis, 1)));
  };
  Tensor4 c_center = coeff_at(center);
  out.lambda = legendre_constant(c_center);
  if (out.lambda <= 0) {
    std::ostringstream os;
    os << "freeze_split: frozen coefficients not elliptic at the center Hessian (";
    for (int i = 0; i < grid.n; ++i)
      for (int j = 0; j < grid.n; ++j) os << d2u.at(center)(i, j) << (i + j < 2 * grid.n - 2 ? " " : "");
    os << "), lambda = " << out.lambda;
    throw DomainError(os.str());
  }

  out.zeta = 0;
  for (const Index& i : nodes) {
    if (!d2u.box().contains(shifted(i, axis, 1)) || !d2u.box().contains(i)) continue;
    out.zeta = std::max(out.zeta, (coeff_at(i) - c_center).frobenius_norm());
  }

  CCProblem prob{c_center, ball, out.g};
  CCSolution sol = solve_cc(prob, opts);
  out.w = sol.w;

  out.v = ScalarField(grid, out.g.box());
  out.g.box().for_each([&](const Index& i) { out.v.at(i) = out.g.at(i) - out.w.at(i); });

  MatField d2g = hessian(out.g);
  MatField d2v = hessian(out.v);
  out.d2g_l2sq = ball_l2sq(d2g, ball);
  out.d2v_l2sq = ball_l2sq(d2v, ball);

  double denom = out.zeta * out.zeta * out.d2g_l2sq;
  double numer = out.lambda * out.lambda * out.d2v_l2sq;
  double scale = out.lambda * out.lambda * out.d2g_l2sq;
  // vanishing denominator: constant coefficients or quadratic data; the
  // correction is zero to solver tolerance and the bound holds vacuously
  out.bound_ratio = denom > 1e-28 * std::max(1.0, scale) ? numer / denom : 0.0;
  return out;
}

}  // namespace ddiv
