#include "ddiv/fieldops.hpp"

#include <cmath>

#include "ddiv/errors.hpp"
#include "ddiv/rng.hpp"

namespace ddiv {

namespace {

Index shifted(Index i, int axis, int by) {
  i[axis] += by;
  return i;
}

double ball_dist2(const std::array<double, 3>& x, const BallRegion& ball, int n) {
  double s = 0;
  for (int a = 0; a < n; ++a) {
    double d = x[a] - ball.center[a];
    s += d * d;
  }
  return s;
}

double hn(const Grid& g) { return std::pow(g.h, g.n); }

}  // namespace

ScalarField diff_quotient(const ScalarField& u, int axis, int h_steps) {
  if (h_steps < 1) throw UsageError("diff_quotient: h_steps must be >= 1");
  if (axis < 0 || axis >= u.grid().n) throw UsageError("diff_quotient: bad axis");
  IndexBox box = u.box().shrunk_axis(axis, 0, h_steps);
  if (box.empty()) throw UsageError("diff_quotient: domain would be empty");
  ScalarField r(u.grid(), box);
  double denom = h_steps * u.grid().h;
  box.for_each([&](const Index& i) {
    r.at(i) = (u.at(shifted(i, axis, h_steps)) - u.at(i)) / denom;
  });
  return r;
}

ScalarField diff_quotient_backward(const ScalarField& u, int axis, int h_steps) {
  if (h_steps < 1) throw UsageError("diff_quotient_backward: h_steps must be >= 1");
  if (axis < 0 || axis >= u.grid().n) throw UsageError("diff_quotient_backward: bad axis");
  IndexBox box = u.box().shrunk_axis(axis, h_steps, 0);
  if (box.empty()) throw UsageError("diff_quotient_backward: domain would be empty");
  ScalarField r(u.grid(), box);
  double denom = h_steps * u.grid().h;
  box.for_each([&](const Index& i) {
    r.at(i) = (u.at(i) - u.at(shifted(i, axis, -h_steps))) / denom;
  });
  return r;
}

MatField diff_quotient(const MatField& f, int axis, int h_steps) {
  if (h_steps < 1) throw UsageError("diff_quotient: h_steps must be >= 1");
  IndexBox box = f.box().shrunk_axis(axis, 0, h_steps);
  if (box.empty()) throw UsageError("diff_quotient: domain would be empty");
  MatField r(f.grid(), box);
  double denom = h_steps * f.grid().h;
  box.for_each([&](const Index& i) {
    r.at(i) = (1.0 / denom) * (f.at(shifted(i, axis, h_steps)) - f.at(i));
  });
  return r;
}

MatField hessian(const ScalarField& u) {
  int n = u.grid().n;
  IndexBox box = u.box().shrunk(1);
  if (box.empty()) throw UsageError("hessian: domain would be empty");
  MatField r(u.grid(), box);
  double h2 = u.grid().h * u.grid().h;
  box.for_each([&](const Index& i) {
    SymMat m(n);
    for (int a = 0; a < n; ++a) {
      double d = (u.at(shifted(i, a, 1)) - 2.0 * u.at(i) + u.at(shifted(i, a, -1))) / h2;
      m.set(a, a, d);
      for (int b = a + 1; b < n; ++b) {
        Index pp = shifted(shifted(i, a, 1), b, 1);
        Index pm = shifted(shifted(i, a, 1), b, -1);
        Index mp = shifted(shifted(i, a, -1), b, 1);
        Index mm = shifted(shifted(i, a, -1), b, -1);
        m.set(a, b, (u.at(pp) - u.at(pm) - u.at(mp) + u.at(mm)) / (4.0 * h2));
      }
    }
    r.at(i) = m;
  });
  return r;
}

ThirdField third_derivatives(const ScalarField& u) {
  MatField h = hessian(u);
  int n = u.grid().n;
  IndexBox box = h.box().shrunk(1);
  if (box.empty()) throw UsageError("third_derivatives: domain would be empty");
  ThirdField r(u.grid(), box);
  double two_h = 2.0 * u.grid().h;
  // one canonical stencil per index multiset, written to every permutation
  // slot: the central derivative of a repeated-pair hessian entry when an
  // index repeats, D_c(cross_ab) otherwise. Permutation symmetry is then
  // exact rather than up to discretization error.
  box.for_each([&](const Index& i) {
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b)
        for (int c = b; c < n; ++c) {
          int deriv, p, q;
          if (a == b) {
            deriv = c;  // covers aaa and aac
            p = a;
            q = b;
          } else if (b == c) {
            deriv = a;  // abb
            p = b;
            q = c;
          } else {
            deriv = c;  // all distinct
            p = a;
            q = b;
          }
          double v =
              (h.at(shifted(i, deriv, 1))(p, q) - h.at(shifted(i, deriv, -1))(p, q)) /
              two_h;
          const int perms[6][3] = {{a, b, c}, {a, c, b}, {b, a, c},
                                   {b, c, a}, {c, a, b}, {c, b, a}};
          for (auto& pm : perms) r.at(i, pm[0], pm[1], pm[2]) = v;
        }
  });
  return r;
}

std::vector<Index> ball_nodes(const IndexBox& box, const Grid& g, const BallRegion& ball) {
  std::vector<Index> nodes;
  double r2 = ball.radius * ball.radius;
  box.for_each([&](const Index& i) {
    std::array<double, 3> x{};
    for (int a = 0; a < g.n; ++a) x[a] = g.coord(i[a]);
    if (ball_dist2(x, ball, g.n) <= r2 * (1.0 + 1e-14)) nodes.push_back(i);
  });
  return nodes;
}

SymMat ball_mean(const MatField& f, const BallRegion& ball) {
  auto nodes = ball_nodes(f.box(), f.grid(), ball);
  if (nodes.size() < 5) throw UsageError("ball_mean: ball contains fewer than 5 nodes");
  SymMat s(f.grid().n);
  for (const Index& i : nodes) s += f.at(i);
  s *= 1.0 / static_cast<double>(nodes.size());
  return s;
}

double ball_l2sq(const MatField& f, const BallRegion& ball) {
  auto nodes = ball_nodes(f.box(), f.grid(), ball);
  if (nodes.size() < 5) throw UsageError("ball_l2sq: ball contains fewer than 5 nodes");
  double s = 0;
  for (const Index& i : nodes) {
    double v = f.at(i).frobenius_norm();
    s += v * v;
  }
  return s * hn(f.grid());
}

double campanato(const MatField& f, const BallRegion& ball) {
  auto nodes = ball_nodes(f.box(), f.grid(), ball);
  if (nodes.size() < 5) throw UsageError("campanato: ball contains fewer than 5 nodes");
  SymMat mean(f.grid().n);
  for (const Index& i : nodes) mean += f.at(i);
  mean *= 1.0 / static_cast<double>(nodes.size());
  double s = 0;
  for (const Index& i : nodes) {
    double v = (f.at(i) - mean).frobenius_norm();
    s += v * v;
  }
  return s * hn(f.grid());
}

namespace {

// Shared pair-iteration: norm_diff(i, j) gives |F(x_i) - F(x_j)| for nodes
// of the region list. Deterministic: all pairs when cheap enough, else an
// R2 low-discrepancy subset of exactly pair_budget pairs.
double holder_impl(const Grid& g, const std::vector<Index>& nodes, double alpha,
                   long long pair_budget,
                   const std::function<double(size_t, size_t)>& norm_diff) {
  if (alpha <= 0 || alpha > 1) throw UsageError("holder_seminorm: need 0 < alpha <= 1");
  size_t cnt = nodes.size();
  if (cnt < 2) return 0;
  double min_sep = 2.0 * g.h * (1.0 - 1e-12);
  auto dist = [&](size_t a, size_t b) {
    double s = 0;
    for (int d = 0; d < g.n; ++d) {
      double dx = g.coord(nodes[a][d]) - g.coord(nodes[b][d]);
      s += dx * dx;
    }
    return std::sqrt(s);
  };
  double best = 0;
  auto consider = [&](size_t a, size_t b) {
    double r = dist(a, b);
    if (r < min_sep) return;
    double v = norm_diff(a, b) / std::pow(r, alpha);
    if (v > best) best = v;
  };
  long long total = static_cast<long long>(cnt) * (cnt - 1) / 2;
  if (total <= pair_budget) {
    for (size_t a = 0; a < cnt; ++a)
      for (size_t b = a + 1; b < cnt; ++b) consider(a, b);
  } else {
    double pt[2];
    for (long long k = 0; k < pair_budget; ++k) {
      r2_point(static_cast<uint64_t>(k), 2, pt);
      size_t a = static_cast<size_t>(pt[0] * cnt);
      size_t b = static_cast<size_t>(pt[1] * cnt);
      if (a >= cnt) a = cnt - 1;
      if (b >= cnt) b = cnt - 1;
      if (a != b) consider(a, b);
    }
  }
  return best;
}

}  // namespace

double holder_seminorm(const ScalarField& f, double alpha, const BallRegion& region,
                       long long pair_budget) {
  auto nodes = ball_nodes(f.box(), f.grid(), region);
  return holder_impl(f.grid(), nodes, alpha, pair_budget, [&](size_t a, size_t b) {
    return std::fabs(f.at(nodes[a]) - f.at(nodes[b]));
  });
}

double holder_seminorm(const MatField& f, double alpha, const BallRegion& region,
                       long long pair_budget) {
  auto nodes = ball_nodes(f.box(), f.grid(), region);
  return holder_impl(f.grid(), nodes, alpha, pair_budget, [&](size_t a, size_t b) {
    return (f.at(nodes[a]) - f.at(nodes[b])).frobenius_norm();
  });
}

double holder_seminorm(const ThirdField& f, double alpha, const BallRegion& region,
                       long long pair_budget) {
  auto nodes = ball_nodes(f.box(), f.grid(), region);
  int n = f.grid().n;
  return holder_impl(f.grid(), nodes, alpha, pair_budget, [&](size_t a, size_t b) {
    double s = 0;
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q)
        for (int r = 0; r < n; ++r) {
          double d = f.at(nodes[a], p, q, r) - f.at(nodes[b], p, q, r);
          s += d * d;
        }
    return std::sqrt(s);
  });
}

ScalarField quartic_bump(const Grid& g, const std::array<double, 3>& center, double width) {
  if (width <= 0) throw UsageError("quartic_bump: width must be positive");
  return ScalarField::sample(g, [&](const std::array<double, 3>& x) {
    double s2 = 0;
    for (int a = 0; a < g.n; ++a) {
      double d = x[a] - center[a];
      s2 += d * d;
    }
    double t = 1.0 - s2 / (width * width);
    return t > 0 ? t * t : 0.0;
  });
}

DecayProfile decay_fit(DecayProfile p) {
  if (p.radii.size() != p.values.size())
    throw UsageError("decay_fit: radii/values size mismatch");
  for (size_t k = 1; k < p.radii.size(); ++k)
    if (p.radii[k] <= p.radii[k - 1])
      throw UsageError("decay_fit: radii must be strictly increasing");
  std::vector<double> lx, ly;
  p.dropped_zeros = 0;
  for (size_t k = 0; k < p.radii.size(); ++k) {
    if (p.values[k] > 0) {
      lx.push_back(std::log(p.radii[k]));
      ly.push_back(std::log(p.values[k]));
    } else {
      ++p.dropped_zeros;
    }
  }
  if (lx.size() < 4) throw UsageError("decay_fit: fewer than 4 usable points");
  double mx = 0, my = 0;
  for (size_t k = 0; k < lx.size(); ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= lx.size();
  my /= lx.size();
  double sxx = 0, sxy = 0;
  for (size_t k = 0; k < lx.size(); ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
  }
  p.fitted_exponent = sxy / sxx;
  double intercept = my - p.fitted_exponent * mx;
  double rss = 0;
  for (size_t k = 0; k < lx.size(); ++k) {
    double e = ly[k] - (intercept + p.fitted_exponent * lx[k]);
    rss += e * e;
  }
  p.fit_residual = std::sqrt(rss / lx.size());
  return p;
}

std::vector<double> dyadic_radii(double r_max, int levels) {
  if (levels < 1 || r_max <= 0) throw UsageError("dyadic_radii: bad arguments");
  std::vector<double> r(levels);
  for (int k = 0; k < levels; ++k) r[k] = r_max * std::ldexp(1.0, -(levels - 1 - k));
  return r;
}

ScalarField refine_field(const ScalarField& coarse) {
  const Grid& gc = coarse.grid();
  if (coarse.box().node_count() !=
      IndexBox::full(gc).node_count())
    throw UsageError("refine_field: needs a full-grid field");
  Grid gf(gc.n, 2 * gc.m - 1);
  ScalarField fine(gf, IndexBox::full(gf));
  // separable linear interpolation; even indices coincide with coarse nodes
  fine.box().for_each([&](const Index& i) {
    double acc = 0;
    int n = gf.n;
    int corners = 1 << n;
    for (int c = 0; c < corners; ++c) {
      double w = 1.0;
      Index ic{};
      bool ok = true;
      for (int a = 0; a < n; ++a) {
        int base = i[a] / 2;
        bool odd = (i[a] % 2) != 0;
        int pick = (c >> a) & 1;
        if (!odd) {
          if (pick == 1) {
            ok = false;
            break;
          }
          ic[a] = base;
        } else {
          ic[a] = base + pick;
          w *= 0.5;
        }
      }
      if (!ok) continue;
      acc += w * coarse.at(ic);
    }
    fine.at(i) = acc;
  });
  return fine;
}

}  // namespace ddiv
