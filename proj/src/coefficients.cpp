#include "ddiv/coefficients.hpp"

#include <cmath>

#include "ddiv/errors.hpp"

namespace ddiv {

Quadrature01 gauss_legendre_01(int count) {
  if (count < 1) throw UsageError("gauss_legendre_01: count must be >= 1");
  Quadrature01 q;
  q.nodes.resize(count);
  q.weights.resize(count);
  // roots of P_count on [-1,1] by Newton from the Chebyshev-like guess
  for (int i = 0; i < count; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (count + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      if (count == 1) p1 = x;  // P_1
      for (int k = 2; k <= count; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double pn = count == 1 ? x : p1;
      double pm = count == 1 ? 1.0 : p0;
      pp = count * (x * pn - pm) / (x * x - 1.0);
      double dx = pn / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    // map [-1,1] -> [0,1]; store in increasing node order
    q.nodes[count - 1 - i] = 0.5 * (x + 1.0);
    q.weights[count - 1 - i] = 1.0 / ((1.0 - x * x) * pp * pp);
  }
  return q;
}

namespace {

SymMat guarded_w(const MatrixFunctional& f, const SymMat& m) {
  SymMat w = m.square();
  if (!f.domain_guard(w)) throw DomainError(f.name + ": domain guard failed");
  return w;
}

}  // namespace

Tensor4 a_tensor(const MatrixFunctional& f, const SymMat& m) {
  SymMat g = f.grad(guarded_w(f, m));
  int n = m.n();
  return Tensor4::from_entries(n, [&](int i, int j, int k, int l) {
    double v = 0;
    if (j == k) v += g(i, l);
    if (i == l) v += g(k, j);
    return v;
  });
}

double structure_residual(const MatrixFunctional& f, const SymMat& m) {
  SymMat lhs = grad_F(f, m);
  SymMat rhs = contract_ij(a_tensor(f, m), m);
  return (lhs - rhs).frobenius_norm();
}

Tensor6 da_tensor(const MatrixFunctional& f, const SymMat& m) {
  SymMat w = guarded_w(f, m);
  Tensor4 h = f.hess(w);
  int n = m.n();
  // K[a][b][i][j] = d G_ab / d u_ij through dw = M E + E M:
  //   K[a][b][i][j] = sum_r H[a][b][r][j] M_ri + sum_s H[a][b][i][s] M_sj
  auto kk = [&](int a, int b, int i, int j) {
    double s = 0;
    for (int r = 0; r < n; ++r) s += h(a, b, r, j) * m(r, i);
    for (int t = 0; t < n; ++t) s += h(a, b, i, t) * m(t, j);
    return s;
  };
  return Tensor6::from_entries(n, [&](int p, int q, int k, int l, int i, int j) {
    double v = 0;
    if (q == k) v += kk(p, l, i, j);
    if (p == l) v += kk(k, q, i, j);
    return v;
  });
}

Tensor4 b_tensor(const MatrixFunctional& f, const SymMat& m) {
  return a_tensor(f, m) + da_tensor(f, m).contract_pq(m);
}

Tensor4 btilde_tensor(const MatrixFunctional& f, const SymMat& m0, const SymMat& m1,
                      int quad_points) {
  if (m0.n() != m1.n()) throw UsageError("btilde_tensor: dimension mismatch");
  Quadrature01 q = gauss_legendre_01(quad_points);
  int n = m0.n();
  Tensor6 avg(n);
  for (int g = 0; g < quad_points; ++g) {
    double t = q.nodes[g];
    SymMat seg = t * m1 + (1.0 - t) * m0;
    // the guard is checked at each quadrature node via da_tensor
    Tensor6 d = da_tensor(f, seg);
    d *= q.weights[g];
    avg += d;
  }
  return a_tensor(f, m1) + avg.contract_pq(m0);
}

}  // namespace ddiv
