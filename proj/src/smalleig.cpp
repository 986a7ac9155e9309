#include "ddiv/smalleig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ddiv {

namespace {

// Cyclic Jacobi; diagonalizes a in place, accumulates rotations into v
// (columns are eigenvectors of the input).
void jacobi(std::array<std::array<double, 6>, 6>& a, int n,
            std::array<std::array<double, 6>, 6>& v) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) v[i][j] = (i == j) ? 1.0 : 0.0;

  double scale = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::fabs(a[i][j]));
  if (scale == 0) return;

  const double tol = 1e-15 * scale;
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off = std::max(off, std::fabs(a[p][q]));
    if (off <= tol) break;

    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        double apq = a[p][q];
        if (std::fabs(apq) <= tol) continue;
        double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
  }
}

EigenSys eigensystem(std::array<std::array<double, 6>, 6> a, int n) {
  std::array<std::array<double, 6>, 6> v{};
  jacobi(a, n, v);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int x, int y) { return a[x][x] < a[y][y]; });
  EigenSys es;
  es.values.resize(n);
  es.vectors.resize(n);
  for (int k = 0; k < n; ++k) {
    es.values[k] = a[order[k]][order[k]];
    std::array<double, 6> col{};
    for (int i = 0; i < n; ++i) col[i] = v[i][order[k]];
    es.vectors[k] = col;
  }
  return es;
}

}  // namespace

std::vector<double> sym_eigenvalues(const QuadForm& q) {
  return eigensystem(q.a, q.dim).values;
}

EigenSys sym_eigensystem(const QuadForm& q) { return eigensystem(q.a, q.dim); }

double min_eigenvalue(const QuadForm& q) { return sym_eigenvalues(q).front(); }
double max_eigenvalue(const QuadForm& q) { return sym_eigenvalues(q).back(); }

std::vector<double> sym_eigenvalues(const SymMat& m) {
  std::array<std::array<double, 6>, 6> a{};
  for (int i = 0; i < m.n(); ++i)
    for (int j = 0; j < m.n(); ++j) a[i][j] = m(i, j);
  return eigensystem(a, m.n()).values;
}

double operator_norm(const SymMat& m) {
  auto ev = sym_eigenvalues(m);
  return std::max(std::fabs(ev.front()), std::fabs(ev.back()));
}

}  // namespace ddiv
