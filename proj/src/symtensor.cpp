#include "ddiv/symtensor.hpp"

#include <cmath>

#include "ddiv/errors.hpp"

namespace ddiv {

namespace {
void check_dim(int n) {
  if (n < 1 || n > 3) throw UsageError("dimension must be in 1..3");
}
const double kSqrt2 = std::sqrt(2.0);
}  // namespace

SymMat::SymMat(int n) : n_(n), e_{} { check_dim(n); }

SymMat SymMat::identity(int n) {
  SymMat m(n);
  for (int i = 0; i < n; ++i) m.e_[i][i] = 1.0;
  return m;
}

SymMat SymMat::from_entries(int n, const std::function<double(int, int)>& fn) {
  SymMat m(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double v = 0.5 * (fn(i, j) + fn(j, i));
      m.e_[i][j] = v;
      m.e_[j][i] = v;
    }
  return m;
}

void SymMat::set(int i, int j, double v) {
  e_[i][j] = v;
  e_[j][i] = v;
}

SymMat& SymMat::operator+=(const SymMat& o) {
  if (o.n_ != n_) throw UsageError("SymMat dimension mismatch");
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) e_[i][j] += o.e_[i][j];
  return *this;
}

SymMat& SymMat::operator-=(const SymMat& o) {
  if (o.n_ != n_) throw UsageError("SymMat dimension mismatch");
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) e_[i][j] -= o.e_[i][j];
  return *this;
}

SymMat& SymMat::operator*=(double c) {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) e_[i][j] *= c;
  return *this;
}

double SymMat::trace() const {
  double t = 0;
  for (int i = 0; i < n_; ++i) t += e_[i][i];
  return t;
}

double SymMat::det() const {
  switch (n_) {
    case 1:
      return e_[0][0];
    case 2:
      return e_[0][0] * e_[1][1] - e_[0][1] * e_[1][0];
    default:
      return e_[0][0] * (e_[1][1] * e_[2][2] - e_[1][2] * e_[2][1]) -
             e_[0][1] * (e_[1][0] * e_[2][2] - e_[1][2] * e_[2][0]) +
             e_[0][2] * (e_[1][0] * e_[2][1] - e_[1][1] * e_[2][0]);
  }
}

double SymMat::frobenius_norm() const {
  double s = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) s += e_[i][j] * e_[i][j];
  return std::sqrt(s);
}

double SymMat::max_abs() const {
  double s = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) s = std::max(s, std::fabs(e_[i][j]));
  return s;
}

SymMat SymMat::square() const {
  SymMat r(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j) {
      double s = 0;
      for (int k = 0; k < n_; ++k) s += e_[i][k] * e_[k][j];
      r.set(i, j, s);
    }
  return r;
}

SymMat SymMat::inverse() const {
  double d = det();
  if (std::fabs(d) < 1e-300) throw DomainError("SymMat::inverse: singular matrix");
  SymMat r(n_);
  switch (n_) {
    case 1:
      r.set(0, 0, 1.0 / d);
      break;
    case 2:
      r.set(0, 0, e_[1][1] / d);
      r.set(1, 1, e_[0][0] / d);
      r.set(0, 1, -e_[0][1] / d);
      break;
    default: {
      auto cof = [&](int i, int j) {
        int i1 = (i + 1) % 3, i2 = (i + 2) % 3;
        int j1 = (j + 1) % 3, j2 = (j + 2) % 3;
        return e_[i1][j1] * e_[i2][j2] - e_[i1][j2] * e_[i2][j1];
      };
      for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) r.set(i, j, cof(j, i) / d);
      break;
    }
  }
  return r;
}

bool SymMat::all_finite() const {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (!std::isfinite(e_[i][j])) return false;
  return true;
}

SymMat operator+(SymMat a, const SymMat& b) { return a += b; }
SymMat operator-(SymMat a, const SymMat& b) { return a -= b; }
SymMat operator*(double c, SymMat a) { return a *= c; }

double frobenius_inner(const SymMat& a, const SymMat& b) {
  if (a.n() != b.n()) throw UsageError("SymMat dimension mismatch");
  double s = 0;
  for (int i = 0; i < a.n(); ++i)
    for (int j = 0; j < a.n(); ++j) s += a(i, j) * b(i, j);
  return s;
}

SymMat sym_anticommutator(const SymMat& a, const SymMat& b) {
  if (a.n() != b.n()) throw UsageError("SymMat dimension mismatch");
  int n = a.n();
  SymMat r(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0;
      for (int k = 0; k < n; ++k) s += a(i, k) * b(k, j) + b(i, k) * a(k, j);
      r.set(i, j, s);
    }
  return r;
}

SymMat sandwich(const SymMat& a, const SymMat& b) {
  if (a.n() != b.n()) throw UsageError("SymMat dimension mismatch");
  int n = a.n();
  SymMat r(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0;
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) s += a(i, k) * b(k, m) * a(m, j);
      r.set(i, j, s);
    }
  return r;
}

int sym_vec_dim(int n) { return n * (n + 1) / 2; }

std::vector<double> sym_to_vec(const SymMat& m) {
  std::vector<double> v;
  v.reserve(sym_vec_dim(m.n()));
  for (int i = 0; i < m.n(); ++i)
    for (int j = i; j < m.n(); ++j) v.push_back(i == j ? m(i, j) : kSqrt2 * m(i, j));
  return v;
}

SymMat vec_to_sym(int n, const std::vector<double>& v) {
  if (static_cast<int>(v.size()) != sym_vec_dim(n))
    throw UsageError("vec_to_sym: wrong component count");
  SymMat m(n);
  int a = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j, ++a) m.set(i, j, i == j ? v[a] : v[a] / kSqrt2);
  return m;
}

Tensor4::Tensor4(int n) : n_(n), e_{} { check_dim(n); }

Tensor4 Tensor4::identity_pairing(int n) {
  return from_entries(n, [](int i, int j, int k, int l) {
    return (i == k && j == l) ? 1.0 : 0.0;
  });
}

Tensor4 Tensor4::from_entries(int n, const std::function<double(int, int, int, int)>& fn) {
  Tensor4 t(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) t.set_raw(i, j, k, l, fn(i, j, k, l));
  t.symmetrize_minor();
  return t;
}

void Tensor4::symmetrize_minor() {
  // one value per equivalence class, written to all mirror slots so the
  // minor symmetries hold bit-exactly
  Tensor4 s(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        for (int l = k; l < n_; ++l) {
          double v = 0.25 * (e_[idx(i, j, k, l)] + e_[idx(j, i, k, l)] +
                             e_[idx(i, j, l, k)] + e_[idx(j, i, l, k)]);
          s.set_raw(i, j, k, l, v);
          s.set_raw(j, i, k, l, v);
          s.set_raw(i, j, l, k, v);
          s.set_raw(j, i, l, k, v);
        }
  e_ = s.e_;
}

Tensor4& Tensor4::operator+=(const Tensor4& o) {
  if (o.n_ != n_) throw UsageError("Tensor4 dimension mismatch");
  for (size_t a = 0; a < e_.size(); ++a) e_[a] += o.e_[a];
  return *this;
}

Tensor4& Tensor4::operator-=(const Tensor4& o) {
  if (o.n_ != n_) throw UsageError("Tensor4 dimension mismatch");
  for (size_t a = 0; a < e_.size(); ++a) e_[a] -= o.e_[a];
  return *this;
}

Tensor4& Tensor4::operator*=(double c) {
  for (double& x : e_) x *= c;
  return *this;
}

double Tensor4::frobenius_norm() const {
  double s = 0;
  int nn = n_ * n_ * n_ * n_;
  for (int a = 0; a < nn; ++a) s += e_[a] * e_[a];
  return std::sqrt(s);
}

Tensor4 Tensor4::major_transpose() const {
  Tensor4 t(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        for (int l = 0; l < n_; ++l) t.set_raw(i, j, k, l, e_[idx(k, l, i, j)]);
  return t;
}

bool Tensor4::all_finite() const {
  int nn = n_ * n_ * n_ * n_;
  for (int a = 0; a < nn; ++a)
    if (!std::isfinite(e_[a])) return false;
  return true;
}

Tensor4 operator+(Tensor4 a, const Tensor4& b) { return a += b; }
Tensor4 operator-(Tensor4 a, const Tensor4& b) { return a -= b; }
Tensor4 operator*(double c, Tensor4 a) { return a *= c; }

double apply_quadratic(const Tensor4& t, const SymMat& xi) {
  if (t.n() != xi.n()) throw UsageError("apply_quadratic: dimension mismatch");
  int n = t.n();
  double s = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += t(i, j, k, l) * xi(i, j) * xi(k, l);
  return s;
}

SymMat contract_ij(const Tensor4& t, const SymMat& xi) {
  if (t.n() != xi.n()) throw UsageError("contract_ij: dimension mismatch");
  int n = t.n();
  SymMat r(n);
  for (int k = 0; k < n; ++k)
    for (int l = k; l < n; ++l) {
      double s = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += t(i, j, k, l) * xi(i, j);
      r.set(k, l, s);  // minor symmetry of t makes the result symmetric
    }
  return r;
}

SymMat contract_kl(const Tensor4& t, const SymMat& xi) {
  if (t.n() != xi.n()) throw UsageError("contract_kl: dimension mismatch");
  int n = t.n();
  SymMat r(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += t(i, j, k, l) * xi(k, l);
      r.set(i, j, s);
    }
  return r;
}

QuadForm t4_to_quadform(const Tensor4& t) {
  int n = t.n();
  QuadForm q;
  q.dim = sym_vec_dim(n);
  // enumerate index pairs (i<=j) in the vectorization order
  std::array<std::pair<int, int>, 6> pairs;
  int c = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) pairs[c++] = {i, j};
  for (int a = 0; a < q.dim; ++a)
    for (int b = 0; b < q.dim; ++b) {
      auto [i, j] = pairs[a];
      auto [k, l] = pairs[b];
      double tsym = 0.5 * (t(i, j, k, l) + t(k, l, i, j));
      double w = (i == j ? 1.0 : kSqrt2) * (k == l ? 1.0 : kSqrt2);
      q.a[a][b] = w * tsym;
    }
  return q;
}

Tensor6::Tensor6(int n) : n_(n) {
  check_dim(n);
  e_.assign(static_cast<size_t>(n) * n * n * n * n * n, 0.0);
}

Tensor6 Tensor6::from_entries(
    int n, const std::function<double(int, int, int, int, int, int)>& fn) {
  Tensor6 raw(n);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              raw.e_[raw.idx(p, q, k, l, i, j)] = fn(p, q, k, l, i, j);
  // symmetrize all three index pairs; the value is computed once per
  // equivalence class and written to every mirror slot, so the symmetries
  // hold bit-exactly
  Tensor6 t(n);
  for (int p = 0; p < n; ++p)
    for (int q = p; q < n; ++q)
      for (int k = 0; k < n; ++k)
        for (int l = k; l < n; ++l)
          for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
              double s = 0;
              const int ps[2] = {p, q}, qs[2] = {q, p};
              const int ks[2] = {k, l}, ls[2] = {l, k};
              const int is[2] = {i, j}, js[2] = {j, i};
              for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                  for (int d = 0; d < 2; ++d)
                    s += raw.e_[raw.idx(ps[a], qs[a], ks[b], ls[b], is[d], js[d])];
              s /= 8.0;
              for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b)
                  for (int d = 0; d < 2; ++d)
                    t.e_[t.idx(ps[a], qs[a], ks[b], ls[b], is[d], js[d])] = s;
            }
  return t;
}

Tensor6& Tensor6::operator+=(const Tensor6& o) {
  if (o.n_ != n_) throw UsageError("Tensor6 dimension mismatch");
  for (size_t a = 0; a < e_.size(); ++a) e_[a] += o.e_[a];
  return *this;
}

Tensor6& Tensor6::operator*=(double c) {
  for (double& x : e_) x *= c;
  return *this;
}

bool Tensor6::all_finite() const {
  for (double x : e_)
    if (!std::isfinite(x)) return false;
  return true;
}

Tensor4 Tensor6::contract_pq(const SymMat& m) const {
  if (m.n() != n_) throw UsageError("Tensor6::contract_pq: dimension mismatch");
  return Tensor4::from_entries(n_, [&](int i, int j, int k, int l) {
    double s = 0;
    for (int p = 0; p < n_; ++p)
      for (int q = 0; q < n_; ++q) s += (*this)(p, q, k, l, i, j) * m(p, q);
    return s;
  });
}

}  // namespace ddiv
