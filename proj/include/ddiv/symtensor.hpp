#ifndef DDIV_SYMTENSOR_HPP
#define DDIV_SYMTENSOR_HPP

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace ddiv {

// Symmetric n x n matrix, n <= 3 (n = 1 allowed for tests). Stores the
// full square for simple indexing; set() writes both mirror entries so the
// symmetry invariant holds by construction.
class SymMat {
 public:
  SymMat() : n_(0), e_{} {}
  explicit SymMat(int n);

  static SymMat zero(int n) { return SymMat(n); }
  static SymMat identity(int n);
  // builds from fn(i,j); result symmetrized as (fn(i,j)+fn(j,i))/2
  static SymMat from_entries(int n, const std::function<double(int, int)>& fn);

  int n() const { return n_; }
  double operator()(int i, int j) const { return e_[i][j]; }
  void set(int i, int j, double v);

  SymMat& operator+=(const SymMat& o);
  SymMat& operator-=(const SymMat& o);
  SymMat& operator*=(double c);

  double trace() const;
  double det() const;
  double frobenius_norm() const;
  double max_abs() const;

  // M*M (symmetric since M is)
  SymMat square() const;
  // inverse by cofactor formulas; throws DomainError if |det| below cutoff
  SymMat inverse() const;

  bool all_finite() const;

 private:
  int n_;
  std::array<std::array<double, 3>, 3> e_;
};

SymMat operator+(SymMat a, const SymMat& b);
SymMat operator-(SymMat a, const SymMat& b);
SymMat operator*(double c, SymMat a);

double frobenius_inner(const SymMat& a, const SymMat& b);
// A*B + B*A for symmetric A, B (the result is symmetric)
SymMat sym_anticommutator(const SymMat& a, const SymMat& b);
// (A*B*A) for symmetric A, B
SymMat sandwich(const SymMat& a, const SymMat& b);

// Vectorization of symmetric matrices: pairs (i<=j) in lexicographic
// order, off-diagonal components scaled by sqrt(2) so that the map is a
// linear isometry onto R^{n(n+1)/2} with the Frobenius norm.
int sym_vec_dim(int n);
std::vector<double> sym_to_vec(const SymMat& m);
SymMat vec_to_sym(int n, const std::vector<double>& v);

// Fourth-order coefficient tensor with the minor symmetries
// T[i][j][k][l] == T[j][i][k][l] == T[i][j][l][k], enforced by
// symmetrization on construction. Major symmetry (ij)<->(kl) is NOT
// enforced; it holds for some tensors (a) and not a priori for others (b).
class Tensor4 {
 public:
  Tensor4() : n_(0), e_{} {}
  explicit Tensor4(int n);  // zero tensor

  static Tensor4 zero(int n) { return Tensor4(n); }
  // identity pairing: sym(delta_ik delta_jl); apply_quadratic gives |xi|_F^2
  static Tensor4 identity_pairing(int n);
  // builds from fn(i,j,k,l), then symmetrizes in (i,j) and (k,l)
  static Tensor4 from_entries(int n, const std::function<double(int, int, int, int)>& fn);

  int n() const { return n_; }
  double operator()(int i, int j, int k, int l) const { return e_[idx(i, j, k, l)]; }

  Tensor4& operator+=(const Tensor4& o);
  Tensor4& operator-=(const Tensor4& o);
  Tensor4& operator*=(double c);

  double frobenius_norm() const;
  Tensor4 major_transpose() const;  // T[k][l][i][j]
  bool all_finite() const;

 private:
  size_t idx(int i, int j, int k, int l) const {
    return static_cast<size_t>(((i * n_ + j) * n_ + k) * n_ + l);
  }
  void set_raw(int i, int j, int k, int l, double v) { e_[idx(i, j, k, l)] = v; }
  void symmetrize_minor();

  int n_;
  std::array<double, 81> e_;
};

Tensor4 operator+(Tensor4 a, const Tensor4& b);
Tensor4 operator-(Tensor4 a, const Tensor4& b);
Tensor4 operator*(double c, Tensor4 a);

// sum_{ijkl} T[i][j][k][l] xi_ij xi_kl
double apply_quadratic(const Tensor4& t, const SymMat& xi);
// M_kl = sum_{ij} T[i][j][k][l] xi_ij
SymMat contract_ij(const Tensor4& t, const SymMat& xi);
// M_ij = sum_{kl} T[i][j][k][l] xi_kl
SymMat contract_kl(const Tensor4& t, const SymMat& xi);

// Quadratic form of the major-symmetrized tensor over vectorized symmetric
// matrices: vec(xi)^T Q vec(xi) == apply_quadratic(sym_major(T), xi).
// Dense N x N with N = n(n+1)/2 <= 6.
struct QuadForm {
  int dim = 0;
  std::array<std::array<double, 6>, 6> a{};
};
QuadForm t4_to_quadform(const Tensor4& t);

// Sixth-order tensor da[p][q][k][l][i][j] = d a^{pq,kl} / d u_ij with minor
// symmetries in (p,q), (k,l), (i,j) enforced on construction.
class Tensor6 {
 public:
  Tensor6() : n_(0) {}
  explicit Tensor6(int n);

  static Tensor6 from_entries(
      int n, const std::function<double(int, int, int, int, int, int)>& fn);

  int n() const { return n_; }
  double operator()(int p, int q, int k, int l, int i, int j) const {
    return e_[idx(p, q, k, l, i, j)];
  }

  Tensor6& operator+=(const Tensor6& o);
  Tensor6& operator*=(double c);
  bool all_finite() const;

  // R[i][j][k][l] = sum_{pq} T[p][q][k][l][i][j] m_pq
  Tensor4 contract_pq(const SymMat& m) const;

 private:
  size_t idx(int p, int q, int k, int l, int i, int j) const {
    return static_cast<size_t>(((((p * n_ + q) * n_ + k) * n_ + l) * n_ + i) * n_ + j);
  }

  int n_;
  std::vector<double> e_;
};

}  // namespace ddiv

#endif
