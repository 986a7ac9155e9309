#include "ddiv/functionals.hpp"

#include <cmath>

#include "ddiv/errors.hpp"

namespace ddiv {

MatrixFunctional trace_quadratic_functional() {
  MatrixFunctional f;
  f.name = "trace_quadratic";
  f.eval = [](const SymMat& w) { return w.trace(); };
  f.grad = [](const SymMat& w) { return SymMat::identity(w.n()); };
  f.hess = [](const SymMat& w) { return Tensor4::zero(w.n()); };
  f.domain_guard = [](const SymMat&) { return true; };
  return f;
}

MatrixFunctional hamstat_functional() {
  MatrixFunctional f;
  f.name = "hamstat";
  auto guard = [](const SymMat& w) {
    SymMat a = SymMat::identity(w.n()) + w;
    return a.det() > 1e-12;
  };
  f.domain_guard = guard;
  f.eval = [guard](const SymMat& w) {
    if (!guard(w)) throw DomainError("hamstat: det(I+w) not positive");
    return std::sqrt((SymMat::identity(w.n()) + w).det());
  };
  // d sqrt(det A) = (1/2) sqrt(det A) tr(A^{-1} dA), A = I + w
  f.grad = [guard](const SymMat& w) {
    if (!guard(w)) throw DomainError("hamstat: det(I+w) not positive");
    SymMat a = SymMat::identity(w.n()) + w;
    double val = std::sqrt(a.det());
    return (0.5 * val) * a.inverse();
  };
  // second derivative of sqrt(det(I+w)) with B = (I+w)^{-1}:
  //   H[ijkl] = f/4 * B_ij B_kl - f/4 * (B_ik B_jl + B_il B_jk)
  f.hess = [guard](const SymMat& w) {
    if (!guard(w)) throw DomainError("hamstat: det(I+w) not positive");
    SymMat a = SymMat::identity(w.n()) + w;
    double val = std::sqrt(a.det());
    SymMat b = a.inverse();
    return Tensor4::from_entries(w.n(), [&](int i, int j, int k, int l) {
      return 0.25 * val * b(i, j) * b(k, l) -
             0.25 * val * (b(i, k) * b(j, l) + b(i, l) * b(j, k));
    });
  };
  return f;
}

MatrixFunctional user_functional(std::string name,
                                 std::function<double(const SymMat&)> eval,
                                 std::function<SymMat(const SymMat&)> grad,
                                 std::function<Tensor4(const SymMat&)> hess,
                                 std::function<bool(const SymMat&)> guard) {
  MatrixFunctional f;
  f.name = std::move(name);
  f.eval = std::move(eval);
  f.grad = std::move(grad);
  f.hess = std::move(hess);
  f.domain_guard = std::move(guard);
  return f;
}

MatrixFunctional functional_by_name(const std::string& name) {
  if (name == "trace_quadratic") return trace_quadratic_functional();
  if (name == "hamstat") return hamstat_functional();
  throw UsageError("unknown functional: " + name);
}

double eval_F(const MatrixFunctional& f, const SymMat& m) {
  SymMat w = m.square();
  if (!f.domain_guard(w)) throw DomainError(f.name + ": domain guard failed");
  return f.eval(w);
}

SymMat grad_F(const MatrixFunctional& f, const SymMat& m) {
  SymMat w = m.square();
  if (!f.domain_guard(w)) throw DomainError(f.name + ": domain guard failed");
  return sym_anticommutator(f.grad(w), m);
}

namespace {

// deterministic direction basis: the n(n+1)/2 coordinate directions
std::vector<SymMat> coordinate_directions(int n) {
  std::vector<SymMat> dirs;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      SymMat e(n);
      e.set(i, j, 1.0);
      dirs.push_back(e);
    }
  return dirs;
}

}  // namespace

double check_derivatives(const MatrixFunctional& f, const std::vector<SymMat>& samples,
                         double step) {
  if (step <= 0) throw UsageError("check_derivatives: step must be positive");
  double worst = 0;
  for (const SymMat& w : samples) {
    int n = w.n();
    auto dirs = coordinate_directions(n);
    // guard must hold with margin 2*step in every probe direction
    for (const SymMat& e : dirs) {
      for (double s : {2.0 * step, -2.0 * step}) {
        if (!f.domain_guard(w + s * e))
          throw DomainError(f.name + ": guard margin violated in check_derivatives");
      }
    }
    SymMat g = f.grad(w);
    Tensor4 h = f.hess(w);
    for (const SymMat& e : dirs) {
      double fd = (f.eval(w + step * e) - f.eval(w - step * e)) / (2.0 * step);
      double an = frobenius_inner(g, e);
      worst = std::max(worst, std::fabs(fd - an) / (1.0 + std::fabs(an)));
      SymMat gfd = (1.0 / (2.0 * step)) * (f.grad(w + step * e) - f.grad(w - step * e));
      SymMat han = contract_kl(h, e);
      worst = std::max(worst,
                       (gfd - han).frobenius_norm() / (1.0 + han.frobenius_norm()));
    }
  }
  return worst;
}

}  // namespace ddiv
