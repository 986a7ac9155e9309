#include "ddiv/ellipticity.hpp"

#include <cmath>
#include <limits>

#include "ddiv/coefficients.hpp"
#include "ddiv/errors.hpp"
#include "ddiv/rng.hpp"
#include "ddiv/smalleig.hpp"

namespace ddiv {

double legendre_constant(const Tensor4& t) { return min_eigenvalue(t4_to_quadform(t)); }

namespace {

struct Vec3 {
  std::array<double, 3> v{};
  int n = 0;
};

double dot(const Vec3& a, const Vec3& b) {
  double s = 0;
  for (int i = 0; i < a.n; ++i) s += a.v[i] * b.v[i];
  return s;
}

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

// Rayleigh value of the rank-one form at (p, q)
double rank_one_value(const Tensor4& ts, const Vec3& p, const Vec3& q) {
  int n = p.n;
  double num = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) num += ts(i, j, k, l) * p.v[i] * q.v[j] * p.v[k] * q.v[l];
  double pq = dot(p, q);
  double den = 0.5 * (dot(p, p) * dot(q, q) + pq * pq);
  return num / den;
}

// Exact minimization over p with q fixed: smallest generalized eigenvalue of
// N(q) p = lambda B(q) p, B(q) = (|q|^2 I + q q^T)/2.
Vec3 best_p_given_q(const Tensor4& ts, const Vec3& q) {
  int n = q.n;
  double qn2 = dot(q, q);
  // B^{-1/2} = (P_perp * sqrt(2) + P_q) / |q|
  auto apply_binvhalf = [&](const std::array<double, 3>& x) {
    std::array<double, 3> out{};
    double xq = 0;
    for (int i = 0; i < n; ++i) xq += x[i] * q.v[i];
    for (int i = 0; i < n; ++i) {
      double par = xq * q.v[i] / qn2;
      double perp = x[i] - par;
      out[i] = (std::sqrt(2.0) * perp + par) / std::sqrt(qn2);
    }
    return out;
  };
  // N(q)_{ik} = sum_{jl} ts[i][j][k][l] q_j q_l
  std::array<std::array<double, 3>, 3> nq{};
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      double s = 0;
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) s += ts(i, j, k, l) * q.v[j] * q.v[l];
      nq[i][k] = s;
    }
  // C = B^{-1/2} N B^{-1/2}, then the smallest eigenvector of C maps back
  QuadForm c;
  c.dim = n;
  for (int col = 0; col < n; ++col) {
    std::array<double, 3> e{};
    e[col] = 1.0;
    auto be = apply_binvhalf(e);
    std::array<double, 3> nbe{};
    for (int i = 0; i < n; ++i) {
      double s = 0;
      for (int k = 0; k < n; ++k) s += nq[i][k] * be[k];
      nbe[i] = s;
    }
    auto cbe = apply_binvhalf(nbe);
    for (int i = 0; i < n; ++i) c.a[i][col] = cbe[i];
  }
  // symmetrize round-off
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double v = 0.5 * (c.a[i][j] + c.a[j][i]);
      c.a[i][j] = v;
      c.a[j][i] = v;
    }
  EigenSys es = sym_eigensystem(c);
  std::array<double, 3> y{};
  for (int i = 0; i < n; ++i) y[i] = es.vectors.front()[i];
  auto p = apply_binvhalf(y);
  Vec3 out;
  out.n = n;
  out.v = p;
  double pn = norm(out);
  for (int i = 0; i < n; ++i) out.v[i] /= pn;
  return out;
}

}  // namespace

double rank_one_constant(const Tensor4& t, int restarts) {
  int n = t.n();
  Tensor4 ts = 0.5 * (t + t.major_transpose());

  std::vector<std::pair<Vec3, Vec3>> starts;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Vec3 p, q;
      p.n = q.n = n;
      p.v[i] = 1.0;
      q.v[j] = 1.0;
      starts.push_back({p, q});
    }
  RngStream rng(0x72616e6b6f6e65ULL, "rank_one_starts");
  for (int r = 0; r < restarts; ++r) {
    Vec3 p, q;
    p.n = q.n = n;
    for (int i = 0; i < n; ++i) {
      p.v[i] = rng.normal();
      q.v[i] = rng.normal();
    }
    double pn = norm(p), qn = norm(q);
    if (pn < 1e-12 || qn < 1e-12) continue;
    for (int i = 0; i < n; ++i) {
      p.v[i] /= pn;
      q.v[i] /= qn;
    }
    starts.push_back({p, q});
  }

  double best = std::numeric_limits<double>::infinity();
  for (auto& [p0, q0] : starts) {
    Vec3 p = p0, q = q0;
    double val = rank_one_value(ts, p, q);
    for (int it = 0; it < 200; ++it) {
      p = best_p_given_q(ts, q);
      // ts is minor- and major-symmetric, so the q-step is the same
      // contraction with the roles of the two vectors exchanged
      q = best_p_given_q(ts, p);
      double next = rank_one_value(ts, p, q);
      if (val - next <= 1e-14 * (1.0 + std::fabs(val))) {
        val = std::min(val, next);
        break;
      }
      val = next;
    }
    best = std::min(best, val);
  }
  return best;
}

std::vector<SymMat> HessianSampler::generate() const {
  if (mode == SamplerMode::ExplicitList) return explicit_list;
  std::vector<SymMat> out;
  out.reserve(count);
  RngStream rng(seed, "sampler");
  int dof = sym_vec_dim(n);
  auto draw_frobenius = [&](double r) {
    std::vector<double> v(dof);
    double s = 0;
    for (double& x : v) {
      x = rng.normal();
      s += x * x;
    }
    s = std::sqrt(s);
    if (s < 1e-300) s = 1.0;
    double scale = r * std::pow(rng.uniform01(), 1.0 / dof) / s;
    for (double& x : v) x *= scale;
    return vec_to_sym(n, v);
  };
  if (mode == SamplerMode::FrobeniusBall) {
    for (int i = 0; i < count; ++i) out.push_back(draw_frobenius(radius));
  } else {
    // uniform on the operator-norm ball by rejection from the enclosing
    // Frobenius ball of radius sqrt(n)*R
    double renc = std::sqrt(static_cast<double>(n)) * radius;
    while (static_cast<int>(out.size()) < count) {
      SymMat m = draw_frobenius(renc);
      if (operator_norm(m) <= radius) out.push_back(m);
    }
  }
  return out;
}

std::string HessianSampler::mode_name() const {
  switch (mode) {
    case SamplerMode::FrobeniusBall:
      return "frobenius_ball";
    case SamplerMode::OperatorBall:
      return "operator_ball";
    default:
      return "explicit_list";
  }
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::RegularPlus:
      return "regular_plus";
    case Verdict::RegularMinus:
      return "regular_minus";
    default:
      return "fails";
  }
}

EllipticityReport certify_region(const MatrixFunctional& f, const HessianSampler& sampler,
                                 double threshold) {
  EllipticityReport rep;
  rep.sampler_mode = sampler.mode_name();
  rep.sampler_radius = sampler.radius;
  rep.threshold = threshold;

  std::vector<SymMat> samples = sampler.generate();
  rep.sample_count = static_cast<int>(samples.size());
  if (samples.empty()) throw UsageError("certify_region: empty sample set");

  double min_a = std::numeric_limits<double>::infinity();
  double min_r1 = std::numeric_limits<double>::infinity();
  double min_bp = std::numeric_limits<double>::infinity();
  double min_bm = std::numeric_limits<double>::infinity();
  SymMat worst = samples.front();
  double worst_score = std::numeric_limits<double>::infinity();

  for (const SymMat& m : samples) {
    if (!f.domain_guard(m.square())) {
      rep.guard_failed = true;
      rep.guard_failure_sample = m;
      rep.worst_sample = m;
      rep.verdict = Verdict::Fails;
      return rep;
    }
    Tensor4 a = a_tensor(f, m);
    Tensor4 b = b_tensor(f, m);
    double la = legendre_constant(a);
    double lr = rank_one_constant(a);
    double lbp = legendre_constant(b);
    double lbm = legendre_constant(-1.0 * b);
    min_a = std::min(min_a, la);
    min_r1 = std::min(min_r1, lr);
    min_bp = std::min(min_bp, lbp);
    min_bm = std::min(min_bm, lbm);
    // binding quantity for the better-signed b-condition
    double score = std::min(la, std::max(lbp, lbm));
    if (score < worst_score) {
      worst_score = score;
      worst = m;
    }
  }

  rep.lambda_legendre = min_a;
  rep.lambda_rank_one = min_r1;
  rep.lambda_b_plus = min_bp;
  rep.lambda_b_minus = min_bm;
  rep.worst_sample = worst;
  if (min_a > threshold && min_bp > threshold)
    rep.verdict = Verdict::RegularPlus;
  else if (min_a > threshold && min_bm > threshold)
    rep.verdict = Verdict::RegularMinus;
  else
    rep.verdict = Verdict::Fails;
  return rep;
}

FrontierResult convexity_frontier(const MatrixFunctional& f, const SymMat& direction,
                                  double tol) {
  if (tol <= 0) throw UsageError("convexity_frontier: tol must be positive");
  double dn = direction.frobenius_norm();
  if (dn < 1e-300) throw UsageError("convexity_frontier: direction must be nonzero");
  SymMat dir = (1.0 / dn) * direction;

  auto lam = [&](double t) { return legendre_constant(b_tensor(f, t * dir)); };
  if (!f.domain_guard(SymMat::zero(direction.n())))
    throw DomainError("convexity_frontier: guard fails at 0");

  FrontierResult res;
  res.max_probe = 10.0;
  if (lam(res.max_probe) >= 0) {
    res.found = false;
    return res;
  }
  double lo = 0.0, hi = res.max_probe;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (lam(mid) >= 0)
      lo = mid;
    else
      hi = mid;
  }
  res.found = true;
  res.t_star = lo;
  return res;
}

}  // namespace ddiv
