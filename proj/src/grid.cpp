#include "ddiv/grid.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>

#include "ddiv/errors.hpp"

namespace ddiv {

Grid::Grid(int n_, int m_) : n(n_), m(m_) {
  if (n < 1 || n > 3) throw UsageError("Grid: n must be in 1..3");
  if (m < 9) throw UsageError("Grid: need at least 9 nodes per axis");
  h = 2.0 / (m - 1);
}

IndexBox IndexBox::full(const Grid& g) {
  IndexBox b;
  b.n = g.n;
  for (int a = 0; a < g.n; ++a) {
    b.lo[a] = 0;
    b.hi[a] = g.m - 1;
  }
  return b;
}

bool IndexBox::empty() const {
  for (int a = 0; a < n; ++a)
    if (lo[a] > hi[a]) return true;
  return n == 0;
}

bool IndexBox::contains(const Index& i) const {
  for (int a = 0; a < n; ++a)
    if (i[a] < lo[a] || i[a] > hi[a]) return false;
  return true;
}

long long IndexBox::node_count() const {
  if (empty()) return 0;
  long long c = 1;
  for (int a = 0; a < n; ++a) c *= extent(a);
  return c;
}

IndexBox IndexBox::shrunk(int margin) const {
  IndexBox b = *this;
  for (int a = 0; a < n; ++a) {
    b.lo[a] += margin;
    b.hi[a] -= margin;
  }
  return b;
}

IndexBox IndexBox::shrunk_axis(int axis, int at_lo, int at_hi) const {
  IndexBox b = *this;
  b.lo[axis] += at_lo;
  b.hi[axis] -= at_hi;
  return b;
}

IndexBox IndexBox::intersect(const IndexBox& o) const {
  IndexBox b = *this;
  for (int a = 0; a < n; ++a) {
    b.lo[a] = std::max(lo[a], o.lo[a]);
    b.hi[a] = std::min(hi[a], o.hi[a]);
  }
  return b;
}

size_t IndexBox::flat(const Index& i) const {
  size_t f = 0;
  for (int a = 0; a < n; ++a) f = f * extent(a) + static_cast<size_t>(i[a] - lo[a]);
  return f;
}

void IndexBox::for_each(const std::function<void(const Index&)>& fn) const {
  if (empty()) return;
  Index i{};
  if (n == 1) {
    for (i[0] = lo[0]; i[0] <= hi[0]; ++i[0]) fn(i);
  } else if (n == 2) {
    for (i[0] = lo[0]; i[0] <= hi[0]; ++i[0])
      for (i[1] = lo[1]; i[1] <= hi[1]; ++i[1]) fn(i);
  } else {
    for (i[0] = lo[0]; i[0] <= hi[0]; ++i[0])
      for (i[1] = lo[1]; i[1] <= hi[1]; ++i[1])
        for (i[2] = lo[2]; i[2] <= hi[2]; ++i[2]) fn(i);
  }
}

ScalarField::ScalarField(const Grid& g, const IndexBox& box, double fill)
    : grid_(g), box_(box), v_(static_cast<size_t>(box.node_count()), fill) {
  if (box.empty()) throw UsageError("ScalarField: empty box");
}

ScalarField ScalarField::sample(const Grid& g,
                                const std::function<double(const std::array<double, 3>&)>& fn) {
  ScalarField f(g, IndexBox::full(g));
  f.box_.for_each([&](const Index& i) { f.at(i) = fn(f.coords(i)); });
  return f;
}

std::array<double, 3> ScalarField::coords(const Index& i) const {
  std::array<double, 3> x{};
  for (int a = 0; a < grid_.n; ++a) x[a] = grid_.coord(i[a]);
  return x;
}

double ScalarField::max_abs() const {
  double s = 0;
  for (double x : v_) s = std::max(s, std::fabs(x));
  return s;
}

bool ScalarField::all_finite() const {
  for (double x : v_)
    if (!std::isfinite(x)) return false;
  return true;
}

MatField::MatField(const Grid& g, const IndexBox& box)
    : grid_(g), box_(box), v_(static_cast<size_t>(box.node_count()), SymMat(g.n)) {
  if (box.empty()) throw UsageError("MatField: empty box");
}

ThirdField::ThirdField(const Grid& g, const IndexBox& box)
    : grid_(g),
      box_(box),
      comps_(g.n * g.n * g.n),
      v_(static_cast<size_t>(box.node_count()) * comps_, 0.0) {
  if (box.empty()) throw UsageError("ThirdField: empty box");
}

double ThirdField::node_norm(const Index& i) const {
  double s = 0;
  size_t base = box_.flat(i) * comps_;
  for (int c = 0; c < comps_; ++c) s += v_[base + c] * v_[base + c];
  return std::sqrt(s);
}

void write_field_binary(const ScalarField& f, const std::string& path) {
  FILE* fp = std::fopen(path.c_str(), "wb");
  if (!fp) throw UsageError("cannot open for writing: " + path);
  int32_t n = f.grid().n, m = f.grid().m;
  double h = f.grid().h;
  std::fwrite(&n, sizeof n, 1, fp);
  std::fwrite(&m, sizeof m, 1, fp);
  std::fwrite(&h, sizeof h, 1, fp);
  // embed onto the full lattice, zero outside the field's box
  IndexBox full = IndexBox::full(f.grid());
  std::vector<double> dense(static_cast<size_t>(full.node_count()), 0.0);
  f.box().for_each([&](const Index& i) { dense[full.flat(i)] = f.at(i); });
  std::fwrite(dense.data(), sizeof(double), dense.size(), fp);
  std::fclose(fp);
}

ScalarField read_field_binary(const std::string& path) {
  FILE* fp = std::fopen(path.c_str(), "rb");
  if (!fp) throw UsageError("cannot open for reading: " + path);
  int32_t n = 0, m = 0;
  double h = 0;
  if (std::fread(&n, sizeof n, 1, fp) != 1 || std::fread(&m, sizeof m, 1, fp) != 1 ||
      std::fread(&h, sizeof h, 1, fp) != 1) {
    std::fclose(fp);
    throw UsageError("truncated field file: " + path);
  }
  Grid g(n, m);
  ScalarField f(g, IndexBox::full(g));
  size_t want = f.raw().size();
  size_t got = std::fread(f.raw().data(), sizeof(double), want, fp);
  std::fclose(fp);
  if (got != want) throw UsageError("truncated field file: " + path);
  return f;
}

void write_field_csv(const ScalarField& f, const std::string& path) {
  FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw UsageError("cannot open for writing: " + path);
  int n = f.grid().n;
  for (int a = 0; a < n; ++a) std::fprintf(fp, "x%d,", a + 1);
  std::fprintf(fp, "value\n");
  f.box().for_each([&](const Index& i) {
    auto x = f.coords(i);
    for (int a = 0; a < n; ++a) std::fprintf(fp, "%.17g,", x[a]);
    std::fprintf(fp, "%.17g\n", f.at(i));
  });
  std::fclose(fp);
}

}  // namespace ddiv
