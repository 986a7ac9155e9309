#ifndef DDIV_GRID_HPP
#define DDIV_GRID_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ddiv/symtensor.hpp"

namespace ddiv {

// Uniform lattice over [-1,1]^n with m nodes per axis, h = 2/(m-1).
struct Grid {
  int n = 2;
  int m = 0;
  double h = 0;

  Grid() = default;
  Grid(int n_, int m_);

  double coord(int i) const { return -1.0 + h * i; }
  bool operator==(const Grid& o) const { return n == o.n && m == o.m; }
};

using Index = std::array<int, 3>;

// Inclusive index box; fields live on boxes so that operations that shrink
// the domain (difference quotients, stencils) stay cheap to track.
struct IndexBox {
  int n = 0;
  Index lo{};
  Index hi{};

  static IndexBox full(const Grid& g);

  bool empty() const;
  bool contains(const Index& i) const;
  long long node_count() const;
  int extent(int axis) const { return hi[axis] - lo[axis] + 1; }
  // shrink by the given node count on every side of every axis
  IndexBox shrunk(int margin) const;
  IndexBox shrunk_axis(int axis, int at_lo, int at_hi) const;
  IndexBox intersect(const IndexBox& o) const;

  size_t flat(const Index& i) const;
  void for_each(const std::function<void(const Index&)>& fn) const;
};

class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(const Grid& g, const IndexBox& box, double fill = 0.0);
  // full-grid field from an expression of the node coordinates
  static ScalarField sample(const Grid& g,
                            const std::function<double(const std::array<double, 3>&)>& fn);

  const Grid& grid() const { return grid_; }
  const IndexBox& box() const { return box_; }
  double at(const Index& i) const { return v_[box_.flat(i)]; }
  double& at(const Index& i) { return v_[box_.flat(i)]; }
  const std::vector<double>& raw() const { return v_; }
  std::vector<double>& raw() { return v_; }

  std::array<double, 3> coords(const Index& i) const;
  double max_abs() const;
  bool all_finite() const;

 private:
  Grid grid_;
  IndexBox box_;
  std::vector<double> v_;
};

class MatField {
 public:
  MatField() = default;
  MatField(const Grid& g, const IndexBox& box);

  const Grid& grid() const { return grid_; }
  const IndexBox& box() const { return box_; }
  const SymMat& at(const Index& i) const { return v_[box_.flat(i)]; }
  SymMat& at(const Index& i) { return v_[box_.flat(i)]; }

 private:
  Grid grid_;
  IndexBox box_;
  std::vector<SymMat> v_;
};

// n^3 components per node (third derivatives u_ijk)
class ThirdField {
 public:
  ThirdField() = default;
  ThirdField(const Grid& g, const IndexBox& box);

  const Grid& grid() const { return grid_; }
  const IndexBox& box() const { return box_; }
  double at(const Index& i, int a, int b, int c) const {
    return v_[box_.flat(i) * comps_ + (a * grid_.n + b) * grid_.n + c];
  }
  double& at(const Index& i, int a, int b, int c) {
    return v_[box_.flat(i) * comps_ + (a * grid_.n + b) * grid_.n + c];
  }
  int comps() const { return comps_; }
  // Euclidean norm over the n^3 components at a node
  double node_norm(const Index& i) const;

 private:
  Grid grid_;
  IndexBox box_;
  int comps_ = 0;
  std::vector<double> v_;
};

struct BallRegion {
  std::array<double, 3> center{};
  double radius = 0;
};

// Binary field format: int32 n, int32 m, float64 h, then the full-grid
// node values in row-major order. Fields on shrunken boxes are embedded
// with zeros outside.
void write_field_binary(const ScalarField& f, const std::string& path);
ScalarField read_field_binary(const std::string& path);
void write_field_csv(const ScalarField& f, const std::string& path);

}  // namespace ddiv

#endif
