#include "ddiv/rng.hpp"

#include <cmath>

namespace ddiv {

namespace {

uint64_t splitmix64(uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t fnv1a(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

RngStream::RngStream(uint64_t seed, std::string_view stream_name) {
  uint64_t x = seed ^ fnv1a(stream_name);
  // decorrelate nearby seeds
  splitmix64(x);
  splitmix64(x);
  state_ = x;
}

uint64_t RngStream::next_u64() { return splitmix64(state_); }

double RngStream::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

uint64_t RngStream::below(uint64_t n) {
  // modulo bias is irrelevant at the sample counts used here
  return n == 0 ? 0 : next_u64() % n;
}

double RngStream::normal() {
  double u1 = uniform01();
  double u2 = uniform01();
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

void r2_point(uint64_t index, int dim, double* out) {
  // generalized golden ratios g_d: unique positive root of x^(d+1) = x + 1
  static const double g1 = 1.6180339887498948482;
  static const double g2 = 1.3247179572447460260;
  static const double g3 = 1.2207440846057594754;
  const double g = dim == 1 ? g1 : (dim == 2 ? g2 : g3);
  double a = 1.0;
  for (int d = 0; d < dim; ++d) {
    a /= g;
    double v = 0.5 + a * static_cast<double>(index + 1);
    out[d] = v - std::floor(v);
  }
}

}  // namespace ddiv
