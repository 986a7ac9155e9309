#ifndef DDIV_RNG_HPP
#define DDIV_RNG_HPP

#include <cstdint>
#include <string_view>

namespace ddiv {

// Deterministic splittable generator. All randomness in the project flows
// from a single 64-bit seed through named streams, so adding a consumer
// never perturbs existing streams and results are reproducible across
// platforms (std::normal_distribution is implementation-defined, so we
// roll our own transforms on top of splitmix64).
class RngStream {
 public:
  RngStream(uint64_t seed, std::string_view stream_name);

  uint64_t next_u64();

  // uniform in [0, 1) with 53 random bits
  double uniform01();

  // uniform in [lo, hi)
  double uniform(double lo, double hi);

  // integer uniform in [0, n)
  uint64_t below(uint64_t n);

  // standard normal via Box-Muller (two uniforms per call, no caching)
  double normal();

 private:
  uint64_t state_;
};

// R2 low-discrepancy sequence in [0,1)^dim, dim <= 3. Deterministic,
// no state beyond the index.
void r2_point(uint64_t index, int dim, double* out);

}  // namespace ddiv

#endif
