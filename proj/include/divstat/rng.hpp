#pragma once

#include <cstdint>
#include <random>

namespace divstat {

// Seeded random stream with its own normal and gamma generators so that a
// given (seed, call sequence) yields identical draws on every platform; the
// standard library's distribution objects are implementation-defined.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), gen_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Standard normal, Box-Muller with one cached spare.
  double normal();

  // Gamma(shape, rate) by the Marsaglia-Tsang squeeze, with the standard
  // power-of-uniform boost for shape < 1.
  double gamma(double shape, double rate);

  // Sum of nu squared norms of standard algebra-valued normals (coefficient
  // variance 1/beta); equals Gamma(beta*nu/2, rate beta/2) for real nu > 0.
  double chi2beta(int beta, double nu);

  // Independent substream keyed by (this stream's seed, index).
  RngStream split(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace divstat
