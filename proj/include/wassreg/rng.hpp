#pragma once

#include <cstdint>

namespace wassreg {

// Splittable counter-based stream: the state is a keyed splitmix64 counter,
// so streams keyed by (seed, replicate, unit, role) are reproducible
// independent of thread count and draw order across streams.
class RngStream {
public:
  explicit RngStream(std::uint64_t key) : state_(key) {}

  static RngStream keyed(std::uint64_t seed, std::uint64_t replicate,
                         std::uint64_t unit, std::uint64_t role);

  std::uint64_t next_u64();

  // Uniform on [0,1) with 53-bit resolution.
  double uniform();
  double uniform(double lo, double hi);
  // Standard normal via inverse-cdf transform (deterministic across platforms).
  double normal();
  // Gamma(shape, rate), Marsaglia-Tsang.
  double gamma(double shape, double rate);
  // Uniform pick from {lo..hi} inclusive.
  int uniform_int(int lo, int hi);

private:
  std::uint64_t state_;
};

}  // namespace wassreg
