#include "wassreg/rng.hpp"

#include <cmath>

#include "wassreg/errors.hpp"
#include "wassreg/special.hpp"

namespace wassreg {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

RngStream RngStream::keyed(std::uint64_t seed, std::uint64_t replicate,
                           std::uint64_t unit, std::uint64_t role) {
  std::uint64_t k = splitmix64(seed);
  k = splitmix64(k ^ splitmix64(replicate + 0x7fb5d329728ea185ULL));
  k = splitmix64(k ^ splitmix64(unit + 0x8ebc6af09c88c6e3ULL));
  k = splitmix64(k ^ splitmix64(role + 0x589965cc75374cc3ULL));
  return RngStream(k);
}

std::uint64_t RngStream::next_u64() { return splitmix64(state_++); }

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double RngStream::normal() {
  // Inverse-cdf keeps the draw a pure function of one counter tick.
  double u;
  do {
    u = uniform();
  } while (u <= 0.0);
  return norm_quantile(u);
}

double RngStream::gamma(double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0)) throw invalid_input("gamma parameters must be positive");
  if (shape < 1.0) {
    // Boost to shape+1 and scale back (Marsaglia-Tsang augmentation).
    double u;
    do {
      u = uniform();
    } while (u <= 0.0);
    return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    double u = uniform();
    if (u <= 0.0) continue;
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v / rate;
  }
}

int RngStream::uniform_int(int lo, int hi) {
  if (hi < lo) throw invalid_input("uniform_int: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi) - lo + 1;
  return lo + static_cast<int>(next_u64() % span);
}

}  // namespace wassreg
