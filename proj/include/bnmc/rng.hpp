#ifndef BNMC_RNG_HPP
#define BNMC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <vector>

namespace bnmc {

// Counter-based splitmix64 stream. Streams for distinct purposes are derived
// from one master seed with split(tag); the tags are fixed constants, so no
// consumer ever advances another consumer's stream. That is what makes runs
// reproducible from (seed, config) alone, independent of worker count.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // Independent child stream; distinct tags give distinct streams.
  Rng split(std::uint64_t tag) const {
    return Rng(mix(state_ + 0x9E3779B97F4A7C15ull * (tag + 1)));
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix(state_);
  }

  // Uniform on [0,1), 53-bit resolution.
  double next_unit() { return (next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on the open interval (0,1); never returns an endpoint, so
  // log(u) is always finite.
  double next_unit_open() {
    return ((next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Uniform on [0, bound), unbiased via rejection. bound >= 1.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x < threshold);
    return x % bound;
  }

  double next_normal() {
    const double u1 = next_unit_open();
    const double u2 = next_unit_open();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.141592653589793238462643 * u2);
  }

  // Marsaglia-Tsang; shape > 0, unit scale.
  double next_gamma(double shape) {
    if (shape < 1.0) {
      const double u = next_unit_open();
      return next_gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / (3.0 * std::sqrt(d));
    for (;;) {
      double x, v;
      do {
        x = next_normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = next_unit_open();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

// Fisher-Yates.
template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[rng.next_below(i)]);
}

}  // namespace bnmc

#endif
