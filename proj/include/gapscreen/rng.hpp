#ifndef GAPSCREEN_RNG_HPP
#define GAPSCREEN_RNG_HPP

#include <cmath>
#include <cstdint>

#include "gapscreen/common.hpp"

namespace gapscreen {

// Counter-based generator (splitmix64 over a seed/stream pair). All
// randomness in the toolkit flows through this so that traces are
// bit-reproducible across runs and platforms.
class rng {
 public:
  explicit rng(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ULL))) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // uniform in (0, 1)
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // standard normal via Box-Muller
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_uniform();
    double u2 = next_uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // uniform integer in [0, n)
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  vec normal_vector(index_t n) {
    vec v(n);
    for (index_t i = 0; i < n; ++i) v[i] = next_normal();
    return v;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace gapscreen

#endif  // GAPSCREEN_RNG_HPP
