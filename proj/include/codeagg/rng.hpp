#ifndef CODEAGG_RNG_HPP
#define CODEAGG_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace codeagg {

// Deterministic random source built on std::mt19937_64. The engine's output
// sequence is fixed by the standard, and we derive doubles from raw 64-bit
// draws ourselves (std::uniform_real_distribution is not portable across
// standard libraries), so identical seeds give identical streams everywhere.
//
// Stream splitting: split(id) derives an independent generator from the
// *construction* seed and the stream id via splitmix64, independent of how
// many values have been drawn from the parent.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Multiply-shift rejection-free mapping is biased for huge n; all our
    // uses have n << 2^32 where the bias is negligible, but do it exactly.
    std::uint64_t x = next_u64();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Standard normal via Box-Muller on our own uniforms (pair cached).
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = uniform();
    double u2 = uniform();
    // Guard u1 = 0 exactly.
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * M_PI * u2;
    cached_ = r * std::sin(theta);
    have_cached_ = true;
    return r * std::cos(theta);
  }

  Rng split(std::uint64_t stream) const {
    return Rng(splitmix64(seed_ + 0x9e3779b97f4a7c15ULL * (stream + 1)));
  }

  std::uint64_t seed() const noexcept { return seed_; }

  static std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace codeagg

#endif
