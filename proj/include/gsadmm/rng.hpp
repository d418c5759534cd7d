#pragma once

#include <cstdint>
#include <cmath>

namespace gsadmm {

// SplitMix64 (Steele/Lea/Flood constants). The k-th output is a pure function
// of seed + k * golden_gamma, so streams are identical on every platform and
// cheap to split. Gaussians come from Box-Muller on the 53-bit uniforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in the open interval (0, 1); never returns 0, so log() below is safe.
  double uniform01() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }

  // Uniform integer in [0, n). Modulo bias is below n / 2^64, irrelevant here;
  // what matters is that the draw sequence is fixed for a fixed seed.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    constexpr double two_pi = 6.283185307179586476925286766559;
    double u1 = uniform01();
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(two_pi * u2);
    have_spare_ = true;
    return r * std::cos(two_pi * u2);
  }

  // Derive an independent stream (e.g. one per block or per sweep setting).
  SplitMix64 split() { return SplitMix64(next() ^ 0xd1b54a32d192ed03ull); }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace gsadmm
