#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace rdciag {

// Deterministic generator: mt19937_64 raw stream (pinned by the standard)
// with hand-rolled transforms, so the draw sequence is identical across
// standard libraries for one seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  double uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Uniform in {0, ..., n-1}; modulo bias is negligible for small n.
  int uniform_int(int n) {
    return static_cast<int>(next() % static_cast<std::uint64_t>(n));
  }

  double normal() {
    double u1 = uniform01();
    double u2 = uniform01();
    if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace rdciag
