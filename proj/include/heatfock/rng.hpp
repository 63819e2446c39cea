#pragma once

// Counter-based Philox4x32-10 (Salmon et al., SC'11) plus a small seeded
// engine for generating test inputs. Neither depends on std::*_distribution,
// whose output is implementation-defined.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace heatfock {

using Philox4x32Counter = std::array<std::uint32_t, 4>;
using Philox4x32Key = std::array<std::uint32_t, 2>;

constexpr Philox4x32Counter philox4x32_10(Philox4x32Counter ctr,
                                          Philox4x32Key key) {
  constexpr std::uint32_t kM0 = 0xD2511F53;
  constexpr std::uint32_t kM1 = 0xCD9E8D57;
  constexpr std::uint32_t kW0 = 0x9E3779B9;
  constexpr std::uint32_t kW1 = 0xBB67AE85;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

/// Uniform in (0, 1] from two 32-bit words (53 bits).
inline double uniform_open0(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits =
      ((std::uint64_t{hi} << 32) | std::uint64_t{lo}) >> 11;
  return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

/// A standard complex normal pair (z1, z2) via Box-Muller on one Philox
/// block. The block is a pure function of (ctr, key).
inline std::pair<double, double> philox_normal_pair(const Philox4x32Counter& ctr,
                                                    const Philox4x32Key& key) {
  const auto r = philox4x32_10(ctr, key);
  const double u1 = uniform_open0(r[0], r[1]);
  const double u2 = uniform_open0(r[2], r[3]);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

/// Sequential engine for sampling test inputs (polynomials, points, omega).
class InputRng {
 public:
  explicit InputRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) {  // inclusive
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(engine_() % span);
  }
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    spare_ = radius * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return radius * std::cos(2.0 * std::numbers::pi * u2);
  }
  /// Complex Gaussian with E|z|^2 = 1.
  std::complex<double> complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
  }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace heatfock
