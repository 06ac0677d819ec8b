#pragma once

#include <array>
#include <cstdint>

#include "qlink/simd/kernels.hpp"

namespace qlink::rng {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// Reference Philox4x32-10 bijection.
PhiloxCounter philox4x32(PhiloxCounter counter, PhiloxKey key);

/// 64-bit seed split into the two key words.
constexpr PhiloxKey key_from_seed(std::uint64_t seed) {
  return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

/// Uniform in (0, 1] from two words (53 random bits).
constexpr double open_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return static_cast<double>(bits + 1) * 0x1.0p-53;
}

/// Uniform in [0, 1) from two words (53 random bits).
constexpr double half_open_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return static_cast<double>(bits) * 0x1.0p-53;
}

struct GaussianPair {
  double first;
  double second;
};

/// Box–Muller on one Philox block: two independent standard normals.
GaussianPair box_muller(std::uint32_t w0, std::uint32_t w1, std::uint32_t w2, std::uint32_t w3);

}  // namespace qlink::rng
