#include "qlink/rng.hpp"

#include <cmath>
#include <numbers>

namespace qlink::rng {

using simd::detail::kPhiloxM0;
using simd::detail::kPhiloxM1;
using simd::detail::kPhiloxRounds;
using simd::detail::kPhiloxW0;
using simd::detail::kPhiloxW1;

PhiloxCounter philox4x32(PhiloxCounter c, PhiloxKey k) {
  for (int round = 0; round < kPhiloxRounds; ++round) {
    if (round > 0) {
      k[0] += kPhiloxW0;
      k[1] += kPhiloxW1;
    }
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
  return c;
}

GaussianPair box_muller(std::uint32_t w0, std::uint32_t w1, std::uint32_t w2, std::uint32_t w3) {
  const double radius = std::sqrt(-2.0 * std::log(open_unit(w0, w1)));
  const double angle = 2.0 * std::numbers::pi * half_open_unit(w2, w3);
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace qlink::rng
