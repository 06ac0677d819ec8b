#pragma once

#include <compare>

#include "qlink/constants.hpp"

namespace qlink {

/// Angular frequency in rad/s. Interfaces take Hz; conversion happens once,
/// through from_hz().
class AngularFrequency {
 public:
  constexpr AngularFrequency() = default;
  constexpr explicit AngularFrequency(double rad_per_s) : value_(rad_per_s) {}

  static constexpr AngularFrequency from_hz(double hz) {
    return AngularFrequency{2.0 * constants::kPi * hz};
  }

  [[nodiscard]] constexpr double rad_per_s() const { return value_; }
  [[nodiscard]] constexpr double hz() const {
    return value_ / (2.0 * constants::kPi);
  }

  constexpr auto operator<=>(const AngularFrequency&) const = default;

 private:
  double value_ = 0.0;
};

}  // namespace qlink
