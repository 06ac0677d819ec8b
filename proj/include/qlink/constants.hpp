#pragma once

#include <numbers>

namespace qlink::constants {

// CODATA 2018.
inline constexpr double kSpeedOfLight = 299792458.0;        // m/s
inline constexpr double kVacuumPermeability = 1.25663706212e-6;  // H/m
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
inline constexpr double kReducedPlanck = 1.054571817e-34;   // J s
inline constexpr double kBoltzmann = 1.380649e-23;          // J/K

// Rounded free-space impedance used for the filling impedance Z_F.
inline constexpr double kFreeSpaceImpedanceRounded = 377.0;  // ohm

inline constexpr double kPi = std::numbers::pi;

}  // namespace qlink::constants
