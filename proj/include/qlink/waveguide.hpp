#pragma once

#include <string>
#include <string_view>

#include "qlink/units.hpp"

namespace qlink {

/// Wall conductivity versus temperature.
///
/// Resistivity is flat above the reference temperature, falls linearly in T
/// down to the knee, and sits on a residual plateau below it, where the
/// conductivity is `cryo_factor` times the reference value. The factor stands
/// in for the residual-resistivity ratio of the actual alloy.
struct ConductorModel {
  std::string name = "aluminium";
  double conductivity_ref = 3.8e7;       // S/m at reference_temperature
  double reference_temperature = 293.0;  // K
  double knee_temperature = 78.0;        // K
  double cryo_factor = 5.0;              // σ(T ≤ knee) / σ_ref

  [[nodiscard]] double conductivity(double temperature) const;
  void validate() const;

  bool operator==(const ConductorModel&) const = default;
  static ConductorModel aluminium() { return {}; }
};

struct WaveguideSpec {
  double width = 0.05;    // m
  double height = 0.025;  // m
  double length = 5.0;    // m
  double rel_permittivity = 1.0;
  double rel_permeability = 1.0;
  ConductorModel wall;
  double temperature = 293.15;  // K

  bool operator==(const WaveguideSpec&) const = default;
  void validate() const;
};

enum class AttenuationModel {
  /// TE10 conductor loss (power), the default.
  Textbook,
  /// Closed form with numerator (h/W)(ωc/ω)² − 1 taken as written. Negative
  /// for every guide with h ≤ W, so it only evaluates for lossless walls.
  Literal,
};

std::string_view to_string(AttenuationModel model);
AttenuationModel attenuation_model_from_string(std::string_view text);

struct ModeParams {
  double omega = 0.0;     // rad/s
  double omega_c = 0.0;   // rad/s
  double Omega = 0.0;     // ω/ω_c
  double Z_F = 0.0;       // ohm
  double eps_eff = 0.0;
  double v_g = 0.0;       // m/s
  double alpha = 0.0;     // Np/m, power
  double Gamma = 0.0;     // 1/s
  double R_s = 0.0;       // ohm
};

double cutoff_angular_frequency(const WaveguideSpec& spec);

/// ε_r − π²c²/(W²ω²). Throws EvanescentMode at or below cutoff.
double effective_permittivity(const WaveguideSpec& spec, AngularFrequency omega);

double mode_impedance(const WaveguideSpec& spec);

double group_velocity(const WaveguideSpec& spec, AngularFrequency omega);

/// Normal skin effect: √(ωμ₀ / 2σ(T)).
double surface_resistance(const ConductorModel& wall, AngularFrequency omega,
                          double temperature);

/// Power attenuation coefficient in Np/m. Never clamps: a negative result is
/// reported as NonphysicalAttenuation.
double attenuation(const WaveguideSpec& spec, AngularFrequency omega,
                   AttenuationModel model);

/// Γ = α·v_g, so that Γ·(l/v_g) = α·l.
double decay_rate(const WaveguideSpec& spec, AngularFrequency omega,
                  AttenuationModel model);

ModeParams mode_params(const WaveguideSpec& spec, AngularFrequency omega,
                       AttenuationModel model);

}  // namespace qlink
