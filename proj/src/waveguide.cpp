#include "qlink/waveguide.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "qlink/constants.hpp"
#include "qlink/error.hpp"

namespace qlink {

using namespace constants;

namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::InvalidSpec, what);
}

void require_propagating(const WaveguideSpec& spec, AngularFrequency omega) {
  const double omega_c = cutoff_angular_frequency(spec);
  if (!(omega.rad_per_s() > omega_c)) {
    std::ostringstream msg;
    msg.precision(4);
    msg << "frequency " << omega.hz() / 1e9 << " GHz is at or below the TE10 cutoff "
        << (omega_c / (2.0 * kPi)) / 1e9 << " GHz; raise the frequency or widen the guide";
    throw Error(ErrorCode::EvanescentMode, msg.str());
  }
}

// (ω_c/ω)², in (0, 1) for a propagating mode.
double cutoff_ratio_squared(const WaveguideSpec& spec, AngularFrequency omega) {
  const double r = cutoff_angular_frequency(spec) / omega.rad_per_s();
  return r * r;
}

}  // namespace

double ConductorModel::conductivity(double temperature) const {
  if (temperature >= reference_temperature) return conductivity_ref;
  if (temperature <= knee_temperature) return conductivity_ref * cryo_factor;
  const double rho_ref = 1.0 / conductivity_ref;
  const double rho_knee = rho_ref / cryo_factor;
  const double frac =
      (temperature - knee_temperature) / (reference_temperature - knee_temperature);
  return 1.0 / (rho_knee + (rho_ref - rho_knee) * frac);
}

void ConductorModel::validate() const {
  if (!(conductivity_ref > 0.0)) invalid("conductor conductivity must be > 0");
  if (!(reference_temperature > 0.0) || !std::isfinite(reference_temperature))
    invalid("conductor reference temperature must be finite and > 0");
  if (!(knee_temperature > 0.0) || !(knee_temperature < reference_temperature))
    invalid("conductor knee temperature must lie in (0, reference temperature)");
  if (!(cryo_factor >= 1.0) || !std::isfinite(cryo_factor))
    invalid("conductor cryogenic factor must be finite and >= 1");
}

void WaveguideSpec::validate() const {
  if (!(width > 0.0) || !std::isfinite(width)) invalid("waveguide width must be > 0");
  if (!(height > 0.0) || !std::isfinite(height)) invalid("waveguide height must be > 0");
  if (!(length >= 0.0) || !std::isfinite(length)) invalid("waveguide length must be >= 0");
  if (!(height <= width)) invalid("waveguide height must not exceed width (TE10 orientation)");
  if (!(rel_permittivity >= 1.0) || !std::isfinite(rel_permittivity))
    invalid("relative permittivity must be >= 1");
  if (!(rel_permeability > 0.0) || !std::isfinite(rel_permeability))
    invalid("relative permeability must be > 0");
  if (!(temperature > 0.0) || !std::isfinite(temperature))
    invalid("waveguide temperature must be > 0 K");
  wall.validate();
}

std::string_view to_string(AttenuationModel model) {
  switch (model) {
    case AttenuationModel::Textbook: return "textbook";
    case AttenuationModel::Literal: return "literal";
  }
  return "textbook";
}

AttenuationModel attenuation_model_from_string(std::string_view text) {
  if (text == "textbook") return AttenuationModel::Textbook;
  if (text == "literal") return AttenuationModel::Literal;
  throw Error(ErrorCode::InvalidConfig,
              "unknown attenuation model '" + std::string(text) +
                  "' (expected textbook or literal)");
}

double cutoff_angular_frequency(const WaveguideSpec& spec) {
  return 2.0 * kPi * kSpeedOfLight / (2.0 * spec.width * std::sqrt(spec.rel_permittivity));
}

double effective_permittivity(const WaveguideSpec& spec, AngularFrequency omega) {
  require_propagating(spec, omega);
  const double w = omega.rad_per_s();
  return spec.rel_permittivity -
         kPi * kPi * kSpeedOfLight * kSpeedOfLight / (spec.width * spec.width * w * w);
}

double mode_impedance(const WaveguideSpec& spec) {
  return kFreeSpaceImpedanceRounded * std::sqrt(spec.rel_permeability / spec.rel_permittivity);
}

double group_velocity(const WaveguideSpec& spec, AngularFrequency omega) {
  require_propagating(spec, omega);
  const double q = cutoff_ratio_squared(spec, omega);
  return kSpeedOfLight * std::sqrt(1.0 - q) /
         std::sqrt(spec.rel_permittivity * spec.rel_permeability);
}

double surface_resistance(const ConductorModel& wall, AngularFrequency omega,
                          double temperature) {
  return std::sqrt(omega.rad_per_s() * kVacuumPermeability /
                   (2.0 * wall.conductivity(temperature)));
}

double attenuation(const WaveguideSpec& spec, AngularFrequency omega,
                   AttenuationModel model) {
  require_propagating(spec, omega);
  const double r_s = surface_resistance(spec.wall, omega, spec.temperature);
  const double q = cutoff_ratio_squared(spec, omega);
  const double aspect = spec.height / spec.width;

  double alpha = 0.0;
  switch (model) {
    case AttenuationModel::Textbook: {
      // Field attenuation doubled to a power coefficient.
      const double field = r_s / (spec.height * mode_impedance(spec) * std::sqrt(1.0 - q)) *
                           (1.0 + 2.0 * aspect * q);
      alpha = 2.0 * field;
      break;
    }
    case AttenuationModel::Literal: {
      const double z_fill = std::sqrt(kVacuumPermeability * spec.rel_permeability /
                                      (kVacuumPermittivity * spec.rel_permittivity));
      alpha = 2.0 * r_s / z_fill * (aspect * q - 1.0) / std::sqrt(1.0 - q);
      break;
    }
  }
  if (alpha < 0.0) {
    std::ostringstream msg;
    msg << "attenuation model '" << to_string(model) << "' gives alpha = " << alpha
        << " Np/m < 0 ((h/W)(wc/w)^2 - 1 = " << aspect * q - 1.0
        << "); use the textbook model";
    throw Error(ErrorCode::NonphysicalAttenuation, msg.str());
  }
  return alpha + 0.0;  // normalizes -0.0 from a lossless wall
}

double decay_rate(const WaveguideSpec& spec, AngularFrequency omega,
                  AttenuationModel model) {
  return attenuation(spec, omega, model) * group_velocity(spec, omega);
}

ModeParams mode_params(const WaveguideSpec& spec, AngularFrequency omega,
                       AttenuationModel model) {
  ModeParams p;
  p.omega = omega.rad_per_s();
  p.omega_c = cutoff_angular_frequency(spec);
  p.Omega = p.omega / p.omega_c;
  p.Z_F = mode_impedance(spec);
  p.eps_eff = effective_permittivity(spec, omega);
  p.v_g = group_velocity(spec, omega);
  p.R_s = surface_resistance(spec.wall, omega, spec.temperature);
  p.alpha = attenuation(spec, omega, model);
  p.Gamma = p.alpha * p.v_g;
  return p;
}

}  // namespace qlink
