#pragma once

#include "qlink/units.hpp"
#include "qlink/waveguide.hpp"

namespace qlink {

struct SignalSpec {
  double frequency = 10e9;          // Hz
  double input_photons = 320000.0;  // ⟨u(0)†u(0)⟩

  [[nodiscard]] AngularFrequency omega() const {
    return AngularFrequency::from_hz(frequency);
  }
  bool operator==(const SignalSpec&) const = default;
  void validate() const;
};

struct TransportResult {
  double Ms = 0.0;
  double Mn = 0.0;
  double n_th = 0.0;
  double Gamma_t = 0.0;
  double propagation_time = 0.0;  // s
  double snr_db = 0.0;            // +inf when Mn == 0 and Ms > 0
};

/// Bose–Einstein occupation 1/(exp(ħω/k_BT) − 1). Zero at T = 0.
double thermal_occupation(double frequency_hz, double temperature);

/// Signal and noise photon numbers after a total decay exponent Γt.
TransportResult transport_photons(double input_photons, double n_th, double gamma_t);

/// Full waveguide transport: t = l/v_g, Γ from the selected attenuation model,
/// thermal bath at the waveguide temperature.
TransportResult propagate(const SignalSpec& signal, const WaveguideSpec& wg,
                          AttenuationModel model);

/// 10·log10(Ms/Mn); +inf when Mn = 0 < Ms; UndefinedSnr for (0, 0).
double snr_db(double Ms, double Mn);

}  // namespace qlink
