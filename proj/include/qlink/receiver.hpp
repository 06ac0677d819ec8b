#pragma once

#include <complex>

#include "qlink/link.hpp"
#include "qlink/units.hpp"
#include "qlink/waveguide.hpp"

namespace qlink {

/// Loop antenna at the output port, centered on the TE10 field maximum, and
/// the capacitance of the LC oscillator it drives.
struct AntennaSpec {
  double width = 0.01;         // W_r, m
  double height = 0.005;       // h_r, m
  double capacitance = 1e-12;  // F
  double rel_permeability = 1.0;

  bool operator==(const AntennaSpec&) const = default;
  void validate(const WaveguideSpec& wg) const;
};

struct DetectionResult {
  double eta = 0.0;
  double Ns = 0.0;
  double Nn = 0.0;
  double inductance = 0.0;  // H, from ω = 1/√(LC)

  [[nodiscard]] bool eta_warning() const;
};

/// η above this is accepted but flagged; the coupling model assumes the
/// antenna does not load the mode.
inline constexpr double kEtaWarningThreshold = 0.1;

/// Mode-to-LC photon transfer fraction. Throws EtaOutOfRange above 1, which
/// includes a zero-length guide (vanishing mode volume).
double coupling_eta(const AntennaSpec& ant, const WaveguideSpec& wg, AngularFrequency omega);

/// coupling_eta() without the η ≤ 1 check; +inf for a zero-length guide.
/// Solvers use it to bracket the bound.
double coupling_eta_unbounded(const AntennaSpec& ant, const WaveguideSpec& wg,
                              AngularFrequency omega);

/// Linear map b̂ = κ·â between the mode and LC annihilation operators; κ is
/// purely imaginary and |κ|² equals coupling_eta().
std::complex<double> lc_coupling_coefficient(const AntennaSpec& ant, const WaveguideSpec& wg,
                                             AngularFrequency omega);

/// Applies the map to a mode amplitude.
std::complex<double> induced_voltage_photon_map(std::complex<double> mode_amplitude,
                                                const AntennaSpec& ant, const WaveguideSpec& wg,
                                                AngularFrequency omega);

/// Induced photon numbers N_s = η·M_s, N_n = η·M_n.
DetectionResult detect(const TransportResult& transport, const AntennaSpec& ant,
                       const WaveguideSpec& wg, AngularFrequency omega);

}  // namespace qlink
