#include "qlink/receiver.hpp"

#include <cmath>
#include <sstream>

#include "qlink/constants.hpp"
#include "qlink/error.hpp"

namespace qlink {

using namespace constants;

namespace {

struct CouplingTerms {
  double numerator_sqrt;  // √C · μ0 μr · ω · h_r · W_r
  double denominator;     // ½ Ω² V_ol (ε0 ε_eff Z_F² + μ0 μr)
};

CouplingTerms coupling_terms(const AntennaSpec& ant, const WaveguideSpec& wg,
                             AngularFrequency omega) {
  wg.validate();
  ant.validate(wg);
  const double w = omega.rad_per_s();
  const double eps_eff = effective_permittivity(wg, omega);
  const double Omega = w / cutoff_angular_frequency(wg);
  const double z_f = mode_impedance(wg);
  const double volume = wg.width * wg.height * wg.length;

  CouplingTerms t;
  t.numerator_sqrt = std::sqrt(ant.capacitance) * kVacuumPermeability * ant.rel_permeability *
                     w * ant.height * ant.width;
  t.denominator = 0.5 * Omega * Omega * volume *
                  (kVacuumPermittivity * eps_eff * z_f * z_f +
                   kVacuumPermeability * wg.rel_permeability);
  return t;
}

void require_eta_in_range(double eta) {
  if (!(eta <= 1.0)) {
    std::ostringstream msg;
    msg << "coupling efficiency eta = " << eta
        << " exceeds 1; shrink the antenna or capacitance, or lengthen the guide";
    throw Error(ErrorCode::EtaOutOfRange, msg.str());
  }
}

}  // namespace

void AntennaSpec::validate(const WaveguideSpec& wg) const {
  if (!(width >= 0.0) || !(width <= wg.width))
    throw Error(ErrorCode::InvalidSpec, "antenna width must lie in [0, waveguide width]");
  if (!(height >= 0.0) || !(height <= wg.height))
    throw Error(ErrorCode::InvalidSpec, "antenna height must lie in [0, waveguide height]");
  if (!(capacitance > 0.0) || !std::isfinite(capacitance))
    throw Error(ErrorCode::InvalidSpec, "LC capacitance must be > 0");
  if (!(rel_permeability > 0.0) || !std::isfinite(rel_permeability))
    throw Error(ErrorCode::InvalidSpec, "antenna relative permeability must be > 0");
}

bool DetectionResult::eta_warning() const { return eta > kEtaWarningThreshold; }

double coupling_eta_unbounded(const AntennaSpec& ant, const WaveguideSpec& wg,
                              AngularFrequency omega) {
  const CouplingTerms t = coupling_terms(ant, wg, omega);
  const double num = t.numerator_sqrt * t.numerator_sqrt;
  if (num == 0.0) return 0.0;
  return num / t.denominator;
}

double coupling_eta(const AntennaSpec& ant, const WaveguideSpec& wg, AngularFrequency omega) {
  const double eta = coupling_eta_unbounded(ant, wg, omega);
  require_eta_in_range(eta);
  return eta;
}

std::complex<double> lc_coupling_coefficient(const AntennaSpec& ant, const WaveguideSpec& wg,
                                             AngularFrequency omega) {
  // Built from the field quantization constant φ and the LC voltage
  // quantization, not from the closed-form η.
  wg.validate();
  ant.validate(wg);
  const double w = omega.rad_per_s();
  const double eps_eff = effective_permittivity(wg, omega);
  const double Omega = w / cutoff_angular_frequency(wg);
  const double z_f = mode_impedance(wg);
  const double volume = wg.width * wg.height * wg.length;
  const double phi = Omega * Omega * z_f * z_f / 2.0 +
                     kVacuumPermeability * wg.rel_permeability * Omega * Omega /
                         (2.0 * kVacuumPermittivity * eps_eff);

  const double magnitude = std::sqrt(ant.capacitance) /
                           (std::sqrt(phi) * std::sqrt(kVacuumPermittivity * eps_eff * volume)) *
                           kVacuumPermeability * ant.rel_permeability * w * ant.height *
                           ant.width;
  require_eta_in_range(magnitude * magnitude);
  return {0.0, magnitude};
}

std::complex<double> induced_voltage_photon_map(std::complex<double> mode_amplitude,
                                                const AntennaSpec& ant, const WaveguideSpec& wg,
                                                AngularFrequency omega) {
  return lc_coupling_coefficient(ant, wg, omega) * mode_amplitude;
}

DetectionResult detect(const TransportResult& transport, const AntennaSpec& ant,
                       const WaveguideSpec& wg, AngularFrequency omega) {
  DetectionResult d;
  d.eta = coupling_eta(ant, wg, omega);
  d.Ns = d.eta * transport.Ms;
  d.Nn = d.eta * transport.Mn;
  const double w = omega.rad_per_s();
  d.inductance = 1.0 / (w * w * ant.capacitance);
  return d;
}

}  // namespace qlink
