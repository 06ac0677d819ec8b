#include "qlink/link.hpp"

#include <cmath>
#include <limits>

#include "qlink/constants.hpp"
#include "qlink/error.hpp"

namespace qlink {

void SignalSpec::validate() const {
  if (!(frequency > 0.0) || !std::isfinite(frequency))
    throw Error(ErrorCode::InvalidSpec, "signal frequency must be > 0");
  if (!(input_photons >= 0.0) || !std::isfinite(input_photons))
    throw Error(ErrorCode::InvalidSpec, "input photon number must be >= 0");
}

double thermal_occupation(double frequency_hz, double temperature) {
  if (temperature <= 0.0) return 0.0;
  const double x = constants::kReducedPlanck * 2.0 * constants::kPi * frequency_hz /
                   (constants::kBoltzmann * temperature);
  return 1.0 / std::expm1(x);
}

double snr_db(double Ms, double Mn) {
  if (Ms == 0.0 && Mn == 0.0)
    throw Error(ErrorCode::UndefinedSnr, "SNR undefined: no signal and no noise photons");
  if (Mn == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(Ms / Mn);
}

TransportResult transport_photons(double input_photons, double n_th, double gamma_t) {
  TransportResult r;
  r.n_th = n_th;
  r.Gamma_t = gamma_t;
  r.Ms = input_photons * std::exp(-gamma_t);
  r.Mn = n_th * -std::expm1(-gamma_t);
  r.snr_db = snr_db(r.Ms, r.Mn);
  return r;
}

TransportResult propagate(const SignalSpec& signal, const WaveguideSpec& wg,
                          AttenuationModel model) {
  signal.validate();
  wg.validate();
  const AngularFrequency omega = signal.omega();
  const double v_g = group_velocity(wg, omega);
  const double alpha = attenuation(wg, omega, model);

  // Γ·t with Γ = α·v_g and t = l/v_g; the v_g factors cancel exactly.
  TransportResult r = transport_photons(
      signal.input_photons, thermal_occupation(signal.frequency, wg.temperature),
      alpha * wg.length);
  r.propagation_time = wg.length / v_g;
  return r;
}

}  // namespace qlink
