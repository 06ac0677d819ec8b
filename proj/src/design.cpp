#include "qlink/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qlink/error.hpp"
#include "qlink/parallel.hpp"

namespace qlink::design {

namespace {

[[noreturn]] void invalid_config(const std::string& what) {
  throw Error(ErrorCode::InvalidConfig, what);
}

[[noreturn]] void infeasible(const std::string& what) {
  throw Error(ErrorCode::Infeasible, what);
}

}  // namespace

void Scenario::validate() const {
  waveguide.validate();
  signal.validate();
  if (antenna) antenna->validate(waveguide);
}

std::optional<double> LinkBudget::induced_noise() const {
  if (detection) return detection->Nn;
  if (zero_length) return 0.0;
  return std::nullopt;
}

LinkBudget evaluate_link_budget(const Scenario& scenario) {
  scenario.validate();
  const AngularFrequency omega = scenario.signal.omega();

  LinkBudget budget;
  budget.mode = mode_params(scenario.waveguide, omega, scenario.attenuation_model);
  budget.transport = propagate(scenario.signal, scenario.waveguide, scenario.attenuation_model);
  budget.zero_length = scenario.waveguide.length == 0.0;
  if (scenario.antenna && !budget.zero_length)
    budget.detection = detect(budget.transport, *scenario.antenna, scenario.waveguide, omega);
  return budget;
}

std::string_view to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::Length: return "length";
    case SweepVariable::Frequency: return "frequency";
    case SweepVariable::AntennaWidth: return "antenna_width";
    case SweepVariable::Temperature: return "temperature";
  }
  return "length";
}

std::string_view to_string(Spacing s) { return s == Spacing::Linear ? "linear" : "log"; }

SweepVariable sweep_variable_from_string(std::string_view text) {
  for (auto v : {SweepVariable::Length, SweepVariable::Frequency, SweepVariable::AntennaWidth,
                 SweepVariable::Temperature}) {
    if (text == to_string(v)) return v;
  }
  invalid_config("unknown sweep variable '" + std::string(text) +
                 "' (expected length, frequency, antenna_width or temperature)");
}

Spacing spacing_from_string(std::string_view text) {
  if (text == "linear") return Spacing::Linear;
  if (text == "log") return Spacing::Log;
  invalid_config("unknown sweep spacing '" + std::string(text) + "' (expected linear or log)");
}

void SweepSpec::validate() const {
  if (!std::isfinite(start) || !std::isfinite(stop) || !(start < stop))
    invalid_config("sweep requires finite start < stop");
  if (n_points < 2) invalid_config("sweep requires n_points >= 2");
  if (spacing == Spacing::Log && !(start > 0.0))
    invalid_config("log-spaced sweep requires start > 0");
  if (!(height_ratio > 0.0) || !std::isfinite(height_ratio))
    invalid_config("sweep height_ratio must be > 0");
  if (variable == SweepVariable::AntennaWidth && !fixed.antenna)
    invalid_config("antenna_width sweep requires an antenna section");
}

std::vector<double> sweep_points(const SweepSpec& spec) {
  spec.validate();
  std::vector<double> points(spec.n_points);
  const auto last = static_cast<double>(spec.n_points - 1);
  for (std::size_t i = 0; i < spec.n_points; ++i) {
    const double frac = static_cast<double>(i) / last;
    points[i] = spec.spacing == Spacing::Linear
                    ? spec.start + frac * (spec.stop - spec.start)
                    : spec.start * std::pow(spec.stop / spec.start, frac);
  }
  points.front() = spec.start;
  points.back() = spec.stop;
  return points;
}

Scenario apply_sweep_value(const SweepSpec& spec, double value) {
  Scenario s = spec.fixed;
  switch (spec.variable) {
    case SweepVariable::Length: s.waveguide.length = value; break;
    case SweepVariable::Frequency: s.signal.frequency = value; break;
    case SweepVariable::Temperature: s.waveguide.temperature = value; break;
    case SweepVariable::AntennaWidth:
      s.antenna->width = value;
      s.antenna->height = spec.height_ratio * value;
      break;
  }
  return s;
}

SweepRow evaluate_row(const SweepSpec& spec, double value) {
  SweepRow row;
  row.value = value;
  try {
    const LinkBudget b = evaluate_link_budget(apply_sweep_value(spec, value));
    row.Ms = b.transport.Ms;
    row.Mn = b.transport.Mn;
    row.snr_db = b.transport.snr_db;
    if (b.detection) {
      row.eta = b.detection->eta;
      row.Ns = b.detection->Ns;
    }
    row.Nn = b.induced_noise();
    if (b.zero_length) row.status = "zero_length";
  } catch (const Error& e) {
    row = SweepRow{};
    row.value = value;
    row.status = std::string(reason_code(e.code()));
  }
  return row;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  const std::vector<double> points = sweep_points(spec);
  std::vector<SweepRow> rows(points.size());
  parallel_for_chunks(points.size(), 1, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) rows[i] = evaluate_row(spec, points[i]);
  });
  return rows;
}

void DesignConstraint::validate() const {
  if (!(max_noise_photons > 0.0)) invalid_config("max_noise_photons must be > 0");
  if (!(min_signal_photons > 0.0) || !std::isfinite(min_signal_photons))
    invalid_config("min_signal_photons must be finite and > 0");
  if (!(max_input_photons > 0.0)) invalid_config("max_input_photons must be > 0");
}

double required_input_photons(double target_Ns, double eta, double gamma_t) {
  if (!(eta > 0.0) || !(target_Ns > 0.0))
    throw Error(ErrorCode::InvalidSpec, "required_input_photons needs eta > 0 and target > 0");
  return target_Ns / (eta * std::exp(-gamma_t));
}

AntennaDesign solve_antenna_width(const DesignConstraint& constraint, const Scenario& scenario,
                                  double height_ratio) {
  constraint.validate();
  scenario.validate();
  if (!scenario.antenna) invalid_config("antenna design requires an antenna section");
  if (!(height_ratio > 0.0) || !std::isfinite(height_ratio))
    invalid_config("height_ratio must be > 0");

  const WaveguideSpec& wg = scenario.waveguide;
  const AngularFrequency omega = scenario.signal.omega();
  const TransportResult tr = propagate(scenario.signal, wg, scenario.attenuation_model);
  const double survive = std::exp(-tr.Gamma_t);

  const double eta_needed =
      constraint.min_signal_photons / (constraint.max_input_photons * survive);
  if (eta_needed > 1.0) {
    std::ostringstream msg;
    msg << "signal target needs eta = " << eta_needed << " > 1 even at the full input budget";
    infeasible(msg.str());
  }

  auto eta_at = [&](double width) {
    AntennaSpec a = *scenario.antenna;
    a.width = width;
    a.height = height_ratio * width;
    return coupling_eta_unbounded(a, wg, omega);
  };
  auto admissible = [&](double width) {
    const double eta = eta_at(width);
    return eta <= 1.0 && eta * tr.Mn <= constraint.max_noise_photons;
  };

  AntennaDesign d;
  const double w_max = std::min(wg.width, wg.height / height_ratio);
  if (admissible(w_max)) {
    d.width = w_max;
    d.geometry_limited = true;
  } else {
    double lo = 0.0;
    double hi = w_max;
    while (d.iterations < kMaxBisectionIterations && hi - lo > kBisectionRelTol * hi) {
      const double mid = 0.5 * (lo + hi);
      (admissible(mid) ? lo : hi) = mid;
      ++d.iterations;
    }
    d.width = lo;
  }
  d.height = height_ratio * d.width;
  d.eta = eta_at(d.width);
  if (!(d.eta > 0.0)) infeasible("noise budget cannot be met by any antenna of nonzero size");

  d.Ns = d.eta * tr.Ms;
  d.Nn = d.eta * tr.Mn;
  d.required_input_photons = required_input_photons(constraint.min_signal_photons, d.eta, tr.Gamma_t);
  if (d.required_input_photons > constraint.max_input_photons) {
    std::ostringstream msg;
    msg << "signal target of " << constraint.min_signal_photons << " photons needs "
        << d.required_input_photons << " input photons, above the budget of "
        << constraint.max_input_photons;
    infeasible(msg.str());
  }
  return d;
}

CoolingDesign max_length_under_cooling(const Scenario& scenario,
                                       const DesignConstraint& constraint, double temperature,
                                       double height_ratio) {
  Scenario cooled = scenario;
  cooled.waveguide.temperature = temperature;
  cooled.waveguide.length = kMinSearchLength;
  cooled.validate();

  auto solve_at = [&](double length) -> std::optional<AntennaDesign> {
    cooled.waveguide.length = length;
    try {
      return solve_antenna_width(constraint, cooled, height_ratio);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Infeasible) throw;
      return std::nullopt;
    }
  };

  CoolingDesign out;
  out.temperature = temperature;
  out.conductivity = cooled.waveguide.wall.conductivity(temperature);

  double lo = kMinSearchLength;
  if (!solve_at(lo)) {
    std::ostringstream msg;
    msg << "no waveguide length qualifies at " << temperature << " K (infeasible already at "
        << kMinSearchLength << " m)";
    infeasible(msg.str());
  }

  double hi = 1.0;
  while (hi < kMaxSearchLength && solve_at(hi)) {
    lo = hi;
    hi *= 2.0;
  }
  if (hi >= kMaxSearchLength) {
    hi = kMaxSearchLength;
    if (solve_at(hi)) {
      out.max_length = hi;
      out.length_capped = true;
      out.antenna = *solve_at(hi);
      return out;
    }
  }

  for (int i = 0; i < kMaxBisectionIterations && hi - lo > kBisectionRelTol * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (solve_at(mid) ? lo : hi) = mid;
  }
  out.max_length = lo;
  out.antenna = *solve_at(lo);
  return out;
}

}  // namespace qlink::design
