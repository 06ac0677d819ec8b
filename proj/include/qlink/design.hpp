#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qlink/link.hpp"
#include "qlink/receiver.hpp"
#include "qlink/waveguide.hpp"

namespace qlink::design {

/// One transmitter → waveguide → loop antenna configuration.
struct Scenario {
  WaveguideSpec waveguide;
  SignalSpec signal;
  std::optional<AntennaSpec> antenna;
  AttenuationModel attenuation_model = AttenuationModel::Textbook;

  bool operator==(const Scenario&) const = default;
  void validate() const;
};

struct LinkBudget {
  ModeParams mode;
  TransportResult transport;
  /// Absent for link-only scenarios and for a zero-length guide, where the
  /// mode volume (and with it η) is undefined.
  std::optional<DetectionResult> detection;
  bool zero_length = false;

  /// N_n, which is exactly 0 at zero length even though η is undefined there.
  [[nodiscard]] std::optional<double> induced_noise() const;
};

LinkBudget evaluate_link_budget(const Scenario& scenario);

// Sweeps

enum class SweepVariable { Length, Frequency, AntennaWidth, Temperature };
enum class Spacing { Linear, Log };

std::string_view to_string(SweepVariable v);
std::string_view to_string(Spacing s);
SweepVariable sweep_variable_from_string(std::string_view text);
Spacing spacing_from_string(std::string_view text);

struct SweepSpec {
  SweepVariable variable = SweepVariable::Length;
  double start = 0.0;
  double stop = 10.0;
  std::size_t n_points = 11;
  Spacing spacing = Spacing::Linear;
  double height_ratio = 0.5;  // h_r / W_r for antenna-width sweeps
  Scenario fixed;

  bool operator==(const SweepSpec&) const = default;
  void validate() const;
};

struct SweepRow {
  double value = 0.0;
  std::optional<double> Ms, Mn, snr_db, eta, Ns, Nn;
  std::string status = "ok";  // "ok", "zero_length", or an error reason code
};

/// Grid values; the last point equals stop exactly.
std::vector<double> sweep_points(const SweepSpec& spec);

/// Scenario with the swept variable set to value.
Scenario apply_sweep_value(const SweepSpec& spec, double value);

/// Single point of a sweep; physics errors become a status, not an exception.
SweepRow evaluate_row(const SweepSpec& spec, double value);

/// Points evaluated in parallel, rows returned in grid order.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

// Inverse design

struct DesignConstraint {
  double max_noise_photons = 1e-2;       // N_n budget (may be +inf)
  double min_signal_photons = 35.0;      // N_s target
  double max_input_photons = 320000.0;   // transmitter budget

  bool operator==(const DesignConstraint&) const = default;
  void validate() const;
};

struct AntennaDesign {
  double width = 0.0;   // W_r
  double height = 0.0;  // h_r
  double eta = 0.0;
  double Ns = 0.0;  // at the scenario's input photon number
  double Nn = 0.0;
  double required_input_photons = 0.0;  // to reach min_signal_photons
  bool geometry_limited = false;        // W_r pinned by the guide cross-section
  int iterations = 0;
};

inline constexpr int kMaxBisectionIterations = 64;
inline constexpr double kBisectionRelTol = 1e-12;

/// Largest W_r (with h_r = height_ratio·W_r) meeting the noise budget and
/// η ≤ 1. Infeasible when the signal target cannot be reached within the
/// transmitter budget.
AntennaDesign solve_antenna_width(const DesignConstraint& constraint, const Scenario& scenario,
                                  double height_ratio = 0.5);

/// N_s / (η e^{−Γt}).
double required_input_photons(double target_Ns, double eta, double gamma_t);

struct CoolingDesign {
  double temperature = 0.0;
  double conductivity = 0.0;  // σ(T) used for the walls
  double max_length = 0.0;
  bool length_capped = false;  // hit kMaxSearchLength while still feasible
  AntennaDesign antenna;       // design at max_length
};

inline constexpr double kMinSearchLength = 1e-3;  // m
inline constexpr double kMaxSearchLength = 1e6;   // m

/// Longest guide at waveguide temperature T for which solve_antenna_width
/// succeeds.
CoolingDesign max_length_under_cooling(const Scenario& scenario,
                                       const DesignConstraint& constraint, double temperature,
                                       double height_ratio = 0.5);

}  // namespace qlink::design
