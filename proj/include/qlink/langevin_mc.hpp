#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "qlink/simd/kernels.hpp"

namespace qlink::mc {

enum class Integrator {
  /// du = −(Γ/2)u dt + √Γ dξ, explicit; requires Γ·dt ≤ kMaxStepDecay.
  EulerMaruyama,
  /// u ← u·e^{−Γdt/2} + complex Gaussian with variance n_th(1 − e^{−Γdt});
  /// exact in distribution for any step.
  ExactPropagator,
};

std::string_view to_string(Integrator integrator);

inline constexpr double kMaxStepDecay = 0.1;

/// Classical complex-amplitude model of the damped mode. Noise increments
/// dξ = √(n_th dt/2)(g₁ + i g₂), so the ensemble mean of |u|² tracks the
/// normally ordered photon number.
struct McConfig {
  double gamma = 1.0;       // 1/s
  double total_time = 1.0;  // s
  double n_th = 0.0;
  std::complex<double> initial_amplitude{0.0, 0.0};
  std::size_t n_trajectories = 10000;
  std::size_t n_steps = 100;
  std::uint64_t seed = 42;
  Integrator integrator = Integrator::EulerMaruyama;

  /// InvalidConfig for out-of-range fields, StabilityViolation when the
  /// Euler–Maruyama step guard fails.
  void validate() const;

  [[nodiscard]] double gamma_t() const { return gamma * total_time; }

  /// Smallest n_steps satisfying the Euler–Maruyama guard.
  [[nodiscard]] std::size_t minimum_stable_steps() const;
};

struct EnsembleStats {
  double mean_photons = 0.0;
  double variance = 0.0;  // unbiased sample variance
  double std_error = 0.0;
  std::size_t n_effective = 0;
};

/// Integrates every trajectory and reduces |u(t)|² in trajectory order.
/// Bit-identical for a fixed seed irrespective of thread count and of the
/// SIMD level.
EnsembleStats simulate_ensemble(const McConfig& cfg);
EnsembleStats simulate_ensemble(const McConfig& cfg, simd::Level level);

/// Per-trajectory |u(t)|², in trajectory order.
std::vector<double> simulate_photons(const McConfig& cfg, simd::Level level);

/// Closed form: |u(0)|² e^{−Γt} + n_th (1 − e^{−Γt}).
double analytic_reference(const McConfig& cfg);

/// Leading-order Euler–Maruyama bias of the mean photon number per unit Γdt:
/// (1/4)[n_th(1 − e^{−Γt}) + (n_th + |u(0)|²) Γt e^{−Γt}].
double euler_bias_coefficient(const McConfig& cfg);

/// Standard error of the ensemble mean expected for the exact Gaussian state,
/// √((N² + 2|μ|²N)/n_trajectories) with N the thermal and |μ|² the coherent part.
double predicted_std_error(const McConfig& cfg);

/// Deterministic part of the tolerance: rounding for the exact propagator,
/// plus twice the leading-order O(Γdt) bias for Euler–Maruyama.
double discretization_floor(const McConfig& cfg);

/// Mean/variance of samples around the first sample (exact for identical
/// samples), pairwise summed.
EnsembleStats summarize(std::span<const double> samples);

struct ConvergenceRow {
  std::size_t n_trajectories = 0;
  double abs_error = 0.0;
  double std_error = 0.0;
};

/// Re-runs cfg for each trajectory count (strictly increasing).
std::vector<ConvergenceRow> convergence_report(const McConfig& cfg,
                                               std::span<const std::size_t> schedule);

// Grid verification of the ensemble against the closed form.

struct VerificationGrid {
  std::vector<double> gamma_t{0.05, 0.5, 2.0, 5.0};
  std::vector<double> n_th{0.0, 1.0, 610.3};
  std::vector<double> initial_photons{0.0, 1.0, 1e4};
  std::size_t n_trajectories = 10000;
  std::uint64_t seed = 42;
  std::size_t n_steps = 0;  // 0: per-point default from the step decays below
  double euler_step_decay = 0.002;
  /// Euler steps are refined until the predicted bias is at most this
  /// fraction of the predicted standard error.
  double euler_bias_fraction = 0.2;
  double exact_step_decay = 0.1;
  double sigma_bound = 3.0;

  bool operator==(const VerificationGrid&) const = default;
};

struct VerificationRow {
  double gamma_t = 0.0;
  double n_th = 0.0;
  double initial_photons = 0.0;
  Integrator integrator = Integrator::EulerMaruyama;
  std::size_t n_trajectories = 0;
  std::size_t n_steps = 0;
  EnsembleStats stats;
  double analytic = 0.0;
  double abs_error = 0.0;
  double floor = 0.0;      // discretization_floor()
  double tolerance = 0.0;  // sigma_bound·SE + floor
  bool pass = false;
};

struct AgreementRow {
  double gamma_t = 0.0;
  double n_th = 0.0;
  double initial_photons = 0.0;
  double difference = 0.0;  // |Euler − exact|
  double tolerance = 0.0;   // sigma_bound·√(SE₁² + SE₂²) + both floors
  bool pass = false;
};

struct VerificationReport {
  std::vector<VerificationRow> rows;
  std::vector<AgreementRow> agreement;
  double worst_ratio = 0.0;  // max |error| / tolerance over all rows
  [[nodiscard]] bool passed() const;
};

/// McConfig for one grid point (t = 1 s, Γ = Γt, real initial amplitude).
McConfig grid_config(const VerificationGrid& grid, double gamma_t, double n_th,
                     double initial_photons, Integrator integrator);

VerificationReport verify_grid(const VerificationGrid& grid);

}  // namespace qlink::mc
