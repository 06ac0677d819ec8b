#include "qlink/langevin_mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qlink/error.hpp"
#include "qlink/parallel.hpp"
#include "qlink/rng.hpp"

namespace qlink::mc {

namespace {

constexpr std::size_t kChunk = 512;
constexpr double kRoundingFloor = 1e-9;

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::InvalidConfig, what);
}

std::uint32_t stream_tag(Integrator integrator) {
  return integrator == Integrator::EulerMaruyama ? 0u : 1u;
}

struct StepCoefficients {
  double keep;
  double kick;  // multiplies standard normals g₁, g₂
};

StepCoefficients step_coefficients(const McConfig& cfg) {
  const double dt = cfg.total_time / static_cast<double>(cfg.n_steps);
  const double decay = cfg.gamma * dt;
  if (cfg.integrator == Integrator::EulerMaruyama) {
    // √Γ · √(n_th dt / 2)
    return {1.0 - 0.5 * decay, std::sqrt(cfg.gamma * cfg.n_th * dt / 2.0)};
  }
  return {std::exp(-0.5 * decay), std::sqrt(cfg.n_th * -std::expm1(-decay) / 2.0)};
}

}  // namespace

std::string_view to_string(Integrator integrator) {
  return integrator == Integrator::EulerMaruyama ? "euler_maruyama" : "exact";
}

std::size_t McConfig::minimum_stable_steps() const {
  const double needed = std::ceil(gamma_t() / kMaxStepDecay);
  return std::max<std::size_t>(1, static_cast<std::size_t>(needed));
}

void McConfig::validate() const {
  if (n_trajectories < 1) invalid("n_trajectories must be >= 1");
  if (n_steps < 1) invalid("n_steps must be >= 1");
  if (n_steps > std::numeric_limits<std::uint32_t>::max()) invalid("n_steps must be < 2^32");
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) invalid("gamma must be finite and >= 0");
  if (!(total_time >= 0.0) || !std::isfinite(total_time))
    invalid("total_time must be finite and >= 0");
  if (!(n_th >= 0.0) || !std::isfinite(n_th)) invalid("n_th must be finite and >= 0");
  if (!std::isfinite(initial_amplitude.real()) || !std::isfinite(initial_amplitude.imag()))
    invalid("initial amplitude must be finite");

  if (integrator == Integrator::EulerMaruyama &&
      gamma_t() / static_cast<double>(n_steps) > kMaxStepDecay) {
    std::ostringstream msg;
    msg << "Euler-Maruyama step too coarse: gamma*dt = "
        << gamma_t() / static_cast<double>(n_steps) << " > " << kMaxStepDecay
        << "; use n_steps >= " << minimum_stable_steps();
    throw Error(ErrorCode::StabilityViolation, msg.str());
  }
}

EnsembleStats summarize(std::span<const double> samples) {
  EnsembleStats s;
  s.n_effective = samples.size();
  if (samples.empty()) return s;

  const double pivot = samples.front();
  const auto n = static_cast<double>(samples.size());
  std::vector<double> work(samples.size());
  std::transform(samples.begin(), samples.end(), work.begin(),
                 [pivot](double x) { return x - pivot; });
  s.mean_photons = pivot + pairwise_sum(work) / n;

  if (samples.size() > 1) {
    std::transform(samples.begin(), samples.end(), work.begin(), [&](double x) {
      const double d = x - s.mean_photons;
      return d * d;
    });
    s.variance = pairwise_sum(work) / (n - 1.0);
  }
  s.std_error = std::sqrt(s.variance / n);
  return s;
}

std::vector<double> simulate_photons(const McConfig& cfg, simd::Level level) {
  cfg.validate();
  const simd::KernelTable& k = simd::kernels(level);
  const StepCoefficients coeff = step_coefficients(cfg);
  const rng::PhiloxKey key = rng::key_from_seed(cfg.seed);
  const std::uint32_t tag = stream_tag(cfg.integrator);
  const bool noisy = coeff.kick != 0.0;
  const bool static_state = coeff.keep == 1.0 && !noisy;

  std::vector<double> photons(cfg.n_trajectories);
  parallel_for_chunks(cfg.n_trajectories, kChunk, [&](std::size_t begin, std::size_t end) {
    const std::size_t m = end - begin;
    std::vector<double> re(m, cfg.initial_amplitude.real());
    std::vector<double> im(m, cfg.initial_amplitude.imag());
    std::vector<double> g_re(m, 0.0), g_im(m, 0.0);
    std::vector<std::uint32_t> w0(m), w1(m), w2(m), w3(m);

    for (std::size_t step = 0; step < cfg.n_steps && !static_state; ++step) {
      if (noisy) {
        const simd::PhiloxBatch batch{key[0], key[1], static_cast<std::uint32_t>(step), tag,
                                      begin};
        k.philox4x32(batch, m, {w0.data(), w1.data(), w2.data(), w3.data()});
        for (std::size_t j = 0; j < m; ++j) {
          const rng::GaussianPair g = rng::box_muller(w0[j], w1[j], w2[j], w3[j]);
          g_re[j] = g.first;
          g_im[j] = g.second;
        }
      }
      simd::affine_update(k, re, im, g_re, g_im, coeff.keep, coeff.kick);
    }
    simd::squared_norm(k, re, im, std::span<double>(photons).subspan(begin, m));
  });
  return photons;
}

EnsembleStats simulate_ensemble(const McConfig& cfg, simd::Level level) {
  const std::vector<double> photons = simulate_photons(cfg, level);
  return summarize(photons);
}

EnsembleStats simulate_ensemble(const McConfig& cfg) {
  return simulate_ensemble(cfg, simd::active_level());
}

double analytic_reference(const McConfig& cfg) {
  const double x = cfg.gamma_t();
  return std::norm(cfg.initial_amplitude) * std::exp(-x) + cfg.n_th * -std::expm1(-x);
}

double euler_bias_coefficient(const McConfig& cfg) {
  const double gt = cfg.gamma_t();
  const double survive = std::exp(-gt);
  return 0.25 * (cfg.n_th * (1.0 - survive) +
                 (cfg.n_th + std::norm(cfg.initial_amplitude)) * gt * survive);
}

double predicted_std_error(const McConfig& cfg) {
  const double survive = std::exp(-cfg.gamma_t());
  const double coherent = std::norm(cfg.initial_amplitude) * survive;
  const double thermal = cfg.n_th * (1.0 - survive);
  return std::sqrt((thermal * thermal + 2.0 * coherent * thermal) /
                   static_cast<double>(cfg.n_trajectories));
}

double discretization_floor(const McConfig& cfg) {
  double floor = kRoundingFloor * std::max(analytic_reference(cfg), 1.0);
  if (cfg.integrator == Integrator::EulerMaruyama) {
    const double step_decay = cfg.gamma_t() / static_cast<double>(cfg.n_steps);
    floor += 2.0 * step_decay * euler_bias_coefficient(cfg);
  }
  return floor;
}

std::vector<ConvergenceRow> convergence_report(const McConfig& cfg,
                                               std::span<const std::size_t> schedule) {
  if (schedule.empty()) invalid("convergence schedule is empty");
  if (!std::is_sorted(schedule.begin(), schedule.end(), std::less_equal<>{}))
    invalid("convergence schedule must be strictly increasing");

  const double analytic = analytic_reference(cfg);
  std::vector<ConvergenceRow> rows;
  rows.reserve(schedule.size());
  for (std::size_t n : schedule) {
    McConfig run = cfg;
    run.n_trajectories = n;
    const EnsembleStats s = simulate_ensemble(run);
    rows.push_back({n, std::abs(s.mean_photons - analytic), s.std_error});
  }
  return rows;
}

bool VerificationReport::passed() const {
  return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.pass; }) &&
         std::all_of(agreement.begin(), agreement.end(), [](const auto& r) { return r.pass; });
}

McConfig grid_config(const VerificationGrid& grid, double gamma_t, double n_th,
                     double initial_photons, Integrator integrator) {
  McConfig cfg;
  cfg.gamma = gamma_t;
  cfg.total_time = 1.0;
  cfg.n_th = n_th;
  cfg.initial_amplitude = {std::sqrt(initial_photons), 0.0};
  cfg.n_trajectories = grid.n_trajectories;
  cfg.seed = grid.seed;
  cfg.integrator = integrator;
  if (grid.n_steps > 0) {
    cfg.n_steps = grid.n_steps;
  } else {
    const double decay = integrator == Integrator::EulerMaruyama ? grid.euler_step_decay
                                                                 : grid.exact_step_decay;
    double steps = std::ceil(gamma_t / decay);
    if (integrator == Integrator::EulerMaruyama) {
      // Keep the O(Γdt) bias a small fraction of the statistical error.
      const double se = predicted_std_error(cfg);
      if (se > 0.0)
        steps = std::max(steps, std::ceil(gamma_t * euler_bias_coefficient(cfg) /
                                          (grid.euler_bias_fraction * se)));
    }
    cfg.n_steps = std::max<std::size_t>(1, static_cast<std::size_t>(steps));
  }
  return cfg;
}

VerificationReport verify_grid(const VerificationGrid& grid) {
  VerificationReport report;
  auto update_worst = [&](double error, double tolerance) {
    report.worst_ratio = std::max(report.worst_ratio, error / tolerance);
  };

  for (double gt : grid.gamma_t) {
    for (double nth : grid.n_th) {
      for (double m0 : grid.initial_photons) {
        VerificationRow pair[2];
        for (Integrator integrator : {Integrator::EulerMaruyama, Integrator::ExactPropagator}) {
          const McConfig cfg = grid_config(grid, gt, nth, m0, integrator);
          VerificationRow row;
          row.gamma_t = gt;
          row.n_th = nth;
          row.initial_photons = m0;
          row.integrator = integrator;
          row.n_trajectories = cfg.n_trajectories;
          row.n_steps = cfg.n_steps;
          row.stats = simulate_ensemble(cfg);
          row.analytic = analytic_reference(cfg);
          row.abs_error = std::abs(row.stats.mean_photons - row.analytic);
          row.floor = discretization_floor(cfg);
          row.tolerance = grid.sigma_bound * row.stats.std_error + row.floor;
          row.pass = row.abs_error <= row.tolerance;
          update_worst(row.abs_error, row.tolerance);
          pair[integrator == Integrator::EulerMaruyama ? 0 : 1] = row;
          report.rows.push_back(row);
        }

        AgreementRow agree;
        agree.gamma_t = gt;
        agree.n_th = nth;
        agree.initial_photons = m0;
        agree.difference = std::abs(pair[0].stats.mean_photons - pair[1].stats.mean_photons);
        agree.tolerance =
            grid.sigma_bound * std::hypot(pair[0].stats.std_error, pair[1].stats.std_error) +
            pair[0].floor + pair[1].floor;
        agree.pass = agree.difference <= agree.tolerance;
        update_worst(agree.difference, agree.tolerance);
        report.agreement.push_back(agree);
      }
    }
  }
  return report;
}

}  // namespace qlink::mc
