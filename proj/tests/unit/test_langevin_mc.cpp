#include <cmath>
#include <cstdlib>
#include <cstring>
#include <vector>

#include "doctest.h"
#include "qlink/error.hpp"
#include "qlink/langevin_mc.hpp"
#include "test_support.hpp"

using namespace qlink;
using namespace qlink::mc;
using qlink::testing::rel_close;

namespace {

bool same(const EnsembleStats& a, const EnsembleStats& b) {
  return std::memcmp(&a.mean_photons, &b.mean_photons, sizeof(double)) == 0 &&
         std::memcmp(&a.variance, &b.variance, sizeof(double)) == 0 &&
         std::memcmp(&a.std_error, &b.std_error, sizeof(double)) == 0 &&
         a.n_effective == b.n_effective;
}

McConfig thermal_config(Integrator integrator) {
  McConfig cfg;
  cfg.gamma = 2.0;
  cfg.total_time = 1.0;
  cfg.n_th = 610.3;
  cfg.n_trajectories = 10000;
  cfg.n_steps = integrator == Integrator::EulerMaruyama ? 1000 : 20;
  cfg.integrator = integrator;
  return cfg;
}

}  // namespace

TEST_CASE("analytic reference") {
  McConfig cfg;
  cfg.initial_amplitude = {3.0, 4.0};
  cfg.gamma = 0.0;
  CHECK(analytic_reference(cfg) == 25.0);

  cfg.initial_amplitude = {0.0, 0.0};
  cfg.n_th = 7.5;
  cfg.gamma = 1e3;
  CHECK(analytic_reference(cfg) == 7.5);

  cfg.initial_amplitude = {std::sqrt(320000.0), 0.0};
  cfg.n_th = 610.3;
  cfg.gamma = std::log(1 / 0.914);
  CHECK(rel_close(analytic_reference(cfg), 292532.4858, 1e-12));
}

TEST_CASE("no damping leaves every trajectory untouched") {
  for (Integrator integrator : {Integrator::EulerMaruyama, Integrator::ExactPropagator}) {
    McConfig cfg;
    cfg.gamma = 0.0;
    cfg.n_th = 610.3;
    cfg.initial_amplitude = {std::sqrt(2.0), 0.3};
    cfg.n_trajectories = 1000;
    cfg.integrator = integrator;
    const EnsembleStats s = simulate_ensemble(cfg);
    CHECK(s.mean_photons == std::norm(cfg.initial_amplitude));
    CHECK(s.mean_photons == analytic_reference(cfg));
    CHECK(s.variance == 0.0);
    CHECK(s.n_effective == 1000);
  }
}

TEST_CASE("pure decay without a bath") {
  McConfig cfg;
  cfg.gamma = 1.5;
  cfg.n_th = 0.0;
  cfg.initial_amplitude = {10.0, 0.0};
  cfg.n_trajectories = 64;

  SUBCASE("exact propagator matches to rounding") {
    cfg.integrator = Integrator::ExactPropagator;
    cfg.n_steps = 50;
    const EnsembleStats s = simulate_ensemble(cfg);
    CHECK(s.variance == 0.0);
    CHECK(std::abs(s.mean_photons - 100.0 * std::exp(-1.5)) <= discretization_floor(cfg));
    CHECK(rel_close(s.mean_photons, 100.0 * std::exp(-1.5), 1e-12));
  }

  SUBCASE("Euler-Maruyama bias stays inside its a-priori bound") {
    cfg.integrator = Integrator::EulerMaruyama;
    for (std::size_t steps : {15u, 100u, 1000u}) {
      cfg.n_steps = steps;
      const double err = std::abs(simulate_ensemble(cfg).mean_photons - 100.0 * std::exp(-1.5));
      CHECK(err <= discretization_floor(cfg));
      CHECK(err > 0.25 * discretization_floor(cfg));  // the bound is not vacuous
    }
  }
}

TEST_CASE("thermal filling at Gamma t = 2") {
  for (Integrator integrator : {Integrator::EulerMaruyama, Integrator::ExactPropagator}) {
    const McConfig cfg = thermal_config(integrator);
    const EnsembleStats s = simulate_ensemble(cfg);
    CAPTURE(to_string(integrator));
    CHECK(rel_close(analytic_reference(cfg), 527.70487664069527, 1e-12));
    CHECK(std::abs(s.mean_photons - analytic_reference(cfg)) <=
          3 * s.std_error + discretization_floor(cfg));
    // Thermal |u|² is exponential: sd equals the mean.
    CHECK(rel_close(std::sqrt(s.variance), analytic_reference(cfg), 0.05));
    CHECK(rel_close(s.std_error, std::sqrt(s.variance / 10000.0), 1e-15));
  }
}

TEST_CASE("coherent and thermal parts add") {
  McConfig both;
  both.gamma = 0.5;
  both.n_th = 40.0;
  both.initial_amplitude = {20.0, 0.0};
  both.n_steps = 10;
  both.integrator = Integrator::ExactPropagator;
  both.n_trajectories = 20000;

  McConfig coherent = both;
  coherent.n_th = 0.0;
  McConfig thermal = both;
  thermal.initial_amplitude = {0.0, 0.0};
  thermal.seed = 4242;

  const EnsembleStats s_both = simulate_ensemble(both);
  const EnsembleStats s_coh = simulate_ensemble(coherent);
  const EnsembleStats s_th = simulate_ensemble(thermal);
  const double sigma = std::hypot(s_both.std_error, s_th.std_error);
  CHECK(std::abs(s_both.mean_photons - (s_coh.mean_photons + s_th.mean_photons)) <= 3 * sigma);
}

TEST_CASE("determinism") {
  McConfig cfg = thermal_config(Integrator::EulerMaruyama);
  cfg.n_trajectories = 3001;
  cfg.n_steps = 40;
  const EnsembleStats ref = simulate_ensemble(cfg, simd::Level::Scalar);

  CHECK(same(simulate_ensemble(cfg, simd::Level::Scalar), ref));
  CHECK(same(simulate_ensemble(cfg, simd::best_available()), ref));

  for (const char* threads : {"1", "3", "8"}) {
    ::setenv("QLINK_THREADS", threads, 1);
    CHECK(same(simulate_ensemble(cfg), ref));
  }
  ::unsetenv("QLINK_THREADS");

  McConfig other = cfg;
  other.seed = 43;
  CHECK_FALSE(same(simulate_ensemble(other), ref));

  // Trajectory streams do not depend on the ensemble size.
  McConfig smaller = cfg;
  smaller.n_trajectories = 1000;
  const auto full = simulate_photons(cfg, simd::Level::Scalar);
  const auto part = simulate_photons(smaller, simd::best_available());
  CHECK(std::memcmp(full.data(), part.data(), part.size() * sizeof(double)) == 0);
}

TEST_CASE("exact and Euler-Maruyama integrators agree") {
  McConfig em;
  em.gamma = 1.0;
  em.n_th = 5.0;
  em.initial_amplitude = {3.0, 1.0};
  em.n_steps = 500;
  em.n_trajectories = 20000;
  McConfig ex = em;
  ex.integrator = Integrator::ExactPropagator;
  ex.n_steps = 3;

  const EnsembleStats a = simulate_ensemble(em);
  const EnsembleStats b = simulate_ensemble(ex);
  CHECK(std::abs(a.mean_photons - b.mean_photons) <=
        3 * std::hypot(a.std_error, b.std_error) + discretization_floor(em) +
            discretization_floor(ex));
  CHECK(std::abs(b.mean_photons - analytic_reference(ex)) <= 3 * b.std_error);
}

TEST_CASE("configuration guard") {
  McConfig cfg;
  cfg.gamma = 5.0;
  cfg.n_steps = 10;
  try {
    cfg.validate();
    FAIL("expected StabilityViolation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StabilityViolation);
    CHECK(std::string(e.what()).find("n_steps >= 50") != std::string::npos);
  }
  CHECK(cfg.minimum_stable_steps() == 50);

  cfg.integrator = Integrator::ExactPropagator;
  CHECK_NOTHROW(cfg.validate());
  cfg.n_steps = 1;
  CHECK_NOTHROW(cfg.validate());

  McConfig bad;
  bad.n_trajectories = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = {};
  bad.n_th = -1.0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = {};
  bad.gamma = -1.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("summary statistics") {
  const std::vector<double> same_values(777, 0.1 + 0.2);
  const EnsembleStats s = summarize(same_values);
  CHECK(s.mean_photons == 0.1 + 0.2);
  CHECK(s.variance == 0.0);

  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const EnsembleStats t = summarize(v);
  CHECK(t.mean_photons == 2.5);
  CHECK(rel_close(t.variance, 5.0 / 3.0, 1e-15));
  CHECK(rel_close(t.std_error, std::sqrt(5.0 / 12.0), 1e-15));

  const EnsembleStats one = summarize(std::vector<double>{4.0});
  CHECK(one.mean_photons == 4.0);
  CHECK(one.variance == 0.0);
}

TEST_CASE("convergence report") {
  McConfig cfg;
  cfg.gamma = 1.0;
  cfg.n_th = 50.0;
  cfg.n_steps = 4;
  cfg.integrator = Integrator::ExactPropagator;
  const std::vector<std::size_t> schedule{100, 1000, 10000};
  const auto rows = convergence_report(cfg, schedule);
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].n_trajectories == schedule[i]);
    CHECK(rows[i].abs_error <= 3 * rows[i].std_error + discretization_floor(cfg));
    if (i > 0) {
      const double shrink = rows[i - 1].std_error / rows[i].std_error;
      CHECK(shrink > std::sqrt(10.0) / 3);
      CHECK(shrink < std::sqrt(10.0) * 3);
    }
  }

  McConfig frozen = cfg;
  frozen.gamma = 0.0;
  frozen.initial_amplitude = {2.0, 0.0};
  for (const auto& row : convergence_report(frozen, schedule)) CHECK(row.abs_error == 0.0);

  const std::vector<std::size_t> bad{100, 100};
  CHECK_THROWS_AS(convergence_report(cfg, bad), Error);
}

TEST_CASE("small verification grid") {
  VerificationGrid grid;
  grid.gamma_t = {0.5, 3.0};
  grid.n_th = {0.0, 2.0};
  grid.initial_photons = {0.0, 50.0};
  grid.n_trajectories = 4000;
  const VerificationReport report = verify_grid(grid);
  CHECK(report.rows.size() == 16);
  CHECK(report.agreement.size() == 8);
  CHECK(report.passed());
  CHECK(report.worst_ratio <= 1.0);

  grid.n_steps = 2;
  CHECK_THROWS_AS(verify_grid(grid), Error);
}

TEST_CASE("predicted spread and Euler step refinement") {
  McConfig cfg;
  cfg.gamma = 1.5;
  cfg.n_th = 3.0;
  cfg.initial_amplitude = {20.0, 0.0};
  cfg.n_trajectories = 20000;
  cfg.n_steps = 30;
  cfg.integrator = Integrator::ExactPropagator;
  const EnsembleStats stats = simulate_ensemble(cfg);
  CHECK(rel_close(stats.std_error, predicted_std_error(cfg), 0.05));

  cfg.n_th = 0.0;
  CHECK(predicted_std_error(cfg) == 0.0);

  // Euler bias shrinks linearly with the step and matches the coefficient.
  cfg.integrator = Integrator::EulerMaruyama;
  cfg.n_th = 0.0;
  cfg.n_steps = 200;
  const double dt_decay = cfg.gamma_t() / 200.0;
  const double bias = analytic_reference(cfg) - simulate_ensemble(cfg).mean_photons;
  CHECK(rel_close(bias, dt_decay * euler_bias_coefficient(cfg), 0.02));

  VerificationGrid grid;
  const McConfig coarse = grid_config(grid, 2.0, 1.0, 1e4, Integrator::EulerMaruyama);
  const double step = coarse.gamma_t() / static_cast<double>(coarse.n_steps);
  CHECK(step * euler_bias_coefficient(coarse) <=
        grid.euler_bias_fraction * predicted_std_error(coarse) * (1 + 1e-12));
  CHECK(coarse.n_steps > 1000);
  CHECK(grid_config(grid, 2.0, 0.0, 1e4, Integrator::EulerMaruyama).n_steps == 1000);
  CHECK(grid_config(grid, 2.0, 1.0, 1e4, Integrator::ExactPropagator).n_steps == 20);
  grid.n_steps = 7;
  CHECK(grid_config(grid, 0.5, 1.0, 1e4, Integrator::EulerMaruyama).n_steps == 7);
}
