#include <cmath>
#include <limits>

#include "doctest.h"
#include "qlink/constants.hpp"
#include "qlink/error.hpp"
#include "qlink/waveguide.hpp"
#include "test_support.hpp"

using namespace qlink;
using qlink::testing::rel_close;

namespace {

const AngularFrequency k10GHz = AngularFrequency::from_hz(10e9);

ErrorCode error_code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected qlink::Error");
  return ErrorCode::InvalidSpec;
}

}  // namespace

TEST_CASE("cutoff frequency") {
  WaveguideSpec wg;
  CHECK(rel_close(cutoff_angular_frequency(wg) / (2 * M_PI), 2997924580.0, 1e-13));

  wg.rel_permittivity = 4.0;
  CHECK(rel_close(cutoff_angular_frequency(wg) / (2 * M_PI), 1498962290.0, 1e-13));

  WaveguideSpec wide;
  wide.width = 0.1;
  wide.height = 0.05;
  CHECK(rel_close(cutoff_angular_frequency(wide), cutoff_angular_frequency(WaveguideSpec{}) / 2,
                  1e-15));
}

TEST_CASE("effective permittivity") {
  const WaveguideSpec wg;
  CHECK(rel_close(effective_permittivity(wg, k10GHz), 0.91012448212631824, 1e-13));

  // Asymptotically ε_r.
  WaveguideSpec filled;
  filled.rel_permittivity = 2.5;
  CHECK(rel_close(effective_permittivity(filled, AngularFrequency::from_hz(1e15)), 2.5, 1e-9));

  SUBCASE("at and below cutoff is evanescent") {
    const AngularFrequency wc{cutoff_angular_frequency(wg)};
    CHECK(error_code_of([&] { (void)effective_permittivity(wg, wc); }) ==
          ErrorCode::EvanescentMode);
    CHECK(error_code_of([&] {
            (void)effective_permittivity(wg, AngularFrequency::from_hz(2e9));
          }) == ErrorCode::EvanescentMode);
  }

  SUBCASE("message names the cutoff") {
    try {
      (void)effective_permittivity(wg, AngularFrequency::from_hz(2e9));
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("2.998 GHz") != std::string::npos);
    }
  }
}

TEST_CASE("two forms of the effective permittivity agree") {
  qlink::testing::RandomScenarios rs(11);
  for (int i = 0; i < 1000; ++i) {
    const auto s = rs.next();
    const AngularFrequency w = s.signal.omega();
    const double r = cutoff_angular_frequency(s.waveguide) / w.rad_per_s();
    const double alt = s.waveguide.rel_permittivity * (1.0 - r * r);
    const double eff = effective_permittivity(s.waveguide, w);
    CHECK(std::abs(eff - alt) <= 1e-14 * s.waveguide.rel_permittivity);
    CHECK(eff > 0.0);
    CHECK(eff < s.waveguide.rel_permittivity);
  }
}

TEST_CASE("mode impedance") {
  WaveguideSpec wg;
  CHECK(mode_impedance(wg) == 377.0);
  wg.rel_permittivity = 4.0;
  CHECK(mode_impedance(wg) == 188.5);
  wg.rel_permittivity = 1.0;
  wg.rel_permeability = 4.0;
  CHECK(mode_impedance(wg) == 754.0);
}

TEST_CASE("group velocity") {
  const WaveguideSpec wg;
  CHECK(rel_close(group_velocity(wg, k10GHz), 286003337.6739147, 1e-13));
  CHECK(rel_close(group_velocity(wg, AngularFrequency::from_hz(1e15)), constants::kSpeedOfLight,
                  1e-9));
  const double wc = cutoff_angular_frequency(wg);
  CHECK(group_velocity(wg, AngularFrequency{wc * (1 + 1e-10)}) < 1e-4 * constants::kSpeedOfLight);

  SUBCASE("increasing in omega and bounded") {
    WaveguideSpec filled;
    filled.rel_permittivity = 2.2;
    filled.rel_permeability = 1.3;
    const double bound =
        constants::kSpeedOfLight / std::sqrt(filled.rel_permittivity * filled.rel_permeability);
    const double wcf = cutoff_angular_frequency(filled);
    double previous = 0.0;
    for (int i = 1; i <= 400; ++i) {
      const double v = group_velocity(filled, AngularFrequency{wcf * (1.0 + 0.01 * i)});
      CHECK(v > previous);
      CHECK(v < bound);
      previous = v;
    }
  }
}

TEST_CASE("surface resistance") {
  const ConductorModel al = ConductorModel::aluminium();
  CHECK(rel_close(surface_resistance(al, k10GHz, 293.15), 0.032232060545302, 1e-13));

  ConductorModel perfect = al;
  perfect.conductivity_ref = std::numeric_limits<double>::infinity();
  CHECK(surface_resistance(perfect, k10GHz, 293.15) == 0.0);

  ConductorModel quad = al;
  quad.conductivity_ref *= 4.0;
  CHECK(rel_close(surface_resistance(quad, k10GHz, 293.15),
                  surface_resistance(al, k10GHz, 293.15) / 2, 1e-15));
}

TEST_CASE("conductor temperature model") {
  const ConductorModel al = ConductorModel::aluminium();
  CHECK(al.conductivity(293.15) == 3.8e7);
  CHECK(al.conductivity(293.0) == 3.8e7);
  CHECK(rel_close(al.conductivity(78.0), 5 * 3.8e7, 1e-15));
  CHECK(rel_close(al.conductivity(4.2), 5 * 3.8e7, 1e-15));
  CHECK(rel_close(al.conductivity(200.0), 58108108.108108108, 1e-12));

  double previous = std::numeric_limits<double>::infinity();
  for (double t = 0.5; t < 600.0; t += 0.5) {
    const double s = al.conductivity(t);
    CHECK(s > 0.0);
    CHECK(s <= previous);
    previous = s;
  }

  ConductorModel bad = al;
  bad.cryo_factor = 0.5;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = al;
  bad.knee_temperature = 400.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("attenuation, textbook model") {
  const WaveguideSpec wg;
  const double alpha = attenuation(wg, k10GHz, AttenuationModel::Textbook);
  CHECK(rel_close(alpha, 0.0078138164550206473, 1e-12));
  CHECK(rel_close(alpha * 10 / std::log(10.0), 0.033934973690202959, 1e-12));

  SUBCASE("strictly decreasing in conductivity") {
    double previous = std::numeric_limits<double>::infinity();
    for (double sigma = 1e5; sigma < 1e9; sigma *= 1.7) {
      WaveguideSpec g = wg;
      g.wall.conductivity_ref = sigma;
      const double a = attenuation(g, k10GHz, AttenuationModel::Textbook);
      CHECK(a < previous);
      previous = a;
    }
  }

  SUBCASE("diverges approaching cutoff") {
    const double wc = cutoff_angular_frequency(wg);
    double previous = 0.0;
    for (double eps : {1e-1, 1e-2, 1e-4, 1e-6, 1e-8}) {
      const double a = attenuation(wg, AngularFrequency{wc * (1 + eps)}, AttenuationModel::Textbook);
      CHECK(a > previous);
      previous = a;
    }
    CHECK(previous > 1e3 * alpha);
  }
}

TEST_CASE("attenuation, literal model is rejected for standard guides") {
  const WaveguideSpec wg;
  CHECK(error_code_of([&] { (void)attenuation(wg, k10GHz, AttenuationModel::Literal); }) ==
        ErrorCode::NonphysicalAttenuation);

  qlink::testing::RandomScenarios rs(5);
  for (int i = 0; i < 300; ++i) {
    const auto s = rs.next();
    const double r = cutoff_angular_frequency(s.waveguide) / s.signal.omega().rad_per_s();
    REQUIRE(s.waveguide.height / s.waveguide.width * r * r < 1.0);
    CHECK(error_code_of([&] {
            (void)attenuation(s.waveguide, s.signal.omega(), AttenuationModel::Literal);
          }) == ErrorCode::NonphysicalAttenuation);
  }
}

TEST_CASE("lossless wall gives zero attenuation under both models") {
  WaveguideSpec wg;
  wg.wall.conductivity_ref = std::numeric_limits<double>::infinity();
  for (auto model : {AttenuationModel::Textbook, AttenuationModel::Literal}) {
    const double a = attenuation(wg, k10GHz, model);
    CHECK(a == 0.0);
    CHECK_FALSE(std::signbit(a));
    CHECK(decay_rate(wg, k10GHz, model) == 0.0);
  }
}

TEST_CASE("decay rate") {
  const WaveguideSpec wg;
  CHECK(rel_close(decay_rate(wg, k10GHz, AttenuationModel::Textbook), 2234777.5861072613, 1e-12));

  qlink::testing::RandomScenarios rs(99);
  for (int i = 0; i < 1000; ++i) {
    const auto s = rs.next();
    const ModeParams p = mode_params(s.waveguide, s.signal.omega(), AttenuationModel::Textbook);
    const double t = s.waveguide.length / p.v_g;
    CHECK(rel_close(p.Gamma * t, p.alpha * s.waveguide.length, 1e-14));
    CHECK(p.omega > p.omega_c);
    CHECK(p.alpha >= 0.0);
    CHECK(p.v_g > 0.0);
    CHECK(p.v_g < constants::kSpeedOfLight /
                    std::sqrt(s.waveguide.rel_permittivity * s.waveguide.rel_permeability));
  }
}

TEST_CASE("input validation") {
  WaveguideSpec wg;
  wg.height = 0.06;
  CHECK(error_code_of([&] { wg.validate(); }) == ErrorCode::InvalidSpec);
  wg = {};
  wg.rel_permittivity = 0.5;
  CHECK_THROWS_AS(wg.validate(), Error);
  wg = {};
  wg.length = -1.0;
  CHECK_THROWS_AS(wg.validate(), Error);
  wg = {};
  wg.temperature = 0.0;
  CHECK_THROWS_AS(wg.validate(), Error);
  wg = {};
  CHECK_NOTHROW(wg.validate());
  CHECK(attenuation_model_from_string("literal") == AttenuationModel::Literal);
  CHECK_THROWS_AS(attenuation_model_from_string("pozar"), Error);
}
