#include <cmath>

#include "doctest.h"
#include "qlink/error.hpp"
#include "qlink/receiver.hpp"
#include "test_support.hpp"

using namespace qlink;
using qlink::testing::rel_close;

namespace {

const AngularFrequency k10GHz = AngularFrequency::from_hz(10e9);

double log_coefficient(const AntennaSpec& a, const WaveguideSpec& wg) {
  return std::log(std::abs(lc_coupling_coefficient(a, wg, k10GHz)));
}

}  // namespace

TEST_CASE("coupling efficiency reference values") {
  const WaveguideSpec wg;
  const AntennaSpec full{wg.width, wg.height, 1e-12, 1.0};
  CHECK(rel_close(coupling_eta(full, wg, k10GHz), 0.11663343577800445, 1e-12));

  const AntennaSpec small{0.01, 0.005, 1e-12, 1.0};
  CHECK(rel_close(coupling_eta(small, wg, k10GHz), 0.00018661349724480712, 1e-12));
}

TEST_CASE("coupling efficiency structure") {
  const WaveguideSpec wg;
  AntennaSpec a{0.01, 0.005, 1e-12, 1.0};
  const double eta = coupling_eta(a, wg, k10GHz);

  AntennaSpec doubled = a;
  doubled.width *= 2;
  doubled.height *= 2;
  CHECK(rel_close(coupling_eta(doubled, wg, k10GHz), 16 * eta, 1e-14));

  AntennaSpec zero = a;
  zero.width = 0.0;
  CHECK(coupling_eta(zero, wg, k10GHz) == 0.0);
  zero = a;
  zero.height = 0.0;
  CHECK(coupling_eta(zero, wg, k10GHz) == 0.0);
  CHECK(std::abs(lc_coupling_coefficient(zero, wg, k10GHz)) == 0.0);
}

TEST_CASE("coupling efficiency monotonicity") {
  const WaveguideSpec wg;
  const AntennaSpec a{0.01, 0.005, 1e-12, 1.0};
  const double eta = coupling_eta(a, wg, k10GHz);
  for (double f : {1.01, 1.3, 2.0}) {
    AntennaSpec b = a;
    b.width *= f;
    CHECK(coupling_eta(b, wg, k10GHz) > eta);
    b = a;
    b.height *= f;
    CHECK(coupling_eta(b, wg, k10GHz) > eta);
    b = a;
    b.capacitance *= f;
    CHECK(coupling_eta(b, wg, k10GHz) > eta);
    WaveguideSpec longer = wg;
    longer.length *= f;
    CHECK(coupling_eta(a, longer, k10GHz) < eta);
  }
}

TEST_CASE("coupling errors") {
  WaveguideSpec wg;
  AntennaSpec a{0.01, 0.005, 1e-6, 1.0};
  try {
    (void)coupling_eta(a, wg, k10GHz);
    FAIL("expected EtaOutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EtaOutOfRange);
  }
  CHECK_THROWS_AS(lc_coupling_coefficient(a, wg, k10GHz), Error);

  a.capacitance = 1e-12;
  wg.length = 0.0;
  CHECK(std::isinf(coupling_eta_unbounded(a, wg, k10GHz)));
  CHECK_THROWS_AS(coupling_eta(a, wg, k10GHz), Error);

  wg = {};
  a.width = 0.06;
  CHECK_THROWS_AS(coupling_eta(a, wg, k10GHz), Error);
  a = {0.01, 0.005, 0.0, 1.0};
  CHECK_THROWS_AS(coupling_eta(a, wg, k10GHz), Error);
  CHECK_THROWS_AS(coupling_eta({0.01, 0.005, 1e-12, 1.0}, wg, AngularFrequency::from_hz(1e9)),
                  Error);
}

TEST_CASE("coefficient squared equals eta") {
  qlink::testing::RandomScenarios rs(7);
  int checked = 0;
  for (int i = 0; i < 2000; ++i) {
    const auto s = rs.next();
    const AngularFrequency w = s.signal.omega();
    const double eta = coupling_eta_unbounded(*s.antenna, s.waveguide, w);
    if (eta > 1.0) continue;
    const std::complex<double> k = lc_coupling_coefficient(*s.antenna, s.waveguide, w);
    CHECK(k.real() == 0.0);
    CHECK(rel_close(std::norm(k), eta, 1e-10));

    const std::complex<double> a{0.3, -1.7};
    CHECK(induced_voltage_photon_map(a, *s.antenna, s.waveguide, w) == k * a);
    ++checked;
  }
  CHECK(checked > 1500);
}

TEST_CASE("coefficient scaling by finite differences") {
  const WaveguideSpec wg;
  const AntennaSpec a{0.01, 0.005, 1e-12, 1.0};
  const double h = 1e-5;

  auto slope = [&](auto&& scale) {
    AntennaSpec up = a, down = a;
    scale(up, std::exp(h));
    scale(down, std::exp(-h));
    return (log_coefficient(up, wg) - log_coefficient(down, wg)) / (2 * h);
  };
  CHECK(slope([](AntennaSpec& x, double f) { x.width *= f; }) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(slope([](AntennaSpec& x, double f) { x.height *= f; }) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(slope([](AntennaSpec& x, double f) { x.capacitance *= f; }) ==
        doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("detection") {
  const WaveguideSpec wg;
  const SignalSpec sig{10e9, 320000.0};
  const AntennaSpec a{0.01, 0.005, 1e-12, 1.0};
  const TransportResult tr = propagate(sig, wg, AttenuationModel::Textbook);
  const DetectionResult d = detect(tr, a, wg, sig.omega());

  CHECK(d.Ns == d.eta * tr.Ms);
  CHECK(d.Nn == d.eta * tr.Mn);
  CHECK(rel_close(d.Ns / d.Nn, tr.Ms / tr.Mn, 1e-15));
  CHECK(rel_close(d.inductance, 2.5330295910584443e-10, 1e-13));
  const double w = sig.omega().rad_per_s();
  CHECK(std::abs(d.inductance * a.capacitance * w * w - 1.0) <= 4e-16);
  CHECK_FALSE(d.eta_warning());

  const AntennaSpec big{wg.width, wg.height, 1e-12, 1.0};
  CHECK(detect(tr, big, wg, sig.omega()).eta_warning());
}

TEST_CASE("detector preserves the SNR") {
  qlink::testing::RandomScenarios rs(31);
  for (int i = 0; i < 500; ++i) {
    const auto s = rs.next();
    const AngularFrequency w = s.signal.omega();
    if (coupling_eta_unbounded(*s.antenna, s.waveguide, w) > 1.0) continue;
    const TransportResult tr = propagate(s.signal, s.waveguide, AttenuationModel::Textbook);
    const DetectionResult d = detect(tr, *s.antenna, s.waveguide, w);
    CHECK(rel_close(d.Ns / d.Nn, tr.Ms / tr.Mn, 1e-12));
  }
}
