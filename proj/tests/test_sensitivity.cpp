#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ddmag/sensitivity.hpp"

using namespace ddmag;
using std::numbers::pi;

TEST_CASE("ideal sensitivity ratios through the field-factor duality") {
  SensorParams sensor;
  const double t = 1e-4;
  const double base = eta_base(t, sensor);
  CHECK(eta_ideal(Scheme::PDD, 1, 0, t, sensor) / base == doctest::Approx(1.0));
  CHECK(eta_ideal(Scheme::RotaryEcho, 1, 0, t, sensor) / base ==
        doctest::Approx(1.5).epsilon(1e-12));
  CHECK(eta_ideal(Scheme::RotaryEcho, 4, 0, t, sensor) / base ==
        doctest::Approx(1.875).epsilon(1e-12));
  CHECK(eta_ideal(Scheme::RotaryEcho, 4, 1, t, sensor) / base ==
        doctest::Approx(7.875).epsilon(1e-12));
  CHECK(eta_ideal(Scheme::Constant, 1, 0, t, sensor) / base ==
        doctest::Approx(4.0 / pi).epsilon(1e-12));
  CHECK(eta_ideal(Scheme::SpinLock, 1, 0, t, sensor) ==
        doctest::Approx(eta_ideal(Scheme::Constant, 1, 0, t, sensor)));
}

TEST_CASE("optimal interrogation time") {
  CHECK(optimal_time(1, 500e-6) == doctest::Approx(500e-6 * std::cbrt(1.0 / 6.0)));
  CHECK(optimal_time(1, 500e-6) == doctest::Approx(275.2e-6).epsilon(0.001));
  CHECK(optimal_time(8, 1.0) / optimal_time(1, 1.0) == doctest::Approx(4.0));
  // grid verification
  const double t2 = 500e-6;
  double best = 0.0, best_eta = 1e300;
  for (int i = 1; i <= 4000; ++i) {
    const double t = 2.0 * t2 * i / 4000.0;
    const double eta = std::exp(t * t * t / (t2 * t2 * t2)) / std::sqrt(t);
    if (eta < best_eta) { best_eta = eta; best = t; }
  }
  CHECK(best == doctest::Approx(optimal_time(1, t2)).epsilon(0.002));
  CHECK_THROWS_AS(optimal_time(0, 1.0), std::invalid_argument);
}

TEST_CASE("noiseless matched operation reproduces the ideal value") {
  const SequenceSpec seq = SequenceSpec::rotary_echo(2.0 * pi * 1000.0, 1, 4);
  SensorParams sensor;
  DecayModel none;
  const double omega = matched_frequencies(seq).omega_opt;
  const auto r = eta_effective(seq, seq.total_time(), omega, 0.0, sensor, none);
  CHECK(r.phase_factor == doctest::Approx(1.0));
  CHECK(r.weight == doctest::Approx(1.0));
  CHECK(r.envelope == 1.0);
  CHECK(r.eta_effective == doctest::Approx(r.eta_ideal));
  CHECK(r.detectable);
}

TEST_CASE("envelope division: D = 1/e costs a factor e") {
  const SequenceSpec seq = SequenceSpec::pdd(500e-6, 1);
  SensorParams sensor;
  DecayModel model;
  model.kind = DecayModel::Kind::T2;
  model.t2 = 500e-6;
  const double omega = matched_frequencies(seq).omega_opt;
  const auto r = eta_effective(seq, seq.total_time(), omega, pi / 2, sensor, model);
  CHECK(r.envelope == doctest::Approx(std::exp(-1.0)));
  CHECK(r.eta_effective == doctest::Approx(std::exp(1.0) * r.eta_ideal));
}

TEST_CASE("low-band operation costs the closed rational factor") {
  SensorParams sensor;
  DecayModel none;
  for (int k : {1, 2, 4, 8}) {
    const SequenceSpec seq = SequenceSpec::rotary_echo(2.0 * pi * 1000.0, k, 2);
    const MatchedFrequencies m = matched_frequencies(seq);
    const auto opt = eta_effective(seq, seq.total_time(), m.omega_opt, 0.0,
                                   sensor, none);
    const auto low = eta_effective(seq, seq.total_time(), m.omega_low, 0.0,
                                   sensor, none);
    const double expected = (4.0 * k * k - 1.0) / (4.0 * k - 1.0);
    CHECK(low.eta_effective / opt.eta_effective ==
          doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("stop-band frequencies are flagged as non-detectable") {
  const SequenceSpec seq = SequenceSpec::constant_drive(2.0 * pi * 1000.0, 2);
  SensorParams sensor;
  DecayModel none;
  // phi = pi/2 is the penalty-optimal phase for the constant drive
  const auto r = eta_effective(seq, seq.total_time(), 3.0 * seq.omega, pi / 2,
                               sensor, none);
  CHECK_FALSE(r.detectable);
  CHECK(std::isinf(r.eta_effective));
}

TEST_CASE("unknown phase costs sqrt(2) for every scheme") {
  SensorParams sensor;
  DecayModel none;
  const SequenceSpec seq = SequenceSpec::rotary_echo(2.0 * pi * 1000.0, 1, 2);
  const double omega = matched_frequencies(seq).omega_opt;
  const auto r = eta_effective(seq, seq.total_time(), omega, std::nullopt,
                               sensor, none);
  CHECK(r.phase_factor == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("time scan shape: improve as 1/sqrt(t), then decay dominates") {
  ScanRequest req;
  req.axis = ScanAxis::Time;
  req.seq = SequenceSpec::pdd(20e-6, 1);
  req.phi = pi / 2;
  req.decay.kind = DecayModel::Kind::T2;
  req.decay.t2 = 500e-6;
  req.lo = 20e-6;
  req.hi = 1.2e-3;
  req.count = 60;
  const auto rows = scan(req);
  REQUIRE(rows.size() > 10);
  // find the minimum; it must be interior
  std::size_t arg = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].eta_effective < rows[arg].eta_effective) arg = i;
  }
  CHECK(arg > 0);
  CHECK(arg < rows.size() - 1);
  CHECK(rows.front().eta_effective > rows[arg].eta_effective);
  CHECK(rows.back().eta_effective > rows[arg].eta_effective);
}

TEST_CASE("k scan tracks the matched-frequency formulas") {
  ScanRequest req;
  req.axis = ScanAxis::K;
  req.seq = SequenceSpec::rotary_echo(2.0 * pi * 1000.0, 1, 2);
  req.phi = 0.0;
  req.lo = 1;
  req.hi = 6;
  req.count = 6;
  const auto rows = scan(req);
  REQUIRE(rows.size() == 6);
  double prev_opt = 0.0;
  for (const auto& r : rows) {
    CHECK(r.matched_freq > prev_opt);  // omega_opt grows toward Omega
    prev_opt = r.matched_freq;
  }
  CHECK(rows.back().matched_freq < req.seq.omega);
}

TEST_CASE("scan axis names round trip") {
  for (auto a : {ScanAxis::Time, ScanAxis::Frequency, ScanAxis::K, ScanAxis::N}) {
    CHECK(scan_axis_from_name(scan_axis_name(a)) == a);
  }
  CHECK_THROWS_AS(scan_axis_from_name("bogus"), std::invalid_argument);
}
