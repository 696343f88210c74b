#include "ddmag/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ddmag {

using std::numbers::pi;

double eta_base(double t, const SensorParams& sensor) {
  if (t <= 0) throw std::invalid_argument("eta_base: t must be > 0");
  if (sensor.gamma_g <= 0 || sensor.readout_c <= 0 || sensor.readout_c > 1.0) {
    throw std::invalid_argument("eta_base: bad sensor parameters");
  }
  return pi / (2.0 * sensor.gamma_g * sensor.readout_c * std::sqrt(t));
}

namespace {

int effective_harmonic(Scheme scheme, int k, int harmonic_m) {
  if (scheme != Scheme::RotaryEcho) return 1;
  return harmonic_m > 0 ? harmonic_m : 2 * k - 1;
}

}  // namespace

double eta_ideal(Scheme scheme, int k, int harmonic_m, double t,
                 const SensorParams& sensor) {
  SequenceSpec seq;
  seq.scheme = scheme;
  seq.k = std::max(k, 1);
  const int m = effective_harmonic(scheme, seq.k, harmonic_m);
  SequenceSpec pdd;
  pdd.scheme = Scheme::PDD;
  const double ratio = avg_field_factor(pdd, 1) / avg_field_factor(seq, m);
  return ratio * eta_base(t, sensor);
}

double optimal_time(int n, double t2) {
  if (n < 1 || t2 <= 0) throw std::invalid_argument("optimal_time: bad parameters");
  return t2 * std::cbrt(double(n) * n / 6.0);
}

namespace {

double envelope_for(const SequenceSpec& seq, double t, const DecayModel& model) {
  switch (model.kind) {
    case DecayModel::Kind::None:
      return 1.0;
    case DecayModel::Kind::T2:
      return envelope_pdd(t, std::max(seq.n, 1), model.t2);
    case DecayModel::Kind::OU:
      break;
  }
  switch (seq.scheme) {
    case Scheme::RotaryEcho:
      return envelope_re(cumulant_coeffs(model.noise.sigma, model.noise.tau_c,
                                         seq.k, seq.n, seq.period));
    case Scheme::PDD: {
      const double rate =
          gamma2_long_tc(Scheme::PDD, model.noise.sigma, model.noise.tau_c, 1);
      const double x = rate * t;
      return std::exp(-x * x * x / (double(seq.n) * seq.n));
    }
    case Scheme::Constant:
    case Scheme::SpinLock: {
      const TrajectoryResult r =
          mc_signal(seq, model.noise, std::max<std::size_t>(model.mc_trajectories, 100),
                    default_readout(seq.scheme));
      return std::clamp(2.0 * r.signal - 1.0, 1e-12, 1.0);
    }
  }
  throw std::invalid_argument("envelope: bad scheme");
}

}  // namespace

SensitivityResult eta_effective(const SequenceSpec& seq_in, double t,
                                double omega, std::optional<double> phi,
                                const SensorParams& sensor,
                                const DecayModel& decay, int harmonic_m) {
  if (t <= 0) throw std::invalid_argument("eta_effective: t must be > 0");
  const int cycles = static_cast<int>(std::floor(t / seq_in.period + 1e-9));
  if (cycles < 1) {
    throw std::invalid_argument("eta_effective: t shorter than one cycle");
  }
  SequenceSpec seq = seq_in;
  seq.n = cycles;
  const double t_used = seq.total_time();
  const int m = effective_harmonic(seq.scheme, seq.k, harmonic_m);

  SensitivityResult r;
  // always the optimal-band ideal eta; off-band operation is carried by the
  // weight factor (e.g. eta_low = eta_opt / W(omega_low) for rotary echo)
  r.eta_ideal = eta_ideal(seq.scheme, seq.k, 0, t_used, sensor);
  r.phase_factor = phase_penalty(seq.scheme, phi);
  r.weight = (seq.scheme == Scheme::RotaryEcho)
                 ? weight_re(omega, seq.k, seq.n, seq.period)
                 : weight_numeric(seq, omega);
  r.envelope = envelope_for(seq, t_used, decay);
  r.matched_freq = (seq.scheme == Scheme::RotaryEcho)
                       ? 2.0 * pi * m / seq.period
                       : matched_frequencies(seq).omega_opt;
  if (r.weight < 1e-12) {
    r.detectable = false;
    r.eta_effective = std::numeric_limits<double>::infinity();
  } else {
    r.eta_effective = r.eta_ideal * r.phase_factor / (r.weight * r.envelope);
  }
  return r;
}

ScanAxis scan_axis_from_name(const std::string& name) {
  if (name == "time") return ScanAxis::Time;
  if (name == "frequency") return ScanAxis::Frequency;
  if (name == "k") return ScanAxis::K;
  if (name == "n") return ScanAxis::N;
  throw std::invalid_argument("unknown scan axis '" + name + "'");
}

std::string scan_axis_name(ScanAxis axis) {
  switch (axis) {
    case ScanAxis::Time: return "time";
    case ScanAxis::Frequency: return "frequency";
    case ScanAxis::K: return "k";
    case ScanAxis::N: return "n";
  }
  throw std::invalid_argument("scan_axis_name: bad enum value");
}

std::vector<SensitivityResult> scan(const ScanRequest& request) {
  if (request.count < 1 || request.hi < request.lo) {
    throw std::invalid_argument("scan: bad grid");
  }
  std::vector<SensitivityResult> out;
  out.reserve(request.count);

  auto grid_value = [&](std::size_t i) {
    if (request.count == 1) return request.lo;
    return request.lo + (request.hi - request.lo) * i / (request.count - 1);
  };

  for (std::size_t i = 0; i < request.count; ++i) {
    const double x = grid_value(i);
    SequenceSpec seq = request.seq;
    double t = seq.total_time();
    double omega = 0.0;
    switch (request.axis) {
      case ScanAxis::Time:
        // fixed cycle count, the period stretches with the total time
        if (x <= 0) continue;
        t = x;
        seq.period = t / seq.n;
        if (seq.scheme == Scheme::RotaryEcho) {
          seq.omega = 4.0 * pi * seq.k / seq.period;
        } else if (seq.scheme != Scheme::PDD) {
          seq.omega = 2.0 * pi / seq.period;
        }
        break;
      case ScanAxis::Frequency:
        omega = x;
        break;
      case ScanAxis::K: {
        const int k = std::max(1, static_cast<int>(std::lround(x)));
        if (!out.empty() && out.back().axis_value == double(k)) continue;
        seq = SequenceSpec::rotary_echo(request.seq.omega, k, request.seq.n);
        t = seq.total_time();
        break;
      }
      case ScanAxis::N: {
        const int n = std::max(1, static_cast<int>(std::lround(x)));
        if (!out.empty() && out.back().axis_value == double(n)) continue;
        seq.n = n;
        t = seq.total_time();
        break;
      }
    }
    if (omega <= 0.0) {
      const int m = effective_harmonic(seq.scheme, seq.k, request.harmonic_m);
      omega = (seq.scheme == Scheme::RotaryEcho) ? 2.0 * pi * m / seq.period
                                                 : matched_frequencies(seq).omega_opt;
    }
    SensitivityResult r = eta_effective(seq, t, omega, request.phi,
                                        request.sensor, request.decay,
                                        request.harmonic_m);
    switch (request.axis) {
      case ScanAxis::Time: r.axis_value = t; break;
      case ScanAxis::Frequency: r.axis_value = omega; break;
      case ScanAxis::K: r.axis_value = double(seq.k); break;
      case ScanAxis::N: r.axis_value = double(seq.n); break;
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace ddmag
