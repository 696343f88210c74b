#include "ddmag/sequences.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ddmag {

using std::numbers::pi;

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::PDD: return "pdd";
    case Scheme::Constant: return "constant";
    case Scheme::SpinLock: return "spinlock";
    case Scheme::RotaryEcho: return "re";
  }
  throw std::invalid_argument("scheme_name: bad enum value");
}

Scheme scheme_from_name(const std::string& name) {
  if (name == "pdd") return Scheme::PDD;
  if (name == "constant") return Scheme::Constant;
  if (name == "spinlock") return Scheme::SpinLock;
  if (name == "re") return Scheme::RotaryEcho;
  throw std::invalid_argument("unknown scheme '" + name + "'");
}

SequenceSpec SequenceSpec::rotary_echo(double omega, int k, int n) {
  if (omega <= 0) throw std::invalid_argument("rotary_echo: omega must be > 0");
  if (k < 1) throw std::invalid_argument("rotary_echo: k must be >= 1");
  if (n < 0) throw std::invalid_argument("rotary_echo: n must be >= 0");
  SequenceSpec s;
  s.scheme = Scheme::RotaryEcho;
  s.omega = omega;
  s.k = k;
  s.n = n;
  s.period = 4.0 * pi * k / omega;
  return s;
}

SequenceSpec SequenceSpec::constant_drive(double omega, int n) {
  if (omega <= 0) throw std::invalid_argument("constant_drive: omega must be > 0");
  if (n < 0) throw std::invalid_argument("constant_drive: n must be >= 0");
  SequenceSpec s;
  s.scheme = Scheme::Constant;
  s.omega = omega;
  s.k = 1;
  s.n = n;
  s.period = 2.0 * pi / omega;
  return s;
}

SequenceSpec SequenceSpec::spin_lock(double omega, int n) {
  SequenceSpec s = constant_drive(omega, n);
  s.scheme = Scheme::SpinLock;
  return s;
}

SequenceSpec SequenceSpec::pdd(double period, int n) {
  if (period <= 0) throw std::invalid_argument("pdd: period must be > 0");
  if (n < 0) throw std::invalid_argument("pdd: n must be >= 0");
  SequenceSpec s;
  s.scheme = Scheme::PDD;
  s.omega = 0.0;
  s.k = 1;
  s.n = n;
  s.period = period;
  return s;
}

void to_json(nlohmann::json& j, const SequenceSpec& s) {
  j = nlohmann::json{{"scheme", scheme_name(s.scheme)},
                     {"omega", s.omega},
                     {"k", s.k},
                     {"n", s.n},
                     {"period", s.period}};
}

void from_json(const nlohmann::json& j, SequenceSpec& s) {
  static const char* known[] = {"scheme", "omega", "k", "n", "period"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* key : known) ok = ok || it.key() == key;
    if (!ok) throw std::invalid_argument("SequenceSpec: unknown key '" + it.key() + "'");
  }
  const Scheme scheme = scheme_from_name(j.at("scheme").get<std::string>());
  const int n = j.at("n").get<int>();
  if (scheme == Scheme::PDD) {
    s = SequenceSpec::pdd(j.at("period").get<double>(), n);
    return;
  }
  const double omega = j.at("omega").get<double>();
  switch (scheme) {
    case Scheme::RotaryEcho:
      s = SequenceSpec::rotary_echo(omega, j.value("k", 1), n);
      break;
    case Scheme::Constant:
      s = SequenceSpec::constant_drive(omega, n);
      break;
    case Scheme::SpinLock:
      s = SequenceSpec::spin_lock(omega, n);
      break;
    default:
      throw std::invalid_argument("SequenceSpec: bad scheme");
  }
  if (j.contains("period")) {
    const double p = j.at("period").get<double>();
    if (std::abs(p - s.period) > 1e-12 * s.period) {
      throw std::invalid_argument(
          "SequenceSpec: explicit period contradicts the derived one");
    }
  }
}

double square_wave(double t, double period) {
  if (period <= 0) throw std::invalid_argument("square_wave: period must be > 0");
  double x = std::fmod(t, period);
  if (x < 0) x += period;
  return (x < 0.5 * period) ? 1.0 : -1.0;
}

namespace {
void check_window(const SequenceSpec& seq, double t) {
  const double slack = 1e-9 * seq.period;
  if (t < -slack || t > seq.total_time() + slack) {
    throw std::invalid_argument("time outside the sequence window [0, n*T]");
  }
}
}  // namespace

Mat2 control_field(const SequenceSpec& seq, double t) {
  check_window(seq, t);
  switch (seq.scheme) {
    case Scheme::RotaryEcho:
      return seq.omega * square_wave(t, seq.period) * spin_x();
    case Scheme::Constant:
    case Scheme::SpinLock:
      return seq.omega * spin_x();
    case Scheme::PDD:
      return Mat2::Zero();
  }
  throw std::invalid_argument("control_field: bad scheme");
}

std::vector<double> pdd_pulse_times(const SequenceSpec& seq) {
  if (seq.scheme != Scheme::PDD) {
    throw std::invalid_argument("pdd_pulse_times: not a PDD sequence");
  }
  std::vector<double> times;
  times.reserve(seq.n);
  for (int j = 0; j < seq.n; ++j) {
    times.push_back((2 * j + 1) * 0.5 * seq.period);
  }
  return times;
}

double filter_function(const SequenceSpec& seq, double t) {
  check_window(seq, t);
  switch (seq.scheme) {
    case Scheme::RotaryEcho:
      return square_wave(t, seq.period) * std::sin(seq.omega * t);
    case Scheme::PDD:
      return square_wave(t, seq.period);
    case Scheme::Constant:
    case Scheme::SpinLock:
      return std::cos(seq.omega * t);
  }
  throw std::invalid_argument("filter_function: bad scheme");
}

MatchedFrequencies matched_frequencies(const SequenceSpec& seq) {
  MatchedFrequencies m;
  switch (seq.scheme) {
    case Scheme::RotaryEcho:
      m.omega_low = seq.omega / (2.0 * seq.k);
      m.omega_opt = seq.omega * (2.0 * seq.k - 1.0) / (2.0 * seq.k);
      break;
    case Scheme::Constant:
    case Scheme::SpinLock:
      m.omega_low = m.omega_opt = seq.omega;
      break;
    case Scheme::PDD:
      m.omega_low = m.omega_opt = 2.0 * pi / seq.period;
      break;
  }
  return m;
}

double matched_phase(Scheme scheme) {
  return scheme == Scheme::PDD ? 0.5 * pi : 0.0;
}

}  // namespace ddmag
