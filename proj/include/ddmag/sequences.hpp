#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ddmag/spin.hpp"

namespace ddmag {

enum class Scheme { PDD, Constant, SpinLock, RotaryEcho };

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

// One decoupling sequence: scheme, Rabi frequency, echo index k (RE only),
// cycle count n, and the period T derived from them.
//   RotaryEcho        T = 4*pi*k/Omega
//   Constant/SpinLock T = 2*pi/Omega
//   PDD               T free, ideal pi pulses at odd multiples of T/2
struct SequenceSpec {
  Scheme scheme = Scheme::RotaryEcho;
  double omega = 0.0;   // Rabi angular frequency, rad/s (0 for PDD)
  int k = 1;            // echo index, RotaryEcho only
  int n = 1;            // cycle count
  double period = 0.0;  // seconds, derived except for PDD

  double total_time() const { return n * period; }

  static SequenceSpec rotary_echo(double omega, int k, int n);
  static SequenceSpec constant_drive(double omega, int n);
  static SequenceSpec spin_lock(double omega, int n);
  static SequenceSpec pdd(double period, int n);
};

void to_json(nlohmann::json& j, const SequenceSpec& s);
void from_json(const nlohmann::json& j, SequenceSpec& s);

// AC field to be sensed: b(t) = b*cos(omega*t + phi), entering as
// gamma*b(t)*S_z.
struct ACField {
  double b = 0.0;      // tesla
  double omega = 0.0;  // rad/s
  double phi = 0.0;    // rad
};

// +1 on [0, T/2), -1 on [T/2, T), periodic.
double square_wave(double t, double period);

// Instantaneous control Hamiltonian at time t (rad/s units).  For PDD the
// operator is zero; the pulses live in pdd_pulse_times().  Throws if t is
// outside [0, n*T].
Mat2 control_field(const SequenceSpec& seq, double t);

// Ideal pi-pulse instants for a PDD sequence: T/2, 3T/2, ..., (2n-1)T/2.
std::vector<double> pdd_pulse_times(const SequenceSpec& seq);

// Time-domain filter f(t) multiplying the sensed field in the accumulated
// phase integral.
//   RotaryEcho        SW(t)*sin(Omega*t)
//   PDD               SW(t) of the sequence period
//   Constant/SpinLock cos(Omega*t)
double filter_function(const SequenceSpec& seq, double t);

struct MatchedFrequencies {
  double omega_low = 0.0;  // rad/s
  double omega_opt = 0.0;  // rad/s
};

// Frequencies at which the scheme responds best: RE has the adjustable
// low band Omega/(2k) and the optimum Omega(2k-1)/(2k); Constant and
// SpinLock respond at Omega; PDD at 2*pi/T with phi = pi/2.
MatchedFrequencies matched_frequencies(const SequenceSpec& seq);

// Optimal field phase per scheme (phi maximizing the accumulated phase).
double matched_phase(Scheme scheme);

}  // namespace ddmag
