#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ddmag/decay.hpp"
#include "ddmag/dynamics.hpp"
#include "ddmag/response.hpp"
#include "ddmag/sequences.hpp"

namespace ddmag {

struct SensorParams {
  double gamma_g = 1.760859e11;  // gyromagnetic ratio, rad s^-1 T^-1 (electron)
  double readout_c = 0.03;       // readout-efficiency parameter, 0 < C <= 1
};

struct SensitivityResult {
  double axis_value = 0.0;
  double eta_ideal = 0.0;      // T Hz^{-1/2}
  double phase_factor = 1.0;   // Phi >= 1
  double weight = 1.0;         // W <= 1
  double envelope = 1.0;       // D <= 1
  double eta_effective = 0.0;  // eta_ideal * Phi / (W * D)
  double matched_freq = 0.0;   // rad/s
  bool detectable = true;      // false when W vanishes (stop band)
};

// Describes the decoherence model used for the envelope factor D:
// T2Model applies exp(-t^3/(n^2 T2^3)); OUModel uses the cumulant closed
// forms for rotary echo and a Monte Carlo estimate for Constant / SpinLock.
struct DecayModel {
  enum class Kind { None, T2, OU } kind = Kind::None;
  double t2 = 0.0;
  OUNoise noise;
  std::size_t mc_trajectories = 2000;
};

// Base shot-noise-limited sensitivity eta = pi / (2 gamma_g C sqrt(t)),
// scaled per scheme through the period-averaged field ratio
// b_bar(PDD) / b_bar(scheme) so the closed scheme ratios are never
// hard-coded twice.  harmonic_m selects the rotary-echo band (2k-1 at the
// optimum, 1 at the low band).
double eta_base(double t, const SensorParams& sensor);
double eta_ideal(Scheme scheme, int k, int harmonic_m, double t,
                 const SensorParams& sensor);

// Full degradation bookkeeping: eta_eff = eta_ideal * Phi(phi) / (W(omega) D(t)).
// t is rounded down to a whole number of cycles.  An unset phi averages the
// phase penalty to sqrt(2).
SensitivityResult eta_effective(const SequenceSpec& seq, double t, double omega,
                                std::optional<double> phi,
                                const SensorParams& sensor,
                                const DecayModel& decay, int harmonic_m = 0);

// Interrogation time minimizing exp(t^3/(n^2 T2^3)) / sqrt(t):
// t* = T2 (n^2/6)^{1/3}.
double optimal_time(int n, double t2);

enum class ScanAxis { Time, Frequency, K, N };

ScanAxis scan_axis_from_name(const std::string& name);
std::string scan_axis_name(ScanAxis axis);

struct ScanRequest {
  ScanAxis axis = ScanAxis::Time;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;  // grid points (integer axes round to unique ints)
  SequenceSpec seq;       // template; the scanned field is overridden
  std::optional<double> phi;
  SensorParams sensor;
  DecayModel decay;
  int harmonic_m = 0;     // 0 -> optimal band
};

std::vector<SensitivityResult> scan(const ScanRequest& request);

}  // namespace ddmag
