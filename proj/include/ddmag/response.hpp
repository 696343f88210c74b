#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ddmag/sequences.hpp"

namespace ddmag {

// Period-averaged field factor bbar/b at the matched harmonic m (odd, RE
// constraint omega*T = 2*m*pi):
//   RotaryEcho        4k/(pi*(4k^2 - m^2)),  m = 2k-1 at the optimum
//   PDD               2/pi
//   Constant/SpinLock 1/2
double avg_field_factor(const SequenceSpec& seq, int harmonic_m);

// Closed-form weight function of a 2*pi*k rotary echo,
//   W(omega) = (4k-1)/n / |(4k)^2 - (T omega/pi)^2| * |sin(n T omega) tan(T omega/4)|,
// with the removable 0*inf poles at T*omega = 2*pi*(2j-1) evaluated through
// their analytic limit inside a guard window of width 1e-6 in T*omega.
double weight_re(double omega, int k, int n, double period);

// Quadrature weight |int cos(omega t + phi*) f(t) dt| over [0, n*T],
// normalized at the scheme's matched frequency; composite Simpson with
// switch points on grid nodes.  Oracle for weight_re and the only
// implementation for PDD / Constant.
double weight_numeric(const SequenceSpec& seq, double omega,
                      int points_per_period = 4096);

struct WeightProfile {
  std::vector<double> omega;  // rad/s
  std::vector<double> w;
  SequenceSpec seq;
};

WeightProfile weight_profile(const SequenceSpec& seq, double omega_lo,
                             double omega_hi, std::size_t count);

struct PassBand {
  int p = 0;              // band index, p >= 1-k
  double center = 0.0;    // rad/s
  double height = 0.0;    // pole-limit weight value
};

// Pass-band centers omega = 2*pi*(2(k+p)-1)/T for p = 1-k .. p_max, with
// heights from the weight_re pole limits.
std::vector<PassBand> passbands(int k, double period, int n, int p_max);

// FWHM of the main pass-band located by bisection; approximately
// 7.58/(2 n T) for every scheme.
double fwhm_main_peak(const SequenceSpec& seq);

// Sensitivity penalty for a sub-optimal field phase: csc(phi) for
// PDD/Constant/SpinLock, sec(phi) for RotaryEcho.  An unset phi means the
// field phase is unknown and averages to sqrt(2).  Throws std::domain_error
// at a divergence.
double phase_penalty(Scheme scheme, std::optional<double> phi);

}  // namespace ddmag
