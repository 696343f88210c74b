#pragma once

#include <eigen3/Eigen/Dense>

#include "ddmag/sequences.hpp"

namespace ddmag {

// Second-cumulant coefficients of the ensemble-averaged rotary-echo signal
// under stationary OU dephasing with dispersion sigma and correlation time
// tau_c, evaluated over n cycles of period T.
struct CumulantCoeffs {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma_c = 0.0;  // non-negative root
  // provenance
  double sigma = 0.0;
  double tau_c = 0.0;
  int k = 0;
  int n = 0;
  double period = 0.0;
  // set when a difference of large terms loses more than 8 digits
  bool cancellation = false;
};

// Closed forms for alpha, beta, gamma_c, regrouped so that every exponential
// carries a negative argument (finite up to n*T/tau_c ~ 1e3 and beyond).
CumulantCoeffs cumulant_coeffs(double sigma, double tau_c, int k, int n,
                               double period);

// D_R = e^{-alpha} (cosh gamma_c + beta/gamma_c sinh gamma_c); the removable
// singularity at gamma_c -> 0 switches to the series e^{-alpha} (1 + beta)
// below |gamma_c| < 1e-6.
double envelope_re(const CumulantCoeffs& c);

// Brute-force oracle: assembles the second-cumulant Bloch generator by double
// quadrature of the toggling-frame noise correlator over one period
// (triangle + box decomposition, exact periodic cross-term weights
// (n-j) e^{-jT/tau_c}) and exponentiates it.
struct NumericCumulant {
  Eigen::Matrix3d generator;  // acts on the Bloch vector, r(t) = exp(-M) r(0)
  double signal = 0.0;        // z-survival contrast, equals D_R analytically
};

NumericCumulant cumulant_numeric(double sigma, double tau_c, int k, int n,
                                 double omega, int points_per_period = 4096);

// Long-correlation cubic decay rates, rad/s:
//   RotaryEcho  (3 sigma^2 / (8 k^2 pi^2 tau_c))^{1/3}
//   PDD         (2 sigma^2 / (3 tau_c))^{1/3}
double gamma2_long_tc(Scheme scheme, double sigma, double tau_c, int k);

// Phenomenological pulsed-sequence envelope exp(-t^3 / (n^2 T2^3)).
double envelope_pdd(double t, int n, double t2);

}  // namespace ddmag
