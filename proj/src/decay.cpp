#include "ddmag/decay.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <eigen3/unsupported/Eigen/MatrixFunctions>

namespace ddmag {

using std::numbers::pi;

CumulantCoeffs cumulant_coeffs(double sigma, double tau_c, int k, int n,
                               double period) {
  if (sigma < 0 || tau_c <= 0 || k < 1 || n < 0 || period <= 0) {
    throw std::invalid_argument("cumulant_coeffs: bad parameters");
  }
  CumulantCoeffs c;
  c.sigma = sigma;
  c.tau_c = tau_c;
  c.k = k;
  c.n = n;
  c.period = period;
  if (n == 0 || sigma == 0.0) return c;

  const double T = period;
  const double u = T / (2.0 * tau_c);
  const double v = n * T / tau_c;
  const double eu = std::exp(-u);
  const double ev = std::exp(-v);
  const double c2 = 16.0 * pi * pi * k * k * tau_c * tau_c;
  const double d0 = c2 + T * T;
  const double one_plus_eu2 = (1.0 + eu) * (1.0 + eu);

  const double p1 = c2 * T + 4.0 * c2 * tau_c * std::tanh(T / (4.0 * tau_c)) +
                    T * T * T;
  const double r = (eu * (T * T - c2) + (c2 + T * T) * (1.0 + eu * eu) / 2.0) /
                   one_plus_eu2;
  const double a_pos = 2.0 * n * p1;
  const double a_neg = 4.0 * tau_c * (1.0 - ev) * r;
  c.alpha = sigma * sigma * T * T * tau_c / (d0 * d0) * (a_pos - a_neg);

  const double btil =
      c2 * (1.0 - eu) *
          ((4.0 * n - 1.0) + (4.0 * n + 1.0) * eu + ev * (1.0 - eu)) /
          one_plus_eu2 +
      T * T * (1.0 - ev);
  c.beta = -2.0 * sigma * sigma * T * T * tau_c * tau_c / (d0 * d0) * btil;

  const double gtil = 8.0 * pi * k * T * tau_c * (1.0 - ev) * std::tanh(u / 2.0);
  c.gamma_c =
      2.0 * sigma * sigma * T * T * tau_c * tau_c / (d0 * d0) * std::hypot(gtil, btil);

  c.cancellation = std::abs(a_pos - a_neg) < 1e-8 * (std::abs(a_pos) + std::abs(a_neg));
  return c;
}

double envelope_re(const CumulantCoeffs& c) {
  if (!std::isfinite(c.alpha) || !std::isfinite(c.beta) || !std::isfinite(c.gamma_c)) {
    throw std::invalid_argument("envelope_re: non-finite coefficients");
  }
  if (std::abs(c.gamma_c) < 1e-6) {
    return std::exp(-c.alpha) * (1.0 + c.beta);
  }
  return std::exp(-c.alpha) *
         (std::cosh(c.gamma_c) + c.beta / c.gamma_c * std::sinh(c.gamma_c));
}

NumericCumulant cumulant_numeric(double sigma, double tau_c, int k, int n,
                                 double omega, int points_per_period) {
  if (sigma < 0 || tau_c <= 0 || k < 1 || n < 0 || omega <= 0) {
    throw std::invalid_argument("cumulant_numeric: bad parameters");
  }
  if (points_per_period < 512) {
    throw std::invalid_argument("cumulant_numeric: need >= 512 points per period");
  }
  const double T = 4.0 * pi * k / omega;
  const int N = points_per_period;
  const double dt = T / N;

  // toggling-frame noise direction n(t) = (0, SW sin(Omega t), cos(Omega t))
  std::vector<double> ny(N), nz(N), decay_to(N);
  for (int i = 0; i < N; ++i) {
    const double t = (i + 0.5) * dt;
    ny[i] = square_wave(t, T) * std::sin(omega * t);
    nz[i] = std::cos(omega * t);
    decay_to[i] = std::exp(-t / tau_c);
  }

  // kernel K(t1, t2) = 4 [ (n1.n2) I - n2 n1^T ], G(t1 - t2) correlator
  Eigen::Matrix3d tri = Eigen::Matrix3d::Zero();
  Eigen::Matrix3d box = Eigen::Matrix3d::Zero();
  const double s2 = sigma * sigma;

  auto accumulate = [&](Eigen::Matrix3d& m, int i, int j, double g, double w) {
    const double dot = ny[i] * ny[j] + nz[i] * nz[j];
    const double gw = g * w;
    m(0, 0) += 4.0 * gw * dot;
    m(1, 1) += 4.0 * gw * (dot - ny[j] * ny[i]);
    m(2, 2) += 4.0 * gw * (dot - nz[j] * nz[i]);
    m(1, 2) += -4.0 * gw * ny[j] * nz[i];
    m(2, 1) += -4.0 * gw * nz[j] * ny[i];
  };

  // triangle: 0 < t2 < t1 < T, half weight on the diagonal
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double g = s2 * decay_to[i] / decay_to[j];
      const double w = (j == i) ? 0.5 * dt * dt : dt * dt;
      accumulate(tri, i, j, g, w);
    }
  }

  Eigen::Matrix3d m = double(n) * tri;
  if (n > 1) {
    // box: t1 in a later period, t2 in the base period (t1 always later)
    for (int i = 0; i < N; ++i) {
      for (int j = 0; j < N; ++j) {
        const double g = s2 * decay_to[i] / decay_to[j];
        accumulate(box, i, j, g, dt * dt);
      }
    }
    for (int j = 1; j < n; ++j) {
      m += double(n - j) * std::exp(-j * T / tau_c) * box;
    }
  }

  NumericCumulant out;
  out.generator = m;
  const Eigen::Matrix3d propagator = (-m).exp();
  out.signal = propagator(2, 2);
  return out;
}

double gamma2_long_tc(Scheme scheme, double sigma, double tau_c, int k) {
  if (sigma < 0 || tau_c <= 0 || k < 1) {
    throw std::invalid_argument("gamma2_long_tc: bad parameters");
  }
  switch (scheme) {
    case Scheme::RotaryEcho:
      return std::cbrt(3.0 * sigma * sigma / (8.0 * k * k * pi * pi * tau_c));
    case Scheme::PDD:
      return std::cbrt(2.0 * sigma * sigma / (3.0 * tau_c));
    default:
      throw std::invalid_argument(
          "gamma2_long_tc: cubic-decay rate defined for re and pdd only");
  }
}

double envelope_pdd(double t, int n, double t2) {
  if (t < 0 || n < 1 || t2 <= 0) {
    throw std::invalid_argument("envelope_pdd: bad parameters");
  }
  const double x = t / t2;
  return std::exp(-x * x * x / (double(n) * n));
}

}  // namespace ddmag
