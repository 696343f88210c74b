#include "ddmag/response.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace ddmag {

using std::numbers::pi;
using std::numbers::sqrt2;

double avg_field_factor(const SequenceSpec& seq, int harmonic_m) {
  switch (seq.scheme) {
    case Scheme::RotaryEcho: {
      if (harmonic_m < 1 || harmonic_m % 2 == 0) {
        throw std::invalid_argument(
            "avg_field_factor: rotary echo requires a positive odd harmonic");
      }
      const double k = seq.k;
      const double m = harmonic_m;
      return std::abs(4.0 * k / (pi * (4.0 * k * k - m * m)));
    }
    case Scheme::PDD:
      return 2.0 / pi;
    case Scheme::Constant:
    case Scheme::SpinLock:
      return 0.5;
  }
  throw std::invalid_argument("avg_field_factor: bad scheme");
}

double weight_re(double omega, int k, int n, double period) {
  if (omega <= 0) throw std::invalid_argument("weight_re: omega must be > 0");
  if (k < 1 || n < 1 || period <= 0) {
    throw std::invalid_argument("weight_re: bad sequence parameters");
  }
  const double x = period * omega / pi;  // T*omega in units of pi
  const double denom = std::abs(16.0 * k * k - x * x);
  // nearest tangent pole T*omega = 2*pi*(2j-1), j >= 1
  const long j = std::lround((x / 2.0 + 1.0) / 2.0);
  if (j >= 1) {
    const double eps = period * omega - 2.0 * pi * (2.0 * j - 1.0);
    if (std::abs(eps) < 1e-6) {
      // sin(n T w) tan(T w / 4) -> 4n as eps -> 0; O(eps^2) beyond
      return 4.0 * (4.0 * k - 1.0) / denom;
    }
  }
  const double osc = std::abs(std::sin(n * period * omega) *
                              std::tan(period * omega / 4.0));
  return (4.0 * k - 1.0) / n * osc / denom;
}

namespace {

// integral of cos(omega t + phi) * f(t) over [0, n*T] by composite Simpson,
// one smooth panel per half period so switch points sit on panel edges
double phase_integral(const SequenceSpec& seq, double omega, double phi,
                      int points_per_period) {
  const int per_half = std::max(2, points_per_period / 2 + points_per_period % 2);
  const int m = per_half + per_half % 2;  // Simpson needs an even count
  const double half = 0.5 * seq.period;
  double total = 0.0;
  for (int s = 0; s < 2 * seq.n; ++s) {
    const double a = s * half;
    const double h = half / m;
    const double segment_sign = (s % 2 == 0) ? 1.0 : -1.0;
    auto integrand = [&](double t) {
      double f = 0.0;
      switch (seq.scheme) {
        case Scheme::RotaryEcho:
          f = segment_sign * std::sin(seq.omega * t);
          break;
        case Scheme::PDD:
          f = segment_sign;
          break;
        case Scheme::Constant:
        case Scheme::SpinLock:
          f = std::cos(seq.omega * t);
          break;
      }
      return std::cos(omega * t + phi) * f;
    };
    double acc = integrand(a) + integrand(a + half);
    for (int i = 1; i < m; ++i) {
      acc += integrand(a + i * h) * (i % 2 ? 4.0 : 2.0);
    }
    total += acc * h / 3.0;
  }
  return total;
}

}  // namespace

double weight_numeric(const SequenceSpec& seq, double omega,
                      int points_per_period) {
  if (omega <= 0) throw std::invalid_argument("weight_numeric: omega must be > 0");
  if (points_per_period < 1000) {
    throw std::invalid_argument("weight_numeric: need >= 1000 points per period");
  }
  const double phi = matched_phase(seq.scheme);
  const double matched = matched_frequencies(seq).omega_opt;
  const double num = std::abs(phase_integral(seq, omega, phi, points_per_period));
  const double den = std::abs(phase_integral(seq, matched, phi, points_per_period));
  return num / den;
}

WeightProfile weight_profile(const SequenceSpec& seq, double omega_lo,
                             double omega_hi, std::size_t count) {
  if (count < 2 || omega_hi <= omega_lo || omega_lo <= 0) {
    throw std::invalid_argument("weight_profile: bad grid");
  }
  WeightProfile p;
  p.seq = seq;
  p.omega.reserve(count);
  p.w.reserve(count);
  // normalize the numeric path once
  const double phi = matched_phase(seq.scheme);
  const double matched = matched_frequencies(seq).omega_opt;
  const double den = (seq.scheme == Scheme::RotaryEcho)
                         ? 1.0
                         : std::abs(phase_integral(seq, matched, phi, 4096));
  for (std::size_t i = 0; i < count; ++i) {
    const double w = omega_lo + (omega_hi - omega_lo) * i / (count - 1);
    double value;
    if (seq.scheme == Scheme::RotaryEcho) {
      value = weight_re(w, seq.k, seq.n, seq.period);
    } else {
      value = std::abs(phase_integral(seq, w, phi, 4096)) / den;
    }
    p.omega.push_back(w);
    p.w.push_back(value);
  }
  return p;
}

std::vector<PassBand> passbands(int k, double period, int n, int p_max) {
  if (p_max < 0) throw std::invalid_argument("passbands: p_max must be >= 0");
  if (k < 1 || n < 1 || period <= 0) {
    throw std::invalid_argument("passbands: bad sequence parameters");
  }
  std::vector<PassBand> bands;
  for (int p = 1 - k; p <= p_max; ++p) {
    const int m = 2 * (k + p) - 1;
    PassBand band;
    band.p = p;
    band.center = 2.0 * pi * m / period;
    band.height = (4.0 * k - 1.0) / std::abs(4.0 * k * k - double(m) * m);
    bands.push_back(band);
  }
  return bands;
}

double fwhm_main_peak(const SequenceSpec& seq) {
  if (seq.n < 1) throw std::invalid_argument("fwhm_main_peak: n must be >= 1");
  const double center = matched_frequencies(seq).omega_opt;
  std::function<double(double)> w;
  if (seq.scheme == Scheme::RotaryEcho) {
    w = [&](double omega) { return weight_re(omega, seq.k, seq.n, seq.period); };
  } else {
    w = [&](double omega) { return weight_numeric(seq, omega, 4096); };
  }
  const double t_total = seq.total_time();
  const double step = 0.1 / t_total;
  const double reach = 2.0 * pi / t_total;

  auto crossing = [&](double direction) {
    double prev = center;
    double prev_v = w(center);
    if (prev_v < 0.5) {
      throw std::runtime_error("fwhm_main_peak: peak value below half height");
    }
    for (double d = step; d <= reach; d += step) {
      const double x = center + direction * d;
      const double v = w(x);
      if (v < 0.5) {
        double lo = prev, hi = x;
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (w(mid) >= 0.5) {
            lo = mid;
          } else {
            hi = mid;
          }
        }
        return 0.5 * (lo + hi);
      }
      prev = x;
      prev_v = v;
    }
    throw std::runtime_error("fwhm_main_peak: half-height crossing not bracketed");
  };

  const double right = crossing(+1.0);
  const double left = crossing(-1.0);
  return right - left;
}

double phase_penalty(Scheme scheme, std::optional<double> phi) {
  if (!phi.has_value()) return sqrt2;  // unknown phase, ensemble average
  const double p = *phi;
  if (scheme == Scheme::RotaryEcho) {
    const double c = std::cos(p);
    if (std::abs(c) < 1e-12) {
      throw std::domain_error("phase_penalty: sec(phi) diverges");
    }
    return std::abs(1.0 / c);
  }
  const double s = std::sin(p);
  if (std::abs(s) < 1e-12) {
    throw std::domain_error("phase_penalty: csc(phi) diverges");
  }
  return std::abs(1.0 / s);
}

}  // namespace ddmag
