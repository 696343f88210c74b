#include "ddmag/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

namespace ddmag {

using std::numbers::pi;

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the combined value
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<double> ou_path(const OUNoise& noise, double dt, std::size_t n_steps,
                            std::uint64_t stream) {
  if (dt <= 0) throw std::invalid_argument("ou_path: dt must be > 0");
  std::mt19937_64 rng(derive_seed(noise.seed, stream));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> path(n_steps);
  if (n_steps == 0) return path;
  const double decay = std::exp(-dt / noise.tau_c);
  const double kick = noise.sigma * std::sqrt(1.0 - decay * decay);
  path[0] = noise.sigma * normal(rng);
  for (std::size_t i = 1; i < n_steps; ++i) {
    path[i] = path[i - 1] * decay + kick * normal(rng);
  }
  return path;
}

namespace {

// One step of exp(-i (hx sigma_x + hz sigma_z) dt) applied to psi.
inline void su2_step(double hx, double hz, double dt, complexd& a, complexd& b) {
  const double vn = std::sqrt(hx * hx + hz * hz);
  const double theta = vn * dt;
  const double c = std::cos(theta);
  const double s = (theta < 1e-8) ? dt * (1.0 - theta * theta / 6.0)
                                  : std::sin(theta) / vn;
  const complexd u00(c, -s * hz);
  const complexd u01(0.0, -s * hx);
  const complexd na = u00 * a + u01 * b;
  const complexd nb = u01 * a + std::conj(u00) * b;
  a = na;
  b = nb;
}

Mat2 pi_pulse_x() {
  // exp(-i pi S_x)
  Mat2 m;
  m << 0.0, complexd(0.0, -1.0), complexd(0.0, -1.0), 0.0;
  return m;
}

}  // namespace

Mat2 propagate(const SequenceSpec& seq, const ACField& field, double gamma_g,
               std::span<const double> noise, int steps_per_period) {
  if (steps_per_period < 100) {
    throw std::invalid_argument("propagate: steps_per_period must be >= 100");
  }
  if (steps_per_period % 2 != 0) ++steps_per_period;
  const std::size_t steps = static_cast<std::size_t>(steps_per_period) * seq.n;
  if (!noise.empty() && noise.size() < steps) {
    throw std::invalid_argument("propagate: noise path undersamples the step grid");
  }
  const double dt = seq.period / steps_per_period;
  std::vector<double> pulses;
  if (seq.scheme == Scheme::PDD) pulses = pdd_pulse_times(seq);
  std::size_t next_pulse = 0;

  Mat2 u = Mat2::Identity();
  const Mat2 pulse = pi_pulse_x();
  for (std::size_t i = 0; i < steps; ++i) {
    const double t0 = i * dt;
    const double tm = t0 + 0.5 * dt;
    // pi pulses sit on step boundaries (steps_per_period is even)
    if (next_pulse < pulses.size() && pulses[next_pulse] <= t0 + 0.25 * dt) {
      u = pulse * u;
      ++next_pulse;
    }
    double hx = 0.0;
    if (seq.scheme == Scheme::RotaryEcho) {
      hx = 0.5 * seq.omega * square_wave(tm, seq.period);
    } else if (seq.scheme != Scheme::PDD) {
      hx = 0.5 * seq.omega;
    }
    double hz = 0.5 * gamma_g * field.b * std::cos(field.omega * tm + field.phi);
    if (!noise.empty()) hz += noise[i];
    // column-wise application of the step to the accumulated propagator
    for (int col = 0; col < 2; ++col) {
      complexd a = u(0, col), b = u(1, col);
      su2_step(hx, hz, dt, a, b);
      u(0, col) = a;
      u(1, col) = b;
    }
  }
  if (next_pulse < pulses.size()) {
    u = pulse * u;
    ++next_pulse;
  }
  return u;
}

Readout default_readout(Scheme scheme) {
  switch (scheme) {
    case Scheme::PDD: return Readout::RefocusedX;
    case Scheme::SpinLock: return Readout::TransverseX;
    default: return Readout::SurvivalZ;
  }
}

namespace {

double one_trajectory(const SequenceSpec& seq, const OUNoise& noise,
                      std::uint64_t traj_index, Readout readout,
                      int steps_per_period) {
  const std::size_t steps = static_cast<std::size_t>(steps_per_period) * seq.n;
  if (steps == 0) return 1.0;
  const double dt = seq.period / steps_per_period;
  const std::vector<double> path = ou_path(noise, dt, steps, traj_index);

  if (seq.scheme == Scheme::PDD) {
    if (readout != Readout::RefocusedX) {
      throw std::invalid_argument("mc_signal: PDD requires the refocused readout");
    }
    // pure dephasing between ideal pi pulses: phase rate 2*delta, sign
    // toggled by each pulse at odd multiples of T/2
    double phase = 0.0;
    for (std::size_t i = 0; i < steps; ++i) {
      const double tm = (i + 0.5) * dt;
      const double f = (static_cast<long>(std::floor(tm / seq.period + 0.5)) % 2 == 0)
                           ? 1.0
                           : -1.0;
      phase += f * path[i];
    }
    phase *= 2.0 * dt;
    return 0.5 * (1.0 + std::cos(phase));
  }

  complexd a, b;
  if (readout == Readout::SurvivalZ) {
    a = 1.0;
    b = 0.0;
  } else if (readout == Readout::TransverseX) {
    a = b = std::sqrt(0.5);
  } else {
    throw std::invalid_argument("mc_signal: readout not applicable to this scheme");
  }
  for (std::size_t i = 0; i < steps; ++i) {
    const double tm = (i + 0.5) * dt;
    double hx = 0.5 * seq.omega;
    if (seq.scheme == Scheme::RotaryEcho) hx *= square_wave(tm, seq.period);
    su2_step(hx, path[i], dt, a, b);
  }
  if (readout == Readout::SurvivalZ) return std::norm(a);
  // survival along +x
  const complexd amp = std::sqrt(0.5) * (a + b);
  return std::norm(amp);
}

}  // namespace

TrajectoryResult mc_signal(const SequenceSpec& seq, const OUNoise& noise,
                           std::size_t n_traj, Readout readout,
                           int steps_per_period, int n_threads) {
  if (n_traj < 100) throw std::invalid_argument("mc_signal: n_traj must be >= 100");
  if (steps_per_period < 100) {
    throw std::invalid_argument("mc_signal: steps_per_period must be >= 100");
  }
  if (steps_per_period % 2 != 0) ++steps_per_period;
  if (n_threads <= 0) {
    n_threads = static_cast<int>(std::thread::hardware_concurrency());
    if (n_threads <= 0) n_threads = 1;
  }

  std::vector<double> vals(n_traj);
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      vals[i] = one_trajectory(seq, noise, i, readout, steps_per_period);
    }
  };
  if (n_threads == 1 || n_traj < 2 * static_cast<std::size_t>(n_threads)) {
    work(0, n_traj);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n_traj + n_threads - 1) / n_threads;
    for (int t = 0; t < n_threads; ++t) {
      const std::size_t lo = t * chunk;
      const std::size_t hi = std::min(n_traj, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  // fixed-order reduction: independent of the thread count
  double mean = 0.0;
  for (double v : vals) mean += v;
  mean /= static_cast<double>(n_traj);
  double var = 0.0;
  for (double v : vals) var += (v - mean) * (v - mean);
  var /= static_cast<double>(n_traj - 1);
  TrajectoryResult r;
  r.signal = mean;
  r.std_error = std::sqrt(var / static_cast<double>(n_traj));
  r.n_traj = n_traj;
  return r;
}

}  // namespace ddmag
