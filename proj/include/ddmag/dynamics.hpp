#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ddmag/sequences.hpp"
#include "ddmag/spin.hpp"

namespace ddmag {

// Stationary Ornstein-Uhlenbeck dephasing process delta(t) with
// autocovariance sigma^2 * exp(-|tau|/tau_c).
struct OUNoise {
  double sigma = 0.0;   // dispersion, rad/s
  double tau_c = 1.0;   // correlation time, s
  std::uint64_t seed = 0;
};

// Deterministic per-stream seed derivation (splitmix64 over seed ^ stream).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// Exact OU discretization on a uniform grid of spacing dt:
//   x_0 ~ N(0, sigma^2),  x_{i+1} = x_i e^{-dt/tau_c} + sigma sqrt(1-e^{-2dt/tau_c}) xi_i.
std::vector<double> ou_path(const OUNoise& noise, double dt, std::size_t n_steps,
                            std::uint64_t stream = 0);

// Time-ordered propagator of
//   H(t) = control(t) + gamma * b cos(omega t + phi) S_z + delta(t) sigma_z
// over [0, n*T], built from piecewise-constant exponentials with midpoint
// sampling of the time-dependent coefficients.  PDD pi pulses are inserted
// as exact unitaries between steps.  noise holds midpoint samples of
// delta(t) (one per step) or may be empty for a noiseless run.
Mat2 propagate(const SequenceSpec& seq, const ACField& field, double gamma_g,
               std::span<const double> noise, int steps_per_period);

constexpr int kDefaultStepsPerPeriod = 4096;

enum class Readout {
  SurvivalZ,    // populate |0>, read survival along z (RE, Constant)
  RefocusedX,   // pi/2 prep, refocused phase readout (PDD)
  TransverseX,  // transverse prep, read along the drive axis (SpinLock)
};

Readout default_readout(Scheme scheme);

struct TrajectoryResult {
  double signal = 0.0;     // ensemble survival probability in [0, 1]
  double std_error = 0.0;  // sample std / sqrt(count)
  std::size_t n_traj = 0;
};

// Monte Carlo ensemble signal under the stochastic Hamiltonian
// Omega SW(t) S_x + delta(t) sigma_z.  Per-trajectory seeds derive from
// (noise.seed, trajectory index), and the reduction is done in trajectory
// order, so the result is bit-identical for any n_threads.
TrajectoryResult mc_signal(const SequenceSpec& seq, const OUNoise& noise,
                           std::size_t n_traj, Readout readout,
                           int steps_per_period = 1024, int n_threads = 0);

}  // namespace ddmag
