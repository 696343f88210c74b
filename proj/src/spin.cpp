#include "ddmag/spin.hpp"

#include <cmath>
#include <stdexcept>

namespace ddmag {

namespace {
const complexd I_UNIT(0.0, 1.0);
}

Mat2 pauli_x() {
  Mat2 m;
  m << 0, 1, 1, 0;
  return m;
}

Mat2 pauli_y() {
  Mat2 m;
  m << 0, -I_UNIT, I_UNIT, 0;
  return m;
}

Mat2 pauli_z() {
  Mat2 m;
  m << 1, 0, 0, -1;
  return m;
}

Mat2 spin_x() { return 0.5 * pauli_x(); }
Mat2 spin_y() { return 0.5 * pauli_y(); }
Mat2 spin_z() { return 0.5 * pauli_z(); }

Mat2 expm_antihermitian(const Mat2& hamiltonian, double duration) {
  const Mat2 anti = hamiltonian - hamiltonian.adjoint();
  if (anti.cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("expm_antihermitian: input is not Hermitian");
  }
  if (!std::isfinite(duration)) {
    throw std::invalid_argument("expm_antihermitian: non-finite duration");
  }
  // H = c0*I + v.sigma with real c0 and real v.
  const double c0 = 0.5 * std::real(hamiltonian(0, 0) + hamiltonian(1, 1));
  const double vz = 0.5 * std::real(hamiltonian(0, 0) - hamiltonian(1, 1));
  const double vx = std::real(hamiltonian(0, 1));
  const double vy = -std::imag(hamiltonian(0, 1));
  const double vn = std::sqrt(vx * vx + vy * vy + vz * vz);

  const double theta = vn * duration;
  const double c = std::cos(theta);
  // sin(theta)/|v| * duration-safe form; sin(x)/x for small arguments
  const double sinc = (std::abs(theta) < 1e-8)
                          ? duration * (1.0 - theta * theta / 6.0)
                          : std::sin(theta) / vn;
  const complexd phase = std::exp(-I_UNIT * c0 * duration);

  Mat2 u;
  u(0, 0) = phase * (c - I_UNIT * sinc * vz);
  u(1, 1) = phase * (c + I_UNIT * sinc * vz);
  u(0, 1) = phase * (-I_UNIT * sinc * complexd(vx, -vy));
  u(1, 0) = phase * (-I_UNIT * sinc * complexd(vx, vy));
  return u;
}

double expect(const State2& state, const Mat2& obs) {
  const complexd v = state.dot(obs * state);
  if (std::abs(std::imag(v)) > 1e-12 * (1.0 + std::abs(v))) {
    throw std::invalid_argument("expect: observable is not Hermitian");
  }
  return std::real(v);
}

Eigen::Vector3d bloch_vector(const State2& state) {
  Eigen::Vector3d r;
  r.x() = expect(state, pauli_x());
  r.y() = expect(state, pauli_y());
  r.z() = expect(state, pauli_z());
  return r;
}

std::pair<double, Eigen::Vector3d> rotation_axis_angle(const Mat2& u) {
  // Remove the global phase so that u = cos(th/2) I - i sin(th/2) n.sigma.
  complexd det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
  const complexd phase = std::sqrt(det);
  Mat2 su = u / phase;
  double c = 0.5 * std::real(su(0, 0) + su(1, 1));
  double sx = -0.5 * std::imag(su(0, 1) + su(1, 0));
  double sy = 0.5 * std::real(su(1, 0) - su(0, 1));
  double sz = -0.5 * std::imag(su(0, 0) - su(1, 1));
  double sn = std::sqrt(sx * sx + sy * sy + sz * sz);
  double angle = 2.0 * std::atan2(sn, c);
  Eigen::Vector3d axis(1, 0, 0);
  if (sn > 0) axis = Eigen::Vector3d(sx / sn, sy / sn, sz / sn);
  return {angle, axis};
}

double rotation_angle(const Mat2& u) { return rotation_axis_angle(u).first; }

}  // namespace ddmag
