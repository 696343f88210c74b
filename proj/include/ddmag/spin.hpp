#pragma once

#include <complex>
#include <eigen3/Eigen/Dense>

namespace ddmag {

using Mat2 = Eigen::Matrix2cd;
using State2 = Eigen::Vector2cd;
using complexd = std::complex<double>;

// Spin-1/2 components, S = sigma/2 convention (fixed globally).
Mat2 pauli_x();
Mat2 pauli_y();
Mat2 pauli_z();
Mat2 spin_x();
Mat2 spin_y();
Mat2 spin_z();

// exp(-i H t) for Hermitian H, evaluated through the closed-form
// decomposition H = c0*I + v.sigma (no series summation).
// Throws std::invalid_argument if H deviates from Hermiticity by more
// than 1e-10 in max-entry norm.
Mat2 expm_antihermitian(const Mat2& hamiltonian, double duration);

// <psi|O|psi> for Hermitian O; the imaginary part is discarded after a
// 1e-12 sanity check.
double expect(const State2& state, const Mat2& obs);

// Bloch vector (r_x, r_y, r_z) of a pure state, |r| = 1.
Eigen::Vector3d bloch_vector(const State2& state);

// Rotation angle of a (special-)unitary U = cos(th/2) I - i sin(th/2) u.sigma,
// returned in [0, 2*pi]. Robust for small angles.
double rotation_angle(const Mat2& u);

// Axis-resolved version: returns (angle, unit axis).
std::pair<double, Eigen::Vector3d> rotation_axis_angle(const Mat2& u);

}  // namespace ddmag
