#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace focksynth {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

/// Ordinary frequency in GHz to angular frequency in rad/ns.
constexpr double ghz_to_angular(double f_ghz) { return two_pi * f_ghz; }
constexpr double angular_to_ghz(double w) { return w / two_pi; }
/// Ordinary frequency in MHz to a rate in 1/ns (angular convention).
constexpr double mhz_to_angular(double f_mhz) { return two_pi * 1e-3 * f_mhz; }

/// Kronecker product qubit ⊗ fock. Basis index is q * dim + n, q = 0 for |g>, 1 for |e>.
Matrix kron(const Matrix& qubit, const Matrix& fock);

/// Largest absolute entry.
double max_abs(const Matrix& m);

/// Wrap an angle into (-pi, pi].
double wrap_phase(double phi);

}  // namespace focksynth
