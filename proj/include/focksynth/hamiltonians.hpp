#pragma once

#include "focksynth/fock_math.hpp"
#include "focksynth/linalg.hpp"

namespace focksynth {

/// Static qubit and cavity parameters. All values are angular frequencies in rad/ns;
/// use from_ghz() to build from ordinary frequencies.
struct SystemParams {
  double omega_z = 0.0;
  double omega_x = 0.0;
  double omega_cav = 0.0;
  double g = 0.0;

  /// Frequencies given as f/GHz (the value is multiplied by 2*pi).
  static SystemParams from_ghz(double omega_z_ghz, double omega_x_ghz, double omega_cav_ghz, double g_ghz);
  /// Same but with the coupling specified through the Lamb-Dicke parameter eta = 2g/omega.
  static SystemParams from_ghz_eta(double omega_z_ghz, double omega_x_ghz, double omega_cav_ghz, double eta);

  double eta() const { return 2.0 * g / omega_cav; }
  double omega_q() const;
  double theta() const;
  /// sqrt(omega_x^2 + omega_z^2) > 5 omega.
  bool large_detuning() const { return omega_q() > 5.0 * omega_cav; }

  void validate() const;
};

struct DriveParams {
  double Omega_d = 0.0;
  double omega_d = 1.0;
  double phi_d = 0.0;

  static DriveParams from_ratio(double x_d, double omega_d, double phi_d);
  double x_d() const { return 2.0 * Omega_d / omega_d; }
  void validate() const;
};

struct QubitBasisParams {
  double g_z = 0.0;
  double g_x = 0.0;
  double Omega_dz = 0.0;
  double Omega_dx = 0.0;
  double omega_q = 0.0;
  double theta = 0.0;
};

/// Qubit operators in the (g, e) index order with sigma_z|g> = -|g>.
namespace qubit {
Matrix sigma_z();
Matrix sigma_x();
Matrix sigma_y();
Matrix sigma_plus();   // |e><g|
Matrix sigma_minus();  // |g><e|
Matrix projector_g();
Matrix projector_e();
/// R_y(theta) = exp(-i theta sigma_y / 2).
Matrix rotation_y(double theta);
}  // namespace qubit

/// Lab-frame Hamiltonian split as H(t) = static_part + cos(omega_d t + phi_d) * drive_part.
struct LabHamiltonian {
  Matrix static_part;
  Matrix drive_part;  // Omega_d sigma_z ⊗ 1
  double omega_d = 0.0;
  double phi_d = 0.0;

  Matrix at(double t) const;
};

LabHamiltonian lab_hamiltonian(const SystemParams& sys, const DriveParams& drv, const FockConfig& cfg);

/// H_q + omega a^dag a + g sigma_z (a + a^dag) + Omega_d sigma_z cos(omega_d t + phi_d).
Matrix full_hamiltonian(const SystemParams& sys, const DriveParams& drv, double t, const FockConfig& cfg);

/// Undriven original-picture Hamiltonian H' (the broken-symmetry Rabi-type model).
Matrix static_original_hamiltonian(const SystemParams& sys, const FockConfig& cfg);

QubitBasisParams qubit_basis_decomposition(const SystemParams& sys, const DriveParams& drv);

/// Undriven displacement-picture Hamiltonian
/// (omega_z/2) sigma_z + omega a^dag a + (omega_x/2) {sigma_+ D(eta) + h.c.}.
Matrix heff_static(const SystemParams& sys, const FockConfig& cfg);

/// Minimum-eigenvalue eigenvector of a Hermitian matrix; the largest-magnitude
/// component is made real and positive.
Vector ground_state(const Matrix& hermitian);

/// |<0,g|psi_g>|^2 for the ground state psi_g of heff_static.
double ground_vacuum_probability(const SystemParams& sys, const FockConfig& cfg);

}  // namespace focksynth
