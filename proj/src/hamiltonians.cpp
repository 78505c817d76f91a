#include "focksynth/hamiltonians.hpp"

#include <cmath>
#include <string>

#include "focksynth/errors.hpp"

namespace focksynth {

SystemParams SystemParams::from_ghz(double omega_z_ghz, double omega_x_ghz, double omega_cav_ghz, double g_ghz) {
  SystemParams p{ghz_to_angular(omega_z_ghz), ghz_to_angular(omega_x_ghz), ghz_to_angular(omega_cav_ghz),
                 ghz_to_angular(g_ghz)};
  p.validate();
  return p;
}

SystemParams SystemParams::from_ghz_eta(double omega_z_ghz, double omega_x_ghz, double omega_cav_ghz, double eta) {
  return from_ghz(omega_z_ghz, omega_x_ghz, omega_cav_ghz, 0.5 * eta * omega_cav_ghz);
}

double SystemParams::omega_q() const { return std::hypot(omega_x, omega_z); }

double SystemParams::theta() const { return std::atan2(omega_x, omega_z); }

void SystemParams::validate() const {
  if (!std::isfinite(omega_z)) throw DomainError("SystemParams.omega_z must be finite");
  if (!(omega_x >= 0.0)) throw DomainError("SystemParams.omega_x must be >= 0");
  if (!(omega_cav > 0.0)) throw DomainError("SystemParams.omega_cav must be > 0");
  if (!(g >= 0.0)) throw DomainError("SystemParams.g must be >= 0");
}

DriveParams DriveParams::from_ratio(double x_d, double omega_d, double phi_d) {
  DriveParams d{0.5 * x_d * omega_d, omega_d, phi_d};
  d.validate();
  return d;
}

void DriveParams::validate() const {
  if (!(omega_d > 0.0)) throw DomainError("DriveParams.omega_d must be > 0");
  if (!(Omega_d >= 0.0)) throw DomainError("DriveParams.Omega_d must be >= 0");
}

namespace qubit {

Matrix sigma_z() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = -1.0;
  m(1, 1) = 1.0;
  return m;
}

Matrix sigma_x() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

Matrix sigma_y() {
  Matrix m = Matrix::Zero(2, 2);
  m(1, 0) = -I;  // <e|sigma_y|g>
  m(0, 1) = I;   // <g|sigma_y|e>
  return m;
}

Matrix sigma_plus() {
  Matrix m = Matrix::Zero(2, 2);
  m(1, 0) = 1.0;
  return m;
}

Matrix sigma_minus() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

Matrix projector_g() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = 1.0;
  return m;
}

Matrix projector_e() {
  Matrix m = Matrix::Zero(2, 2);
  m(1, 1) = 1.0;
  return m;
}

Matrix rotation_y(double theta) {
  return std::cos(0.5 * theta) * Matrix::Identity(2, 2) - I * std::sin(0.5 * theta) * sigma_y();
}

}  // namespace qubit

Matrix LabHamiltonian::at(double t) const { return static_part + std::cos(omega_d * t + phi_d) * drive_part; }

LabHamiltonian lab_hamiltonian(const SystemParams& sys, const DriveParams& drv, const FockConfig& cfg) {
  sys.validate();
  drv.validate();
  cfg.validate();
  LabHamiltonian h;
  h.static_part = static_original_hamiltonian(sys, cfg);
  h.drive_part = drv.Omega_d * kron(qubit::sigma_z(), Matrix::Identity(cfg.dim, cfg.dim));
  h.omega_d = drv.omega_d;
  h.phi_d = drv.phi_d;
  return h;
}

Matrix full_hamiltonian(const SystemParams& sys, const DriveParams& drv, double t, const FockConfig& cfg) {
  return lab_hamiltonian(sys, drv, cfg).at(t);
}

Matrix static_original_hamiltonian(const SystemParams& sys, const FockConfig& cfg) {
  sys.validate();
  cfg.validate();
  const int dim = cfg.dim;
  const Matrix id = Matrix::Identity(dim, dim);
  const Matrix a = annihilation(dim);
  const Matrix quad = a + a.adjoint();
  Matrix h = kron(0.5 * sys.omega_z * qubit::sigma_z() + 0.5 * sys.omega_x * qubit::sigma_x(), id);
  h += kron(Matrix::Identity(2, 2), sys.omega_cav * number_operator(dim));
  h += sys.g * kron(qubit::sigma_z(), quad);
  return h;
}

QubitBasisParams qubit_basis_decomposition(const SystemParams& sys, const DriveParams& drv) {
  if (sys.omega_x == 0.0 && sys.omega_z == 0.0)
    throw DegenerateQubit("qubit_basis_decomposition: omega_x = omega_z = 0");
  QubitBasisParams q;
  q.theta = sys.theta();
  q.omega_q = sys.omega_q();
  q.g_z = sys.g * std::cos(q.theta);
  q.g_x = -sys.g * std::sin(q.theta);
  q.Omega_dz = drv.Omega_d * std::cos(q.theta);
  q.Omega_dx = -drv.Omega_d * std::sin(q.theta);
  return q;
}

Matrix heff_static(const SystemParams& sys, const FockConfig& cfg) {
  sys.validate();
  const int dim = cfg.dim;
  const Matrix d = displacement_matrix(cplx{sys.eta(), 0.0}, cfg);
  Matrix h = kron(0.5 * sys.omega_z * qubit::sigma_z(), Matrix::Identity(dim, dim));
  h += kron(Matrix::Identity(2, 2), sys.omega_cav * number_operator(dim));
  const Matrix coupling = kron(qubit::sigma_plus(), d);
  h += 0.5 * sys.omega_x * (coupling + coupling.adjoint());
  return h;
}

Vector ground_state(const Matrix& hermitian) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian);
  if (solver.info() != Eigen::Success) throw EigensolveFailure("ground_state: Hermitian eigensolve failed");
  Vector v = solver.eigenvectors().col(0);
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  const cplx phase = v(imax) / std::abs(v(imax));
  v /= phase;
  return v;
}

double ground_vacuum_probability(const SystemParams& sys, const FockConfig& cfg) {
  if (sys.omega_x == 0.0) return 1.0;
  const Vector psi = ground_state(heff_static(sys, cfg));
  return std::norm(psi(0));
}

}  // namespace focksynth
