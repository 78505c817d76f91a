#include "focksynth/dynamics.hpp"

#include <cmath>
#include <cstdio>

#include <Eigen/Eigenvalues>
#include <Eigen/Sparse>
#include "json.hpp"

#include "focksynth/errors.hpp"

namespace focksynth {

namespace {

using Sparse = Eigen::SparseMatrix<cplx>;

Sparse sparse_of(const Matrix& m) { return m.sparseView(0.0, 0.0); }

// Diagonal of the drive operator Omega_d sigma_z ⊗ 1, without the amplitude.
Eigen::VectorXd sigma_z_diagonal(int dim) {
  Eigen::VectorXd d(2 * dim);
  d.head(dim).setConstant(-1.0);
  d.tail(dim).setConstant(1.0);
  return d;
}

void check_leakage(double w, const FockConfig& cfg) {
  if (w > cfg.leak_tol) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "population %.3g on the top Fock levels exceeds %.3g", w, cfg.leak_tol);
    throw TruncationError(buf);
  }
}

// Block-diagonal D(+alpha) on |g>, D(-alpha) on |e>.
Matrix branch_displacement(double alpha, const FockConfig& cfg) {
  const int d = cfg.dim;
  Matrix out = Matrix::Zero(2 * d, 2 * d);
  out.topLeftCorner(d, d) = displacement_matrix(cplx{alpha, 0.0}, cfg);
  out.bottomRightCorner(d, d) = displacement_matrix(cplx{-alpha, 0.0}, cfg);
  return out;
}

nlohmann::json interleave(const cplx* data, Eigen::Index n) {
  nlohmann::json arr = nlohmann::json::array();
  for (Eigen::Index i = 0; i < n; ++i) {
    arr.push_back(data[i].real());
    arr.push_back(data[i].imag());
  }
  return arr;
}

std::vector<cplx> deinterleave(const nlohmann::json& arr) {
  if (!arr.is_array() || arr.size() % 2 != 0) throw ConfigError("expected an interleaved re/im array");
  std::vector<cplx> out(arr.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {arr[2 * i].get<double>(), arr[2 * i + 1].get<double>()};
  return out;
}

void require_dims(int dim, Eigen::Index size) {
  if (dim < 1 || size != 2 * dim) throw DomainError("state size does not match 2 * dim");
}

}  // namespace

std::string to_string(Picture p) {
  switch (p) {
    case Picture::original: return "original";
    case Picture::displaced: return "displaced";
    case Picture::interaction: return "interaction";
  }
  return "?";
}

Picture picture_from_string(const std::string& s) {
  if (s == "original") return Picture::original;
  if (s == "displaced") return Picture::displaced;
  if (s == "interaction") return Picture::interaction;
  throw DomainError("unknown picture '" + s + "'");
}

void QuantumState::validate(double tol) const {
  require_dims(dim, amplitudes.size());
  if (std::abs(amplitudes.norm() - 1.0) > tol) throw DomainError("state is not normalized");
}

QuantumState QuantumState::basis(int n, QubitBranch q, int dim, Picture p) {
  if (n < 0 || n >= dim) throw DomainError("Fock index outside the truncation");
  QuantumState s{Vector::Zero(2 * dim), dim, p};
  s.amplitudes((q == QubitBranch::g ? 0 : dim) + n) = 1.0;
  return s;
}

void DensityMatrix::validate(double herm_tol, double trace_tol, double eig_tol) const {
  require_dims(dim, matrix.rows());
  if (matrix.rows() != matrix.cols()) throw DomainError("density matrix is not square");
  if (max_abs(matrix - matrix.adjoint()) > herm_tol) throw DomainError("density matrix is not Hermitian");
  if (std::abs(matrix.trace() - 1.0) > trace_tol) throw DomainError("density matrix trace differs from 1");
  if (min_eigenvalue() < -eig_tol) throw PositivityLoss("density matrix has a negative eigenvalue");
}

DensityMatrix DensityMatrix::from_state(const QuantumState& psi) {
  require_dims(psi.dim, psi.amplitudes.size());
  return {psi.amplitudes * psi.amplitudes.adjoint(), psi.dim, psi.picture};
}

double DensityMatrix::min_eigenvalue() const {
  Matrix h = 0.5 * (matrix + matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw EigensolveFailure("density matrix eigensolve failed");
  return es.eigenvalues()(0);
}

LindbladRates LindbladRates::from_mhz(double gamma_10, double gamma_11, double kappa, double gamma_00) {
  LindbladRates r{mhz_to_angular(gamma_10), mhz_to_angular(gamma_11), mhz_to_angular(gamma_00),
                  mhz_to_angular(kappa)};
  r.validate();
  return r;
}

void LindbladRates::validate() const {
  if (!(gamma_10 >= 0 && gamma_11 >= 0 && gamma_00 >= 0 && kappa >= 0)) throw DomainError("rates must be >= 0");
}

Matrix dressed_sigma(int i, int j, double theta) {
  if (i < 0 || i > 1 || j < 0 || j > 1) throw DomainError("qubit level must be 0 or 1");
  Matrix s = Matrix::Zero(2, 2);
  s(i, j) = 1.0;
  const Matrix r = qubit::rotation_y(theta);
  return r * s * r.adjoint();
}

QuantumState schrodinger_evolve(const QuantumState& psi0, const PulseSchedule& schedule, const SystemParams& sys,
                                const FockConfig& cfg, const EvolveOptions& opts, IntegrationStats* stats) {
  cfg.validate();
  if (psi0.picture != Picture::original) throw PictureMismatch("schrodinger_evolve needs an original-picture state");
  if (psi0.dim != cfg.dim) throw DomainError("state dim differs from the Fock configuration");
  require_dims(psi0.dim, psi0.amplitudes.size());

  const Sparse h0 = sparse_of(static_original_hamiltonian(sys, cfg));
  const Eigen::VectorXd zdiag = sigma_z_diagonal(cfg.dim);
  Vector y = psi0.amplitudes;
  IntegrationStats total;

  for (const PulseStep& st : schedule.steps) {
    if (st.duration <= 0.0) continue;
    const double wd = st.omega_d, phi = st.phi_d, Od = st.Omega_d;
    auto rhs = [&](double t, const Vector& psi, Vector& dpsi) {
      dpsi = h0 * psi;
      dpsi.array() += (Od * std::cos(wd * t + phi)) * zdiag.array() * psi.array();
      dpsi *= -I;
    };
    IntegratorOptions io = opts.integrator;
    io.rtol = io.atol = opts.tol;
    io.max_step = wd > 0.0 ? opts.max_step_fraction * two_pi / wd : 0.0;
    IntegrationStats s = integrate_dp45(rhs, 0.0, st.duration, y, io);
    total.accepted += s.accepted;
    total.rejected += s.rejected;
    check_leakage(top_level_weight(y, cfg.dim), cfg);
  }
  if (stats) *stats = total;
  return {y, cfg.dim, Picture::original};
}

namespace {

// L = c (u v^dag) ⊗ 1 on the qubit.
struct QubitJump {
  double rate;
  Eigen::Vector2cd u, v;
};

struct Dissipator {
  std::vector<QubitJump> qubit;
  double kappa = 0.0;
  Sparse h_eff_adj_i;  // i H_eff^dag with H_eff = H - (i/2) sum L^dag L
};

Dissipator build_dissipator(const Sparse& h0, const LindbladRates& rates, const SystemParams& sys,
                            const FockConfig& cfg) {
  rates.validate();
  const int d = cfg.dim;
  const Matrix r = qubit::rotation_y(sys.theta());
  Dissipator out;
  Matrix qsum = Matrix::Zero(2, 2);
  auto add = [&](double rate, int i, int j) {
    if (rate <= 0.0) return;
    out.qubit.push_back({rate, r.col(i), r.col(j)});
    qsum += rate * dressed_sigma(j, j, sys.theta());
  };
  add(rates.gamma_10, 0, 1);
  add(rates.gamma_11, 1, 1);
  add(rates.gamma_00, 0, 0);
  out.kappa = rates.kappa;
  Matrix sum = kron(qsum, Matrix::Identity(d, d)) + kron(Matrix::Identity(2, 2), rates.kappa * number_operator(d));
  Sparse h_eff = h0 - sparse_of(0.5 * I * sum);
  out.h_eff_adj_i = I * Sparse(h_eff.adjoint());
  return out;
}

// dr += sum_L L r L^dag using the block structure of the jump operators.
void add_jumps(const Dissipator& dis, const Matrix& r, Matrix& dr, int d) {
  for (const QubitJump& j : dis.qubit) {
    Matrix m = Matrix::Zero(d, d);
    for (int c = 0; c < 2; ++c)
      for (int e = 0; e < 2; ++e) m += (std::conj(j.v(c)) * j.v(e)) * r.block(c * d, e * d, d, d);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) dr.block(a * d, b * d, d, d) += (j.rate * j.u(a) * std::conj(j.u(b))) * m;
  }
  if (dis.kappa > 0.0) {
    // (a B a^dag)_{mn} = sqrt((m+1)(n+1)) B_{m+1,n+1} in every qubit block.
    Eigen::ArrayXd s = Eigen::ArrayXd::LinSpaced(d - 1, 1.0, d - 1.0).sqrt();
    Eigen::ArrayXXd weight = dis.kappa * (s.matrix() * s.matrix().transpose()).array();
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        dr.block(a * d, b * d, d - 1, d - 1).array() += weight * r.block(a * d + 1, b * d + 1, d - 1, d - 1).array();
  }
}

IntegrationStats lindblad_segment(Matrix& rho, const Dissipator& dis, const Eigen::VectorXd& zdiag, double Od,
                                  double wd, double phi, double t, const EvolveOptions& opts) {
  const int d = static_cast<int>(rho.rows()) / 2;
  Matrix x;
  auto rhs = [&](double tt, const Matrix& r, Matrix& dr) {
    // With X = i r H_eff^dag and r Hermitian, -i H_eff r + i r H_eff^dag = X + X^dag.
    x.noalias() = r * dis.h_eff_adj_i;
    if (Od != 0.0) x += r * ((I * Od * std::cos(wd * tt + phi)) * zdiag).asDiagonal();
    dr = x + x.adjoint();
    add_jumps(dis, r, dr, d);
  };
  IntegratorOptions io = opts.integrator;
  io.rtol = io.atol = opts.tol;
  io.max_step = wd > 0.0 ? opts.max_step_fraction * two_pi / wd : 0.0;
  return integrate_dp45(rhs, 0.0, t, rho, io);
}

}  // namespace

DensityMatrix lindblad_evolve(const DensityMatrix& rho0, const PulseSchedule& schedule, const SystemParams& sys,
                              const LindbladRates& rates, const FockConfig& cfg, const EvolveOptions& opts,
                              IntegrationStats* stats) {
  cfg.validate();
  if (rho0.picture != Picture::original) throw PictureMismatch("lindblad_evolve needs an original-picture state");
  if (rho0.dim != cfg.dim) throw DomainError("density dim differs from the Fock configuration");
  rho0.validate();

  const Sparse h0 = sparse_of(static_original_hamiltonian(sys, cfg));
  const Dissipator dis = build_dissipator(h0, rates, sys, cfg);
  const Eigen::VectorXd zdiag = sigma_z_diagonal(cfg.dim);
  Matrix rho = rho0.matrix;
  IntegrationStats total;
  for (const PulseStep& st : schedule.steps) {
    if (st.duration <= 0.0) continue;
    IntegrationStats s = lindblad_segment(rho, dis, zdiag, st.Omega_d, st.omega_d, st.phi_d, st.duration, opts);
    total.accepted += s.accepted;
    total.rejected += s.rejected;
    rho = 0.5 * (rho + rho.adjoint()).eval();
    DensityMatrix tmp{rho, cfg.dim, Picture::original};
    if (tmp.min_eigenvalue() < -opts.positivity_tol) throw PositivityLoss("density matrix lost positivity");
    check_leakage(top_level_weight(rho, cfg.dim), cfg);
  }
  if (stats) *stats = total;
  return {rho, cfg.dim, Picture::original};
}

DensityMatrix lindblad_evolve_static(const DensityMatrix& rho0, const Matrix& H, double t, const LindbladRates& rates,
                                     const SystemParams& sys, const FockConfig& cfg, const EvolveOptions& opts) {
  cfg.validate();
  if (H.rows() != 2 * cfg.dim) throw DomainError("Hamiltonian size does not match the Fock configuration");
  const Dissipator dis = build_dissipator(sparse_of(H), rates, sys, cfg);
  Matrix rho = rho0.matrix;
  lindblad_segment(rho, dis, sigma_z_diagonal(cfg.dim), 0.0, 0.0, 0.0, t, opts);
  return {rho, rho0.dim, rho0.picture};
}

QuantumState to_original_picture(const QuantumState& s, double eta, const FockConfig& cfg) {
  if (s.picture != Picture::displaced) throw PictureMismatch("to_original_picture expects a displaced state");
  require_dims(s.dim, s.amplitudes.size());
  Vector out = branch_displacement(0.5 * eta, cfg) * s.amplitudes;
  check_leakage(top_level_weight(out, cfg.dim), cfg);
  return {out, s.dim, Picture::original};
}

QuantumState to_displaced_picture(const QuantumState& s, double eta, const FockConfig& cfg) {
  if (s.picture != Picture::original) throw PictureMismatch("to_displaced_picture expects an original state");
  require_dims(s.dim, s.amplitudes.size());
  Vector out = branch_displacement(-0.5 * eta, cfg) * s.amplitudes;
  check_leakage(top_level_weight(out, cfg.dim), cfg);
  return {out, s.dim, Picture::displaced};
}

DensityMatrix to_original_picture(const DensityMatrix& r, double eta, const FockConfig& cfg) {
  if (r.picture != Picture::displaced) throw PictureMismatch("to_original_picture expects a displaced state");
  const Matrix d = branch_displacement(0.5 * eta, cfg);
  Matrix out = d * r.matrix * d.adjoint();
  check_leakage(top_level_weight(out, cfg.dim), cfg);
  return {out, r.dim, Picture::original};
}

DensityMatrix to_displaced_picture(const DensityMatrix& r, double eta, const FockConfig& cfg) {
  if (r.picture != Picture::original) throw PictureMismatch("to_displaced_picture expects an original state");
  const Matrix d = branch_displacement(-0.5 * eta, cfg);
  Matrix out = d * r.matrix * d.adjoint();
  check_leakage(top_level_weight(out, cfg.dim), cfg);
  return {out, r.dim, Picture::displaced};
}

std::vector<double> photon_distribution(const QuantumState& s) {
  require_dims(s.dim, s.amplitudes.size());
  std::vector<double> p(s.dim);
  for (int n = 0; n < s.dim; ++n) p[n] = std::norm(s.amplitudes(n)) + std::norm(s.amplitudes(s.dim + n));
  return p;
}

std::vector<double> photon_distribution(const DensityMatrix& r) {
  require_dims(r.dim, r.matrix.rows());
  std::vector<double> p(r.dim);
  for (int n = 0; n < r.dim; ++n) p[n] = r.matrix(n, n).real() + r.matrix(r.dim + n, r.dim + n).real();
  return p;
}

double displaced_target_probability(const TargetState& target, double eta, int l) {
  const double alpha = target.branch == QubitBranch::g ? 0.5 * eta : -0.5 * eta;
  double p = 0.0;
  for (int n = 0; n <= target.n_max(); ++n)
    for (int m = 0; m <= target.n_max(); ++m)
      p += std::real(std::conj(target.coeffs[m]) * target.coeffs[n] *
                     std::conj(displaced_number_overlap(l, alpha, m)) * displaced_number_overlap(l, alpha, n));
  return p;
}

double fidelity(const DensityMatrix& a, const DensityMatrix& d) {
  if (a.picture != d.picture) throw PictureMismatch("fidelity between different pictures");
  if (a.matrix.rows() != d.matrix.rows()) throw DomainError("fidelity between different dimensions");
  // Tr(A D) = sum_ij A_ij D_ji
  return (a.matrix.array() * d.matrix.transpose().array()).sum().real();
}

double fidelity(const DensityMatrix& a, const QuantumState& d) {
  if (a.picture != d.picture) throw PictureMismatch("fidelity between different pictures");
  if (a.matrix.rows() != d.amplitudes.size()) throw DomainError("fidelity between different dimensions");
  return d.amplitudes.dot(a.matrix * d.amplitudes).real();
}

Matrix trace_out_qubit(const DensityMatrix& r) {
  require_dims(r.dim, r.matrix.rows());
  const int d = r.dim;
  return r.matrix.topLeftCorner(d, d) + r.matrix.bottomRightCorner(d, d);
}

nlohmann::json to_json(const QuantumState& s) {
  return {{"dim", s.dim}, {"picture", to_string(s.picture)},
          {"amplitudes", interleave(s.amplitudes.data(), s.amplitudes.size())}};
}

nlohmann::json to_json(const DensityMatrix& r) {
  // Eigen is column-major; transpose to get row-major order.
  Matrix rm = r.matrix.transpose();
  return {{"dim", r.dim}, {"picture", to_string(r.picture)}, {"matrix", interleave(rm.data(), rm.size())}};
}

QuantumState state_from_json(const nlohmann::json& j) {
  QuantumState s;
  s.dim = j.at("dim").get<int>();
  s.picture = picture_from_string(j.at("picture").get<std::string>());
  auto v = deinterleave(j.at("amplitudes"));
  require_dims(s.dim, static_cast<Eigen::Index>(v.size()));
  s.amplitudes = Eigen::Map<Vector>(v.data(), v.size());
  return s;
}

DensityMatrix density_from_json(const nlohmann::json& j) {
  DensityMatrix r;
  r.dim = j.at("dim").get<int>();
  r.picture = picture_from_string(j.at("picture").get<std::string>());
  auto v = deinterleave(j.at("matrix"));
  const Eigen::Index n = 2 * r.dim;
  if (static_cast<Eigen::Index>(v.size()) != n * n) throw DomainError("matrix size does not match 2 * dim");
  r.matrix = Eigen::Map<Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(v.data(), n, n);
  return r;
}

GenerationResult run_generation(const TargetState& target, const SystemParams& sys, int N, double x_d,
                                const FockConfig& cfg, const LindbladRates& rates, InitialState init,
                                const EvolveOptions& opts, const PlanOptions& plan) {
  target.validate(&cfg);
  const PulseSchedule sched = plan_schedule(target, sys, N, x_d, plan);
  const double eta = sys.eta();

  QuantumState psi0;
  if (init == InitialState::ground) {
    psi0 = {ground_state(static_original_hamiltonian(sys, cfg)), cfg.dim, Picture::original};
  } else {
    psi0 = to_original_picture(QuantumState::basis(0, QubitBranch::g, cfg.dim, Picture::displaced), eta, cfg);
  }

  const QuantumState tgt = to_original_picture(QuantumState{target.as_vector(cfg.dim), cfg.dim, Picture::displaced},
                                               eta, cfg);
  GenerationResult out;
  out.target = DensityMatrix::from_state(tgt);
  if (rates.any()) {
    out.rho = lindblad_evolve(DensityMatrix::from_state(psi0), sched, sys, rates, cfg, opts, &out.stats);
  } else {
    QuantumState psi = schrodinger_evolve(psi0, sched, sys, cfg, opts, &out.stats);
    out.rho = DensityMatrix::from_state(psi);
  }
  out.fidelity = fidelity(out.rho, tgt);
  out.leakage = top_level_weight(out.rho.matrix, cfg.dim);
  out.norm_drift = std::abs(out.rho.matrix.trace() - 1.0);
  return out;
}

}  // namespace focksynth
