#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "focksynth/integrator.hpp"
#include "focksynth/synthesis.hpp"

namespace focksynth {

enum class Picture { original, displaced, interaction };

std::string to_string(Picture p);
Picture picture_from_string(const std::string& s);

struct QuantumState {
  Vector amplitudes;  // length 2 * dim, index q * dim + n with q = 0 (g), 1 (e)
  int dim = 0;
  Picture picture = Picture::original;

  void validate(double tol = 1e-9) const;
  static QuantumState basis(int n, QubitBranch q, int dim, Picture p);
};

struct DensityMatrix {
  Matrix matrix;
  int dim = 0;
  Picture picture = Picture::original;

  void validate(double herm_tol = 1e-10, double trace_tol = 1e-8, double eig_tol = 1e-8) const;
  static DensityMatrix from_state(const QuantumState& psi);
  double min_eigenvalue() const;
};

/// Rates in 1/ns (angular).
struct LindbladRates {
  double gamma_10 = 0.0;  // qubit relaxation
  double gamma_11 = 0.0;  // dephasing of the upper level
  double gamma_00 = 0.0;
  double kappa = 0.0;     // cavity decay

  /// From ordinary frequencies in MHz.
  static LindbladRates from_mhz(double gamma_10, double gamma_11, double kappa, double gamma_00 = 0.0);
  void validate() const;
  bool any() const { return gamma_10 > 0 || gamma_11 > 0 || gamma_00 > 0 || kappa > 0; }
};

struct EvolveOptions {
  double tol = 1e-10;
  /// Step bound as a fraction of the drive period.
  double max_step_fraction = 1.0 / 20;
  /// Lindblad only: smallest eigenvalue allowed at step boundaries.
  double positivity_tol = 1e-6;
  IntegratorOptions integrator;
};

/// Dressed operator sigma~_ij = R_y(theta) |i><j| R_y(theta)^dag on the qubit (i, j in {0 = g, 1 = e}).
Matrix dressed_sigma(int i, int j, double theta);

/// i dpsi/dt = H(t) psi with the full lab Hamiltonian; (omega_d, phi_d) switch at each step
/// boundary and every step runs on its own clock starting at 0.
QuantumState schrodinger_evolve(const QuantumState& psi0, const PulseSchedule& schedule, const SystemParams& sys,
                                const FockConfig& cfg, const EvolveOptions& opts = {},
                                IntegrationStats* stats = nullptr);

DensityMatrix lindblad_evolve(const DensityMatrix& rho0, const PulseSchedule& schedule, const SystemParams& sys,
                              const LindbladRates& rates, const FockConfig& cfg, const EvolveOptions& opts = {},
                              IntegrationStats* stats = nullptr);

/// Free Lindblad evolution under a constant Hamiltonian for time t.
DensityMatrix lindblad_evolve_static(const DensityMatrix& rho0, const Matrix& H, double t, const LindbladRates& rates,
                                     const SystemParams& sys, const FockConfig& cfg, const EvolveOptions& opts = {});

/// Displaced -> original applies D^dag(eta sigma_z / 2), i.e. D(+eta/2) on |g> and D(-eta/2) on |e>.
QuantumState to_original_picture(const QuantumState& s, double eta, const FockConfig& cfg);
QuantumState to_displaced_picture(const QuantumState& s, double eta, const FockConfig& cfg);
DensityMatrix to_original_picture(const DensityMatrix& r, double eta, const FockConfig& cfg);
DensityMatrix to_displaced_picture(const DensityMatrix& r, double eta, const FockConfig& cfg);

std::vector<double> photon_distribution(const QuantumState& s);
std::vector<double> photon_distribution(const DensityMatrix& r);

/// Closed form of P_l for D^dag(eta sigma_z/2) sum_n C_n |n>|q>, including interference terms.
double displaced_target_probability(const TargetState& target, double eta, int l);

/// Re Tr(rho_a rho_d). Throws PictureMismatch.
double fidelity(const DensityMatrix& a, const DensityMatrix& d);
double fidelity(const DensityMatrix& a, const QuantumState& d);

/// Cavity block <g|rho|g> + <e|rho|e>.
Matrix trace_out_qubit(const DensityMatrix& r);

nlohmann::json to_json(const QuantumState& s);
nlohmann::json to_json(const DensityMatrix& r);
QuantumState state_from_json(const nlohmann::json& j);
DensityMatrix density_from_json(const nlohmann::json& j);

enum class InitialState { displaced_vacuum, ground };

struct GenerationResult {
  DensityMatrix rho;        // original picture
  DensityMatrix target;     // original picture
  double fidelity = 0.0;
  double leakage = 0.0;     // top-two-level weight
  double norm_drift = 0.0;  // |Tr rho - 1|
  IntegrationStats stats;
};

/// Plan, evolve in the lab frame (pure or open), and compare with the original-picture target.
GenerationResult run_generation(const TargetState& target, const SystemParams& sys, int N, double x_d,
                                const FockConfig& cfg, const LindbladRates& rates = {},
                                InitialState init = InitialState::displaced_vacuum, const EvolveOptions& opts = {},
                                const PlanOptions& plan = {});

}  // namespace focksynth
