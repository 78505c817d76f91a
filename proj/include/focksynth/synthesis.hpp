#pragma once

#include <vector>

#include "focksynth/fock_math.hpp"
#include "focksynth/hamiltonians.hpp"
#include "focksynth/sidebands.hpp"

namespace focksynth {

enum class QubitBranch { g, e };

/// sum_n C_n |n> ⊗ |q> in the displacement picture.
struct TargetState {
  std::vector<cplx> coeffs;
  QubitBranch branch = QubitBranch::g;

  /// Checks normalization to 1e-12 and, when cfg is given, n_max + 2 < dim.
  void validate(const FockConfig* cfg = nullptr) const;
  int n_max() const { return static_cast<int>(coeffs.size()) - 1; }
  /// Index of the last coefficient with nonzero weight.
  int effective_n_max() const;
  /// Rescales coeffs to unit norm.
  static TargetState normalized(std::vector<cplx> coeffs, QubitBranch branch = QubitBranch::g);
  /// Embedding in qubit⊗Fock of dimension 2 * dim.
  Vector as_vector(int dim) const;
};

struct PulseStep {
  SidebandSpec spec;
  double omega_d = 0.0;  // rad/ns
  double Omega_d = 0.0;  // rad/ns, x_d * omega_d / 2
  double phi_d = 0.0;    // rad
  double duration = 0.0; // ns
  int step_index = 0;
  double rabi = 0.0;     // |Omega| of the driven transition, rad/ns
};

struct PulseSchedule {
  std::vector<PulseStep> steps;
  double total_time = 0.0;       // ns
  double normalized_time = 0.0;  // T |omega_x J_N| / 2
  double eta = 0.0;
  double x_d = 0.0;
  int N = -1;
  QubitBranch branch = QubitBranch::g;
  /// The ideal protocol prepares exp(i global_phase) * target.
  double global_phase = 0.0;
};

struct PlanOptions {
  bool check_collisions = true;
  CollisionOptions collisions;
  /// Root tolerance on each drive phase.
  double phase_tol = 1e-13;
  /// Grid used to bracket phase roots on (-pi, pi].
  int phase_scan_points = 2048;
};

/// Carrier step followed by k = 1..n_max red sidebands (|g> targets) or blue
/// sidebands (|e> targets). Throws ZeroBessel, PhaseUnsolvable, CollisionDetected.
PulseSchedule plan_schedule(const TargetState& target, const SystemParams& sys, int N, double x_d,
                            const PlanOptions& opts = {});

/// Phase picked up between |n_in, s_in> and |n_out, s_out> (s = -1 for g, +1 for e) from
/// the frame changes U0(0) before and U0^dag(t) after one step; excludes the propagator element.
double step_frame_phase(int n_in, int s_in, int n_out, int s_out, double t, double omega_d, double phi_d,
                        double x_d, const SystemParams& sys);

/// Amplitudes after one step of the coefficient recursion: kept[k] on |k, q_target> and the
/// auxiliary level |0, q_other> (|0,e> for red plans, |0,g> for blue plans).
struct StepAmplitudes {
  std::vector<cplx> kept;
  cplx auxiliary = 0.0;
};

/// Forward recursion in coefficient space from C_0g = 1; entry n holds the state after step n.
std::vector<StepAmplitudes> forward_amplitudes(const PulseSchedule& schedule, const SystemParams& sys);

/// Displacement-picture state after applying U0^dag(t_n) U_n(t_n) U0(0) for every step to |0,g>.
Vector ideal_final_state(const PulseSchedule& schedule, const SystemParams& sys, const FockConfig& cfg);

/// |<target|psi_ideal>|^2.
double simulate_ideal(const PulseSchedule& schedule, const TargetState& target, const SystemParams& sys,
                      const FockConfig& cfg);

struct TotalTime {
  double T = 0.0;        // ns
  double T_tilde = 0.0;  // T |omega_x J_N| / 2
};

/// Closed-form generation time (no excess cycle periods) at Lamb-Dicke parameter eta.
TotalTime total_time(const TargetState& target, const SystemParams& sys, int N, double x_d, double eta);

/// T_tilde(eta); independent of the remaining system parameters.
double normalized_total_time(const TargetState& target, double eta);

/// A_{-1} .. A_{n_max+1} of sum_n A_n eta^{n_max+1-n} = 0, the stationarity condition of T_tilde.
std::vector<double> stationarity_coefficients(const TargetState& target);

struct EtaOptimum {
  double eta = 0.0;
  double t_tilde = 0.0;
  /// false when the minimum sits on a bound (no admissible interior stationary point wins).
  bool interior = false;
  std::vector<double> stationary_points;
};

EtaOptimum optimize_eta(const TargetState& target, double eta_lo, double eta_hi);

}  // namespace focksynth
