#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "focksynth/dynamics.hpp"
#include "focksynth/wigner.hpp"

namespace focksynth::cli {

enum ExitCode : int { ok = 0, numeric_failure = 1, collision = 2, phase_unsolvable = 3, usage = 64 };

struct SystemSection {
  double omega_z_ghz = 19.5;
  double omega_x_ghz = 1.6;
  double omega_ghz = 2.0;
  double eta = 1.11;
};

struct DriveSection {
  int N = -1;
  double x_d = 1.305;
};

struct TargetSection {
  QubitBranch branch = QubitBranch::g;
  std::vector<cplx> coeffs{1.0, 0.0, 1.0};
  bool normalize = true;
};

struct RatesSection {
  double gamma_10_mhz = 0.0;
  double gamma_11_mhz = 0.0;
  double gamma_00_mhz = 0.0;
  double kappa_mhz = 0.0;
};

struct ScanSection {
  std::vector<double> eta{0.33, 0.59, 0.85, 1.11, 1.37};
  std::vector<double> x_d{0.265, 0.525, 0.785, 1.045, 1.305};
};

struct GroundScanSection {
  double eta_min = 0.175, eta_max = 3.5;
  int n_eta = 20;
  double ratio_min = 0.01, ratio_max = 0.2;
  int n_ratio = 20;
  int dim = 60;
};

struct TablesSection {
  double x_d_max = 10.0;
  int n_x_d = 201;
  double eta_max = 4.0;
  int n_eta = 201;
  double photon_eta = 0.7;
  int n_photon = 12;
  int n_max_uniform = 5;
};

struct RunConfig {
  SystemSection system;
  DriveSection drive;
  TargetSection target;
  FockConfig truncation{50, 1e-8};
  RatesSection rates;
  EvolveOptions integrator;
  CollisionOptions collisions;
  bool check_collisions = true;
  InitialState initial_state = InitialState::displaced_vacuum;
  ScanSection scan;
  GroundScanSection ground_scan;
  GridSpec wigner;
  TablesSection tables;
  std::string output_dir = "out";
  int threads = 1;
  long seed = 0;  // reserved; every computation is deterministic

  SystemParams system_params() const;
  SystemParams system_params(double eta) const;
  TargetState target_state() const;
  LindbladRates lindblad_rates() const;
  PlanOptions plan_options() const;
};

/// Unknown keys and invalid values throw ConfigError naming the field.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& c);

/// Applies "a.b.c=value"; value is parsed as JSON, falling back to a plain string.
void apply_override(nlohmann::json& j, const std::string& assignment);

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides);

/// FNV-1a 64 of the canonical JSON of the effective configuration, as 16 hex digits.
std::string config_hash(const RunConfig& c);

/// Metadata line content shared by every CSV.
std::string csv_metadata(const RunConfig& c, const std::string& command);

nlohmann::json schedule_to_json(const PulseSchedule& s);

int cmd_plan(const RunConfig& c, std::ostream& out);
int cmd_scan_fidelity(const RunConfig& c, std::ostream& out);
int cmd_scan_ground(const RunConfig& c, std::ostream& out);
int cmd_wigner(const RunConfig& c, std::ostream& out);
int cmd_tables(const RunConfig& c, std::ostream& out);

/// Entry point; maps exceptions to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace focksynth::cli
