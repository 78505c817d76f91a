#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>

#include "focksynth/cli.hpp"
#include "focksynth/errors.hpp"

namespace focksynth::cli {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError("unknown key '" + (path.empty() ? "" : path + ".") + it.key() + "'");
}

template <class T>
void read(const json& obj, const char* key, T& dst, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    dst = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(path + "." + key + " has the wrong type");
  }
}

const json& section(const json& j, const char* key) {
  static const json empty = json::object();
  auto it = j.find(key);
  return it == j.end() ? empty : *it;
}

void positive(double v, const std::string& field) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(field + " must be > 0");
}

void non_negative(double v, const std::string& field) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(field + " must be >= 0");
}

void at_least(long v, long lo, const std::string& field) {
  if (v < lo) throw ConfigError(field + " must be >= " + std::to_string(lo));
}

std::vector<cplx> parse_coeffs(const json& arr) {
  if (!arr.is_array() || arr.empty()) throw ConfigError("target.coeffs must be a non-empty array");
  std::vector<cplx> out;
  for (const json& c : arr) {
    if (c.is_number()) {
      out.emplace_back(c.get<double>(), 0.0);
    } else if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number()) {
      out.emplace_back(c[0].get<double>(), c[1].get<double>());
    } else {
      throw ConfigError("target.coeffs entries must be numbers or [re, im] pairs");
    }
  }
  return out;
}

}  // namespace

SystemParams RunConfig::system_params() const { return system_params(system.eta); }

SystemParams RunConfig::system_params(double eta) const {
  return SystemParams::from_ghz_eta(system.omega_z_ghz, system.omega_x_ghz, system.omega_ghz, eta);
}

TargetState RunConfig::target_state() const {
  if (target.normalize) return TargetState::normalized(target.coeffs, target.branch);
  TargetState t{target.coeffs, target.branch};
  t.validate();
  return t;
}

LindbladRates RunConfig::lindblad_rates() const {
  return LindbladRates::from_mhz(rates.gamma_10_mhz, rates.gamma_11_mhz, rates.kappa_mhz, rates.gamma_00_mhz);
}

PlanOptions RunConfig::plan_options() const {
  PlanOptions p;
  p.check_collisions = check_collisions;
  p.collisions = collisions;
  return p;
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  check_keys(j, {"system", "drive", "target", "truncation", "rates", "integrator", "collisions", "initial_state",
                 "scan", "ground_scan", "wigner", "tables", "output", "threads", "seed"},
             "");

  const json& sys = section(j, "system");
  check_keys(sys, {"omega_z_ghz", "omega_x_ghz", "omega_ghz", "eta"}, "system");
  read(sys, "omega_z_ghz", c.system.omega_z_ghz, "system");
  read(sys, "omega_x_ghz", c.system.omega_x_ghz, "system");
  read(sys, "omega_ghz", c.system.omega_ghz, "system");
  read(sys, "eta", c.system.eta, "system");
  positive(c.system.omega_z_ghz, "system.omega_z_ghz");
  positive(c.system.omega_x_ghz, "system.omega_x_ghz");
  positive(c.system.omega_ghz, "system.omega_ghz");
  positive(c.system.eta, "system.eta");

  const json& drv = section(j, "drive");
  check_keys(drv, {"N", "x_d"}, "drive");
  read(drv, "N", c.drive.N, "drive");
  read(drv, "x_d", c.drive.x_d, "drive");
  if (c.drive.N == 0) throw ConfigError("drive.N must be nonzero");
  positive(c.drive.x_d, "drive.x_d");

  const json& tgt = section(j, "target");
  check_keys(tgt, {"branch", "coeffs", "normalize"}, "target");
  std::string branch = "g";
  read(tgt, "branch", branch, "target");
  if (branch == "g") c.target.branch = QubitBranch::g;
  else if (branch == "e") c.target.branch = QubitBranch::e;
  else throw ConfigError("target.branch must be \"g\" or \"e\"");
  if (tgt.contains("coeffs")) c.target.coeffs = parse_coeffs(tgt.at("coeffs"));
  read(tgt, "normalize", c.target.normalize, "target");

  const json& tr = section(j, "truncation");
  check_keys(tr, {"dim", "leak_tol"}, "truncation");
  read(tr, "dim", c.truncation.dim, "truncation");
  read(tr, "leak_tol", c.truncation.leak_tol, "truncation");
  at_least(c.truncation.dim, 4, "truncation.dim");
  if (!(c.truncation.leak_tol >= 0.0 && c.truncation.leak_tol < 1.0))
    throw ConfigError("truncation.leak_tol must lie in [0, 1)");

  const json& rt = section(j, "rates");
  check_keys(rt, {"gamma_10_mhz", "gamma_11_mhz", "gamma_00_mhz", "kappa_mhz"}, "rates");
  read(rt, "gamma_10_mhz", c.rates.gamma_10_mhz, "rates");
  read(rt, "gamma_11_mhz", c.rates.gamma_11_mhz, "rates");
  read(rt, "gamma_00_mhz", c.rates.gamma_00_mhz, "rates");
  read(rt, "kappa_mhz", c.rates.kappa_mhz, "rates");
  non_negative(c.rates.gamma_10_mhz, "rates.gamma_10_mhz");
  non_negative(c.rates.gamma_11_mhz, "rates.gamma_11_mhz");
  non_negative(c.rates.gamma_00_mhz, "rates.gamma_00_mhz");
  non_negative(c.rates.kappa_mhz, "rates.kappa_mhz");

  const json& in = section(j, "integrator");
  check_keys(in, {"tol", "max_step_fraction", "positivity_tol"}, "integrator");
  read(in, "tol", c.integrator.tol, "integrator");
  read(in, "max_step_fraction", c.integrator.max_step_fraction, "integrator");
  read(in, "positivity_tol", c.integrator.positivity_tol, "integrator");
  positive(c.integrator.tol, "integrator.tol");
  positive(c.integrator.max_step_fraction, "integrator.max_step_fraction");
  non_negative(c.integrator.positivity_tol, "integrator.positivity_tol");

  const json& col = section(j, "collisions");
  check_keys(col, {"check", "rel_tol", "N_range", "k_range"}, "collisions");
  read(col, "check", c.check_collisions, "collisions");
  read(col, "rel_tol", c.collisions.rel_tol, "collisions");
  read(col, "N_range", c.collisions.N_range, "collisions");
  read(col, "k_range", c.collisions.k_range, "collisions");
  positive(c.collisions.rel_tol, "collisions.rel_tol");

  if (j.contains("initial_state")) {
    std::string s;
    read(j, "initial_state", s, "config");
    if (s == "displaced_vacuum") c.initial_state = InitialState::displaced_vacuum;
    else if (s == "ground") c.initial_state = InitialState::ground;
    else throw ConfigError("initial_state must be \"displaced_vacuum\" or \"ground\"");
  }

  const json& sc = section(j, "scan");
  check_keys(sc, {"eta", "x_d"}, "scan");
  read(sc, "eta", c.scan.eta, "scan");
  read(sc, "x_d", c.scan.x_d, "scan");
  if (c.scan.eta.empty() || c.scan.x_d.empty()) throw ConfigError("scan.eta and scan.x_d must be non-empty");
  for (double v : c.scan.eta) positive(v, "scan.eta");
  for (double v : c.scan.x_d) positive(v, "scan.x_d");

  const json& gs = section(j, "ground_scan");
  check_keys(gs, {"eta_min", "eta_max", "n_eta", "ratio_min", "ratio_max", "n_ratio", "dim"}, "ground_scan");
  read(gs, "eta_min", c.ground_scan.eta_min, "ground_scan");
  read(gs, "eta_max", c.ground_scan.eta_max, "ground_scan");
  read(gs, "n_eta", c.ground_scan.n_eta, "ground_scan");
  read(gs, "ratio_min", c.ground_scan.ratio_min, "ground_scan");
  read(gs, "ratio_max", c.ground_scan.ratio_max, "ground_scan");
  read(gs, "n_ratio", c.ground_scan.n_ratio, "ground_scan");
  read(gs, "dim", c.ground_scan.dim, "ground_scan");
  non_negative(c.ground_scan.eta_min, "ground_scan.eta_min");
  non_negative(c.ground_scan.ratio_min, "ground_scan.ratio_min");
  if (c.ground_scan.eta_max < c.ground_scan.eta_min) throw ConfigError("ground_scan.eta_max < eta_min");
  if (c.ground_scan.ratio_max < c.ground_scan.ratio_min) throw ConfigError("ground_scan.ratio_max < ratio_min");
  at_least(c.ground_scan.n_eta, 1, "ground_scan.n_eta");
  at_least(c.ground_scan.n_ratio, 1, "ground_scan.n_ratio");
  at_least(c.ground_scan.dim, 4, "ground_scan.dim");

  const json& wg = section(j, "wigner");
  check_keys(wg, {"x_min", "x_max", "y_min", "y_max", "nx", "ny"}, "wigner");
  read(wg, "x_min", c.wigner.x_min, "wigner");
  read(wg, "x_max", c.wigner.x_max, "wigner");
  read(wg, "y_min", c.wigner.y_min, "wigner");
  read(wg, "y_max", c.wigner.y_max, "wigner");
  read(wg, "nx", c.wigner.nx, "wigner");
  read(wg, "ny", c.wigner.ny, "wigner");
  at_least(c.wigner.nx, 1, "wigner.nx");
  at_least(c.wigner.ny, 1, "wigner.ny");
  if (!(c.wigner.x_max >= c.wigner.x_min) || !(c.wigner.y_max >= c.wigner.y_min))
    throw ConfigError("wigner range is empty");

  const json& tb = section(j, "tables");
  check_keys(tb, {"x_d_max", "n_x_d", "eta_max", "n_eta", "photon_eta", "n_photon", "n_max_uniform"}, "tables");
  read(tb, "x_d_max", c.tables.x_d_max, "tables");
  read(tb, "n_x_d", c.tables.n_x_d, "tables");
  read(tb, "eta_max", c.tables.eta_max, "tables");
  read(tb, "n_eta", c.tables.n_eta, "tables");
  read(tb, "photon_eta", c.tables.photon_eta, "tables");
  read(tb, "n_photon", c.tables.n_photon, "tables");
  read(tb, "n_max_uniform", c.tables.n_max_uniform, "tables");
  positive(c.tables.x_d_max, "tables.x_d_max");
  positive(c.tables.eta_max, "tables.eta_max");
  positive(c.tables.photon_eta, "tables.photon_eta");
  at_least(c.tables.n_x_d, 2, "tables.n_x_d");
  at_least(c.tables.n_eta, 2, "tables.n_eta");
  at_least(c.tables.n_photon, 1, "tables.n_photon");
  at_least(c.tables.n_max_uniform, 1, "tables.n_max_uniform");

  const json& outp = section(j, "output");
  check_keys(outp, {"dir"}, "output");
  read(outp, "dir", c.output_dir, "output");

  read(j, "threads", c.threads, "config");
  at_least(c.threads, 1, "threads");
  read(j, "seed", c.seed, "config");
  return c;
}

json config_to_json(const RunConfig& c) {
  json coeffs = json::array();
  for (const cplx& z : c.target.coeffs) coeffs.push_back({z.real(), z.imag()});
  return {
      {"system",
       {{"omega_z_ghz", c.system.omega_z_ghz},
        {"omega_x_ghz", c.system.omega_x_ghz},
        {"omega_ghz", c.system.omega_ghz},
        {"eta", c.system.eta}}},
      {"drive", {{"N", c.drive.N}, {"x_d", c.drive.x_d}}},
      {"target",
       {{"branch", c.target.branch == QubitBranch::g ? "g" : "e"}, {"coeffs", coeffs}, {"normalize", c.target.normalize}}},
      {"truncation", {{"dim", c.truncation.dim}, {"leak_tol", c.truncation.leak_tol}}},
      {"rates",
       {{"gamma_10_mhz", c.rates.gamma_10_mhz},
        {"gamma_11_mhz", c.rates.gamma_11_mhz},
        {"gamma_00_mhz", c.rates.gamma_00_mhz},
        {"kappa_mhz", c.rates.kappa_mhz}}},
      {"integrator",
       {{"tol", c.integrator.tol},
        {"max_step_fraction", c.integrator.max_step_fraction},
        {"positivity_tol", c.integrator.positivity_tol}}},
      {"collisions",
       {{"check", c.check_collisions},
        {"rel_tol", c.collisions.rel_tol},
        {"N_range", c.collisions.N_range},
        {"k_range", c.collisions.k_range}}},
      {"initial_state", c.initial_state == InitialState::ground ? "ground" : "displaced_vacuum"},
      {"scan", {{"eta", c.scan.eta}, {"x_d", c.scan.x_d}}},
      {"ground_scan",
       {{"eta_min", c.ground_scan.eta_min},
        {"eta_max", c.ground_scan.eta_max},
        {"n_eta", c.ground_scan.n_eta},
        {"ratio_min", c.ground_scan.ratio_min},
        {"ratio_max", c.ground_scan.ratio_max},
        {"n_ratio", c.ground_scan.n_ratio},
        {"dim", c.ground_scan.dim}}},
      {"wigner",
       {{"x_min", c.wigner.x_min},
        {"x_max", c.wigner.x_max},
        {"y_min", c.wigner.y_min},
        {"y_max", c.wigner.y_max},
        {"nx", c.wigner.nx},
        {"ny", c.wigner.ny}}},
      {"tables",
       {{"x_d_max", c.tables.x_d_max},
        {"n_x_d", c.tables.n_x_d},
        {"eta_max", c.tables.eta_max},
        {"n_eta", c.tables.n_eta},
        {"photon_eta", c.tables.photon_eta},
        {"n_photon", c.tables.n_photon},
        {"n_max_uniform", c.tables.n_max_uniform}}},
      {"output", {{"dir", c.output_dir}}},
      {"threads", c.threads},
      {"seed", c.seed},
  };
}

void apply_override(json& j, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + assignment + "'");
  std::string key = assignment.substr(0, eq), text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  json* node = &j;
  std::size_t start = 0;
  while (true) {
    auto dot = key.find('.', start);
    std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("empty path component in '" + key + "'");
    if (!node->is_object()) throw ConfigError("'" + key + "' descends into a non-object");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  json j = json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigError("config '" + path + "' is not valid JSON");
  }
  for (const auto& o : overrides) apply_override(j, o);
  return config_from_json(j);
}

std::string config_hash(const RunConfig& c) {
  // Thread count and output location do not change results.
  json j = config_to_json(c);
  j.erase("threads");
  j.erase("output");
  const std::string text = j.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string csv_metadata(const RunConfig& c, const std::string& command) {
  return "command=" + command + " config_hash=" + config_hash(c) +
         " units=frequency:GHz(ordinary;x2pi internally),time:ns,rate:MHz(ordinary),phase:rad";
}

}  // namespace focksynth::cli
