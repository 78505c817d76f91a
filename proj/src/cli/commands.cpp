#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <thread>

#include <boost/math/tools/minima.hpp>

#include "CLI11.hpp"

#include "focksynth/cli.hpp"
#include "focksynth/errors.hpp"

namespace focksynth::cli {

using nlohmann::json;

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// RFC 4180 quoting for free-text fields.
std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + "\"";
}

std::filesystem::path out_path(const RunConfig& c, const std::string& name) {
  std::filesystem::create_directories(c.output_dir);
  return std::filesystem::path(c.output_dir) / name;
}

std::ofstream open_csv(const RunConfig& c, const std::string& name, const std::string& command,
                       const std::string& header) {
  std::ofstream f(out_path(c, name));
  if (!f) throw ConfigError("cannot write " + name + " in " + c.output_dir);
  f << "# " << csv_metadata(c, command) << "\n" << header << "\n";
  return f;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return v;
}

// Runs task(i) for i in [0, n) on `threads` workers; results are written by index.
void parallel_for(int n, int threads, const std::function<void(int)>& task) {
  threads = std::clamp(threads, 1, std::max(1, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) task(i);
    });
  for (auto& th : pool) th.join();
}

double rotation_angle(const PulseStep& s) { return s.rabi * s.duration; }

}  // namespace

json schedule_to_json(const PulseSchedule& s) {
  json steps = json::array();
  for (const PulseStep& st : s.steps)
    steps.push_back({{"kind", to_string(st.spec.kind)},
                     {"N", st.spec.N},
                     {"k", st.spec.k},
                     {"omega_d_GHz", angular_to_ghz(st.omega_d)},
                     {"phi_d_rad", st.phi_d},
                     {"t_ns", st.duration}});
  return {{"steps", steps}, {"total_time_ns", s.total_time}, {"eta", s.eta}, {"x_d", s.x_d}};
}

int cmd_plan(const RunConfig& c, std::ostream& out) {
  const SystemParams sys = c.system_params();
  const TargetState target = c.target_state();
  const PulseSchedule sched = plan_schedule(target, sys, c.drive.N, c.drive.x_d, c.plan_options());
  {
    std::ofstream f(out_path(c, "schedule.json"));
    f << schedule_to_json(sched).dump(2) << "\n";
  }
  char line[160];
  out << "step  kind     N   k   omega_d/2pi[GHz]  phi_d[rad]   t[ns]       |Omega|t[rad]\n";
  for (const PulseStep& st : sched.steps) {
    std::snprintf(line, sizeof line, "%-5d %-8s %-3d %-3d %-17.6f %-12.6f %-11.6f %.6f\n", st.step_index,
                  to_string(st.spec.kind).c_str(), st.spec.N, st.spec.k, angular_to_ghz(st.omega_d), st.phi_d,
                  st.duration, rotation_angle(st));
    out << line;
  }
  std::snprintf(line, sizeof line, "steps=%zu T=%.6f ns T_tilde=%.6f eta=%.6g x_d=%.6g\n", sched.steps.size(),
                sched.total_time, sched.normalized_time, sched.eta, sched.x_d);
  out << line;
  return ok;
}

int cmd_scan_fidelity(const RunConfig& c, std::ostream& out) {
  const TargetState target = c.target_state();
  const LindbladRates rates = c.lindblad_rates();
  struct Row {
    double eta = 0, x_d = 0, F = std::nan(""), T = std::nan(""), leak = std::nan("");
    std::string reason;
  };
  std::vector<Row> rows;
  for (double x : c.scan.x_d)
    for (double e : c.scan.eta) {
      Row r;
      r.eta = e;
      r.x_d = x;
      rows.push_back(r);
    }
  parallel_for(static_cast<int>(rows.size()), c.threads, [&](int i) {
    Row& r = rows[i];
    try {
      const SystemParams sys = c.system_params(r.eta);
      GenerationResult g = run_generation(target, sys, c.drive.N, r.x_d, c.truncation, rates, c.initial_state,
                                          c.integrator, c.plan_options());
      r.F = g.fidelity;
      r.T = plan_schedule(target, sys, c.drive.N, r.x_d, c.plan_options()).total_time;
      r.leak = g.leakage;
    } catch (const std::exception& ex) {
      r.reason = ex.what();
    }
  });
  std::ofstream f = open_csv(c, "fidelity_scan.csv", "scan-fidelity", "eta,x_d,F,T_ns,leakage,reason");
  const Row* best = nullptr;
  for (const Row& r : rows) {
    f << num(r.eta) << ',' << num(r.x_d) << ',' << num(r.F) << ',' << num(r.T) << ',' << num(r.leak) << ','
      << quote(r.reason) << "\n";
    if (std::isfinite(r.F) && (!best || r.F > best->F)) best = &r;
  }
  out << "points=" << rows.size() << " " << (rates.any() ? "lindblad" : "schrodinger");
  if (best) out << " max F=" << num(best->F) << " at eta=" << num(best->eta) << " x_d=" << num(best->x_d);
  out << "\n";
  return ok;
}

int cmd_scan_ground(const RunConfig& c, std::ostream& out) {
  const GroundScanSection& g = c.ground_scan;
  const auto etas = linspace(g.eta_min, g.eta_max, g.n_eta);
  const auto ratios = linspace(g.ratio_min, g.ratio_max, g.n_ratio);
  struct Row {
    double eta = 0, ratio = 0, p = std::nan(""), p2 = std::nan("");
    std::string reason;
  };
  std::vector<Row> rows;
  for (double r : ratios)
    for (double e : etas) {
      Row row;
      row.eta = e;
      row.ratio = r;
      rows.push_back(row);
    }
  parallel_for(static_cast<int>(rows.size()), c.threads, [&](int i) {
    Row& r = rows[i];
    try {
      SystemParams sys = SystemParams::from_ghz_eta(c.system.omega_z_ghz, r.ratio * c.system.omega_z_ghz,
                                                    c.system.omega_ghz, r.eta);
      FockConfig f1{g.dim, c.truncation.leak_tol}, f2{2 * g.dim, c.truncation.leak_tol};
      r.p = ground_vacuum_probability(sys, f1);
      r.p2 = ground_vacuum_probability(sys, f2);
    } catch (const std::exception& ex) {
      r.reason = ex.what();
    }
  });
  std::ofstream f =
      open_csv(c, "ground_scan.csv", "scan-ground", "eta,omega_x_over_omega_z,P_g0,P_g0_double_dim,abs_diff,reason");
  double pmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
  for (const Row& r : rows) {
    double d = std::abs(r.p - r.p2);
    f << num(r.eta) << ',' << num(r.ratio) << ',' << num(r.p) << ',' << num(r.p2) << ',' << num(d) << ','
      << quote(r.reason) << "\n";
    if (std::isfinite(r.p)) {
      pmin = std::min(pmin, r.p);
      dmax = std::max(dmax, d);
    }
  }
  out << "points=" << rows.size() << " min P_g0=" << num(pmin) << " max dim difference=" << num(dmax) << "\n";
  return ok;
}

int cmd_wigner(const RunConfig& c, std::ostream& out) {
  const SystemParams sys = c.system_params();
  const TargetState target = c.target_state();
  const FockConfig& cfg = c.truncation;
  GenerationResult g = run_generation(target, sys, c.drive.N, c.drive.x_d, cfg, c.lindblad_rates(), c.initial_state,
                                      c.integrator, c.plan_options());
  const DensityMatrix ideal_disp =
      DensityMatrix::from_state(QuantumState{target.as_vector(cfg.dim), cfg.dim, Picture::displaced});
  struct Item {
    const char* name;
    const char* file;
    Matrix rho_c;
  };
  std::vector<Item> items{{"ideal_displaced", "wigner_ideal_displaced.csv", trace_out_qubit(ideal_disp)},
                          {"ideal_original", "wigner_ideal_original.csv", trace_out_qubit(g.target)},
                          {"actual", "wigner_actual.csv", trace_out_qubit(g.rho)}};
  json peaks = json::object();
  for (const Item& it : items) {
    WignerGrid w = wigner_from_density(it.rho_c, c.wigner, c.threads);
    std::ofstream f(out_path(c, it.file));
    write_wigner_csv(f, w, csv_metadata(c, std::string("wigner:") + it.name));
    Peak p = find_peak(w);
    double integral = grid_integral(w);
    peaks[it.name] = {{"x", p.x}, {"y", p.y}, {"W", p.value}, {"integral", integral}};
    out << it.name << ": peak x*=" << num(p.x) << " y*=" << num(p.y) << " W=" << num(p.value)
        << " integral=" << num(integral) << "\n";
  }
  peaks["fidelity"] = g.fidelity;
  std::ofstream(out_path(c, "wigner_peaks.json")) << peaks.dump(2) << "\n";
  out << "fidelity=" << num(g.fidelity) << "\n";
  return ok;
}

int cmd_tables(const RunConfig& c, std::ostream& out) {
  const TablesSection& t = c.tables;
  const auto xs = linspace(0.0, t.x_d_max, t.n_x_d);
  const auto etas = linspace(0.0, t.eta_max, t.n_eta);
  {
    std::ofstream f = open_csv(c, "bessel.csv", "tables:bessel", "x_d,J0,J1,J2,J3");
    for (double x : xs)
      f << num(x) << ',' << num(bessel_j(0, x)) << ',' << num(bessel_j(1, x)) << ',' << num(bessel_j(2, x)) << ','
        << num(bessel_j(3, x)) << "\n";
  }
  {
    std::ofstream f = open_csv(c, "multiphoton.csv", "tables:multiphoton", "eta,x_d,J1_00,J1_01,J1_11");
    for (double e : etas)
      for (double x : xs)
        f << num(e) << ',' << num(x) << ',' << num(multiphoton_coupling_magnitude(1, 0, 0, e, x)) << ','
          << num(multiphoton_coupling_magnitude(1, 0, 1, e, x)) << ','
          << num(multiphoton_coupling_magnitude(1, 1, 1, e, x)) << "\n";
  }
  {
    std::ofstream f = open_csv(c, "reduced_rabi.csv", "tables:reduced_rabi", "eta,n1,n2,n3,n4,n5");
    for (double e : etas) {
      f << num(e);
      for (int n = 1; n <= 5; ++n) f << ',' << num(reduced_rabi_frequency(n, e));
      f << "\n";
    }
    std::ofstream m = open_csv(c, "reduced_rabi_maxima.csv", "tables:reduced_rabi", "n,eta_numeric,eta_sqrt_n,value");
    for (int n = 1; n <= 5; ++n) {
      auto r = boost::math::tools::brent_find_minima([n](double e) { return -reduced_rabi_frequency(n, e); }, 1e-3,
                                                     t.eta_max + 2.0, 52);
      m << n << ',' << num(r.first) << ',' << num(std::sqrt(n)) << ',' << num(-r.second) << "\n";
    }
  }
  {
    const int K = t.n_max_uniform;
    std::vector<TargetState> targets;
    for (int n = 1; n <= K; ++n) targets.push_back(TargetState::normalized(std::vector<cplx>(n + 1, 1.0)));
    std::string header = "eta";
    for (int n = 1; n <= K; ++n) header += ",n_max" + std::to_string(n);
    std::ofstream f = open_csv(c, "normalized_time.csv", "tables:normalized_time", header);
    for (double e : etas) {
      if (e <= 0.0) continue;
      f << num(e);
      for (const auto& tg : targets) f << ',' << num(normalized_total_time(tg, e));
      f << "\n";
    }
    std::ofstream m =
        open_csv(c, "normalized_time_minima.csv", "tables:normalized_time", "n_max,eta_opt,T_tilde,interior");
    for (int n = 1; n <= K; ++n) {
      EtaOptimum o = optimize_eta(targets[n - 1], 1e-3, t.eta_max);
      m << n << ',' << num(o.eta) << ',' << num(o.t_tilde) << ',' << (o.interior ? "true" : "false") << "\n";
      out << "uniform n_max=" << n << ": eta_opt=" << num(o.eta) << " T_tilde=" << num(o.t_tilde) << "\n";
    }
  }
  {
    const double e = t.photon_eta;
    const double s = std::sqrt(0.5);
    TargetState a{{1.0}, QubitBranch::g}, b{{0.0, 0.0, 1.0}, QubitBranch::g}, ab{{s, 0.0, s}, QubitBranch::g};
    std::ofstream f = open_csv(c, "photon_distributions.csv", "tables:photon", "l,P_vacuum,P_two,P_superposition");
    for (int l = 0; l < t.n_photon; ++l)
      f << l << ',' << num(displaced_target_probability(a, e, l)) << ',' << num(displaced_target_probability(b, e, l))
        << ',' << num(displaced_target_probability(ab, e, l)) << "\n";
  }
  out << "tables written to " << c.output_dir << "\n";
  return ok;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fock-state superposition synthesis with longitudinal coupling"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  int dim = 0, threads = 0;
  std::vector<std::string> sets;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--dim", dim, "Fock truncation")->check(CLI::PositiveNumber);
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--set", sets, "override key=value (repeatable)");
  };
  struct Cmd {
    const char* name;
    const char* help;
    int (*fn)(const RunConfig&, std::ostream&);
  };
  const Cmd cmds[] = {{"plan", "plan a pulse schedule", cmd_plan},
                      {"scan-fidelity", "fidelity over an (eta, x_d) lattice", cmd_scan_fidelity},
                      {"scan-ground", "vacuum weight of the ground state", cmd_scan_ground},
                      {"wigner", "Wigner grids of ideal and generated states", cmd_wigner},
                      {"tables", "Bessel, Rabi, generation-time and photon-distribution curves", cmd_tables}};
  std::vector<CLI::App*> subs;
  for (const Cmd& c : cmds) {
    subs.push_back(app.add_subcommand(c.name, c.help));
    add_common(subs.back());
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }
  try {
    if (dim > 0) sets.push_back("truncation.dim=" + std::to_string(dim));
    if (threads > 0) sets.push_back("threads=" + std::to_string(threads));
    if (!out_dir.empty()) sets.push_back("output.dir=" + json(out_dir).dump());
    RunConfig cfg = load_config(config_path, sets);
    for (std::size_t i = 0; i < subs.size(); ++i)
      if (subs[i]->parsed()) return cmds[i].fn(cfg, out);
    return usage;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return usage;
  } catch (const CollisionDetected& e) {
    err << "collision: " << e.what() << "\n";
    return collision;
  } catch (const PhaseUnsolvable& e) {
    err << "phase: " << e.what() << "\n";
    return phase_unsolvable;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return numeric_failure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return numeric_failure;
  }
}

}  // namespace focksynth::cli
