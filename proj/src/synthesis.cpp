#include "focksynth/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <Eigen/Eigenvalues>

#include "focksynth/errors.hpp"

namespace focksynth {

namespace {

constexpr int s_g = -1;
constexpr int s_e = +1;

double weight_above(const std::vector<cplx>& c, int n) {
  double w = 0.0;
  for (std::size_t k = n; k < c.size(); ++k) w += std::norm(c[k]);
  return std::sqrt(w);
}

// arcsin(|C_n| / sqrt(sum_{k>=n} |C_k|^2)), clamped against rounding.
double step_angle(const std::vector<cplx>& c, int n) {
  double r = weight_above(c, n);
  if (r == 0.0) return 0.0;
  return std::asin(std::clamp(std::abs(c[n]) / r, 0.0, 1.0));
}

double carrier_angle(const TargetState& t) {
  double c0 = std::clamp(std::abs(t.coeffs[0]), 0.0, 1.0);
  return t.branch == QubitBranch::g ? std::acos(c0) : std::asin(c0);
}

double log_factorial(int n) { return std::lgamma(n + 1.0); }

// Smallest-|phi| root on (-pi, pi] of f(phi) = 2 pi m for some integer m.
template <class F>
std::optional<double> solve_phase(F f, int points, double tol) {
  const double a = -pi, h = two_pi / points;
  std::optional<double> best;
  auto consider = [&](double phi) {
    if (phi <= -pi + 1e-15) phi = pi;
    if (!best || std::abs(phi) < std::abs(*best)) best = phi;
  };
  double x0 = a, f0 = f(x0);
  for (int i = 1; i <= points; ++i) {
    double x1 = a + i * h, f1 = f(x1);
    double lo = std::min(f0, f1), hi = std::max(f0, f1);
    for (double m = std::ceil(lo / two_pi); m * two_pi <= hi; m += 1.0) {
      double target = m * two_pi;
      double xa = x0, xb = x1, fa = f0 - target;
      if (fa == 0.0) { consider(xa); continue; }
      for (int it = 0; it < 200 && xb - xa > tol; ++it) {
        double xm = 0.5 * (xa + xb), fm = f(xm) - target;
        if ((fm < 0) == (fa < 0)) { xa = xm; fa = fm; } else { xb = xm; }
      }
      consider(0.5 * (xa + xb));
    }
    x0 = x1;
    f0 = f1;
  }
  return best;
}

struct StepContext {
  const SystemParams& sys;
  double x_d;
  SidebandSpec spec;
  double omega_d;
  double t;
  double rabi_offset;  // arg Omega at phi_d = 0
};

// Propagator phase of the driven transition, continuous in phi_d.
double transition_phase(const StepContext& c, double phi, bool upward) {
  double phase = c.spec.N * phi + c.rabi_offset;
  return (upward ? phase : -phase) - pi / 2;
}

}  // namespace

void TargetState::validate(const FockConfig* cfg) const {
  if (coeffs.empty()) throw DomainError("target state has no coefficients");
  double w = 0.0;
  for (auto& c : coeffs) w += std::norm(c);
  if (std::abs(w - 1.0) > 1e-12) throw DomainError("target state is not normalized");
  if (cfg && n_max() + 2 >= cfg->dim) throw TruncationError("target n_max + 2 must be below the Fock dimension");
}

int TargetState::effective_n_max() const {
  for (int n = n_max(); n > 0; --n)
    if (std::norm(coeffs[n]) > 1e-30) return n;
  return 0;
}

TargetState TargetState::normalized(std::vector<cplx> coeffs, QubitBranch branch) {
  double w = 0.0;
  for (auto& c : coeffs) w += std::norm(c);
  if (w == 0.0) throw DomainError("target state has zero norm");
  for (auto& c : coeffs) c /= std::sqrt(w);
  return {std::move(coeffs), branch};
}

Vector TargetState::as_vector(int dim) const {
  if (n_max() >= dim) throw TruncationError("target does not fit in the Fock space");
  Vector v = Vector::Zero(2 * dim);
  int offset = branch == QubitBranch::g ? 0 : dim;
  for (int n = 0; n <= n_max(); ++n) v(offset + n) = coeffs[n];
  return v;
}

double step_frame_phase(int /*n_in*/, int s_in, int n_out, int s_out, double t, double omega_d, double phi_d,
                        double x_d, const SystemParams& sys) {
  return 0.5 * x_d * s_in * std::sin(phi_d) - (0.5 * s_out * sys.omega_z + n_out * sys.omega_cav) * t -
         0.5 * x_d * s_out * std::sin(omega_d * t + phi_d);
}

PulseSchedule plan_schedule(const TargetState& target, const SystemParams& sys, int N, double x_d,
                            const PlanOptions& opts) {
  target.validate();
  sys.validate();
  if (N == 0) throw DomainError("Bessel order N must be nonzero");
  if (!(x_d > 0.0)) throw DomainError("x_d must be positive");

  const bool red = target.branch == QubitBranch::g;
  const int n_max = target.effective_n_max();
  const double eta = sys.eta();
  const double jn = bessel_j(N, x_d);
  if (std::abs(jn) < 1e-14) throw ZeroBessel("J_N(x_d) vanishes; no process can be driven");
  if (n_max > 0 && !(eta > 0.0)) throw DomainError("sidebands need a nonzero Lamb-Dicke parameter");

  PulseSchedule sched;
  sched.eta = eta;
  sched.x_d = x_d;
  sched.N = N;
  sched.branch = target.branch;

  const std::vector<cplx>& C = target.coeffs;
  if (red && n_max == 0) {
    // |0>|g> is the initial state.
    sched.global_phase = std::arg(C[0]);
    return sched;
  }

  // Durations and drive frequencies, forward order.
  std::vector<StepContext> ctx;
  for (int n = 0; n <= n_max; ++n) {
    SidebandSpec spec{n == 0 ? SidebandKind::carrier : (red ? SidebandKind::red : SidebandKind::blue), N, n};
    double wd = resonant_drive_frequency(spec, sys);
    if (opts.check_collisions) {
      auto hits = collision_report(spec, sys, opts.collisions);
      if (!hits.empty()) throw CollisionDetected("drive for " + to_string(spec.kind) + " k=" + std::to_string(n) +
                                                 " also drives another process");
    }
    double rabi = std::abs(complex_rabi_frequency(spec, 0, sys, x_d, 0.0));
    double angle = n == 0 ? carrier_angle(target) : step_angle(C, n);
    double offset = std::arg(complex_rabi_frequency(spec, 0, sys, x_d, 0.0));
    ctx.push_back({sys, x_d, spec, wd, angle / rabi, offset});
  }

  const int s_keep = red ? s_g : s_e;
  const int s_res = -s_keep;

  // Backward pass: after-step amplitudes of kept levels and the reservoir |0, s_res>.
  std::vector<cplx> kept(C.begin(), C.begin() + n_max + 1);
  cplx res = 0.0;
  std::vector<double> phis(n_max + 1, 0.0);

  auto unsolvable = [](int n) { return PhaseUnsolvable("no drive phase for step " + std::to_string(n)); };

  for (int n = n_max; n >= 1; --n) {
    const StepContext& c = ctx[n];
    const double th = c.t * std::abs(complex_rabi_frequency(c.spec, 0, sys, x_d, 0.0));
    const double cs = std::cos(th), sn = std::sin(th);
    // Reservoir argument is taken as zero once it has been emptied.
    const double arg_res = std::abs(res) > 0.0 ? std::arg(res) : 0.0;
    double phi = 0.0;
    if (std::abs(kept[n]) > 0.0 && sn > 0.0) {
      const double delta = std::arg(kept[n]) - arg_res;
      auto f = [&](double p) {
        return step_frame_phase(0, s_res, n, s_keep, c.t, c.omega_d, p, x_d, sys) + transition_phase(c, p, !red) -
               step_frame_phase(0, s_res, 0, s_res, c.t, c.omega_d, p, x_d, sys) - delta;
      };
      auto root = solve_phase(f, opts.phase_scan_points, opts.phase_tol);
      if (!root) throw unsolvable(n);
      phi = *root;
    }
    phis[n] = phi;
    for (int j = 0; j < n; ++j)
      kept[j] *= std::polar(1.0, -step_frame_phase(j, s_keep, j, s_keep, c.t, c.omega_d, phi, x_d, sys));
    if (sn >= cs) {
      double ph = step_frame_phase(0, s_res, n, s_keep, c.t, c.omega_d, phi, x_d, sys) + transition_phase(c, phi, !red);
      res = kept[n] * std::polar(1.0 / sn, -ph);
    } else {
      double ph = step_frame_phase(0, s_res, 0, s_res, c.t, c.omega_d, phi, x_d, sys);
      res = res * std::polar(1.0 / cs, -ph);
    }
  }

  // Carrier: |0,g> -> cos |0,g> + sin |0,e>.
  {
    const StepContext& c = ctx[0];
    const double th = carrier_angle(target);
    const double cs = std::cos(th), sn = std::sin(th);
    cplx amp_g = red ? kept[0] : res;
    cplx amp_e = red ? res : kept[0];
    double phi = 0.0;
    if (std::abs(amp_g) > 0.0 && std::abs(amp_e) > 0.0) {
      const double delta = std::arg(amp_e) - std::arg(amp_g);
      auto f = [&](double p) {
        return step_frame_phase(0, s_g, 0, s_e, c.t, c.omega_d, p, x_d, sys) + transition_phase(c, p, true) -
               step_frame_phase(0, s_g, 0, s_g, c.t, c.omega_d, p, x_d, sys) - delta;
      };
      auto root = solve_phase(f, opts.phase_scan_points, opts.phase_tol);
      if (!root) throw unsolvable(0);
      phi = *root;
    }
    phis[0] = phi;
    cplx initial;
    if (sn >= cs) {
      initial = amp_e * std::polar(1.0 / sn, -(step_frame_phase(0, s_g, 0, s_e, c.t, c.omega_d, phi, x_d, sys) +
                                              transition_phase(c, phi, true)));
    } else {
      initial = amp_g * std::polar(1.0 / cs, -step_frame_phase(0, s_g, 0, s_g, c.t, c.omega_d, phi, x_d, sys));
    }
    sched.global_phase = -std::arg(initial);
  }

  double total = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    const StepContext& c = ctx[n];
    PulseStep st;
    st.spec = c.spec;
    st.omega_d = c.omega_d;
    st.Omega_d = 0.5 * x_d * c.omega_d;
    st.phi_d = phis[n];
    st.duration = c.t;
    st.step_index = n;
    st.rabi = std::abs(complex_rabi_frequency(c.spec, 0, sys, x_d, 0.0));
    total += c.t;
    sched.steps.push_back(st);
  }
  sched.total_time = total;
  sched.normalized_time = total * std::abs(sys.omega_x * jn) / 2.0;
  return sched;
}

std::vector<StepAmplitudes> forward_amplitudes(const PulseSchedule& schedule, const SystemParams& sys) {
  const bool red = schedule.branch == QubitBranch::g;
  const int s_keep = red ? s_g : s_e;
  const int s_res = -s_keep;
  const int n_max = static_cast<int>(schedule.steps.size()) - 1;
  const double x_d = schedule.x_d;
  std::vector<StepAmplitudes> out;
  if (n_max < 0) return out;
  StepAmplitudes cur{std::vector<cplx>(n_max + 1, 0.0), 0.0};
  for (const PulseStep& st : schedule.steps) {
    const int n = st.step_index;
    const StepContext c{sys, x_d, st.spec, st.omega_d, st.duration,
                        std::arg(complex_rabi_frequency(st.spec, 0, sys, x_d, 0.0))};
    const double th = st.rabi * st.duration;
    const double cs = std::cos(th), sn = std::sin(th);
    const double phi = st.phi_d;
    auto frame = [&](int n_in, int s_in, int n_out, int s_out) {
      return std::polar(1.0, step_frame_phase(n_in, s_in, n_out, s_out, st.duration, st.omega_d, phi, x_d, sys));
    };
    if (n == 0) {
      // Source |0,g> with unit amplitude.
      cplx stay = frame(0, s_g, 0, s_g) * cs;
      cplx up = frame(0, s_g, 0, s_e) * std::polar(sn, transition_phase(c, phi, true));
      cur.kept[0] = red ? stay : up;
      cur.auxiliary = red ? up : stay;
    } else {
      for (int j = 0; j < n; ++j) cur.kept[j] *= frame(j, s_keep, j, s_keep);
      cur.kept[n] = frame(0, s_res, n, s_keep) * std::polar(sn, transition_phase(c, phi, !red)) * cur.auxiliary;
      cur.auxiliary *= frame(0, s_res, 0, s_res) * cs;
    }
    out.push_back(cur);
  }
  return out;
}

Vector ideal_final_state(const PulseSchedule& schedule, const SystemParams& sys, const FockConfig& cfg) {
  cfg.validate();
  const int d = cfg.dim;
  Vector psi = Vector::Zero(2 * d);
  psi(0) = 1.0;
  const double x_d = schedule.x_d;
  for (const PulseStep& st : schedule.steps) {
    if (2 * st.spec.k >= d) throw TruncationError("Fock dimension too small for the schedule");
    for (int q = 0; q < 2; ++q) {
      int s = q == 0 ? s_g : s_e;
      for (int n = 0; n < d; ++n) psi(q * d + n) *= std::polar(1.0, 0.5 * x_d * s * std::sin(st.phi_d));
    }
    psi = evolution_operator(st.spec, st.duration, sys, x_d, st.phi_d, cfg) * psi;
    for (int q = 0; q < 2; ++q) {
      int s = q == 0 ? s_g : s_e;
      for (int n = 0; n < d; ++n) {
        double ph = -(0.5 * s * sys.omega_z + n * sys.omega_cav) * st.duration -
                    0.5 * x_d * s * std::sin(st.omega_d * st.duration + st.phi_d);
        psi(q * d + n) *= std::polar(1.0, ph);
      }
    }
  }
  if (top_level_weight(psi, d) > cfg.leak_tol) throw TruncationError("population reached the top Fock levels");
  return psi;
}

double simulate_ideal(const PulseSchedule& schedule, const TargetState& target, const SystemParams& sys,
                      const FockConfig& cfg) {
  target.validate(&cfg);
  Vector psi = ideal_final_state(schedule, sys, cfg);
  return std::norm(target.as_vector(cfg.dim).dot(psi));
}

double normalized_total_time(const TargetState& target, double eta) {
  target.validate();
  if (!(eta > 0.0)) throw DomainError("eta must be positive");
  const int n_max = target.effective_n_max();
  double sum = carrier_angle(target);
  for (int n = 1; n <= n_max; ++n)
    sum += std::exp(0.5 * log_factorial(n) - n * std::log(eta)) * step_angle(target.coeffs, n);
  return std::exp(0.5 * eta * eta) * sum;
}

TotalTime total_time(const TargetState& target, const SystemParams& sys, int N, double x_d, double eta) {
  double jn = bessel_j(N, x_d);
  if (std::abs(jn) < 1e-14) throw ZeroBessel("J_N(x_d) vanishes");
  if (!(sys.omega_x > 0.0)) throw DomainError("omega_x must be positive");
  TotalTime out;
  out.T_tilde = normalized_total_time(target, eta);
  out.T = 2.0 * out.T_tilde / std::abs(sys.omega_x * jn);
  return out;
}

std::vector<double> stationarity_coefficients(const TargetState& target) {
  target.validate();
  const int n_max = target.effective_n_max();
  // P_n = sqrt(n!) arcsin(...) for n = 1..n_max.
  auto P = [&](int n) {
    if (n < 1 || n > n_max) return 0.0;
    return std::exp(0.5 * log_factorial(n)) * step_angle(target.coeffs, n);
  };
  std::vector<double> A;
  A.push_back(carrier_angle(target));
  for (int j = 0; j <= n_max + 1; ++j) A.push_back(P(j + 1) - (j - 1) * P(j - 1));
  return A;
}

EtaOptimum optimize_eta(const TargetState& target, double eta_lo, double eta_hi) {
  if (!(eta_lo > 0.0) || !(eta_hi > eta_lo)) throw DomainError("need 0 < eta_lo < eta_hi");
  std::vector<double> A = stationarity_coefficients(target);
  // p(eta) = sum_j A_j eta^{deg - index(j)}, highest power first.
  while (A.size() > 1 && A.back() == 0.0) A.pop_back();
  while (A.size() > 1 && A.front() == 0.0) A.erase(A.begin());
  std::vector<double> roots;
  const int deg = static_cast<int>(A.size()) - 1;
  if (deg >= 1 && A[0] != 0.0) {
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 0; i < deg; ++i) comp(0, i) = -A[i + 1] / A[0];
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    if (es.info() != Eigen::Success) throw EigensolveFailure("companion matrix eigensolve failed");
    auto poly = [&](double x, double& dp) {
      double p = 0.0;
      dp = 0.0;
      for (double a : A) {
        dp = dp * x + p;
        p = p * x + a;
      }
      return p;
    };
    for (int i = 0; i < deg; ++i) {
      cplx z = es.eigenvalues()(i);
      if (std::abs(z.imag()) > 1e-6 * std::max(1.0, std::abs(z))) continue;
      double x = z.real();
      for (int it = 0; it < 20; ++it) {
        double dp, p = poly(x, dp);
        if (dp == 0.0) break;
        double step = p / dp;
        x -= step;
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(x))) break;
      }
      if (x > 0.0) roots.push_back(x);
    }
  }
  std::sort(roots.begin(), roots.end());
  EtaOptimum best;
  best.stationary_points = roots;
  best.t_tilde = std::numeric_limits<double>::infinity();
  auto consider = [&](double eta, bool interior) {
    double t = normalized_total_time(target, eta);
    if (t < best.t_tilde) {
      best.t_tilde = t;
      best.eta = eta;
      best.interior = interior;
    }
  };
  consider(eta_lo, false);
  consider(eta_hi, false);
  for (double r : roots)
    if (r > eta_lo && r < eta_hi) consider(r, true);
  return best;
}

}  // namespace focksynth
