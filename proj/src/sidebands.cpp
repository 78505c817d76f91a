#include "focksynth/sidebands.hpp"

#include <cmath>
#include <cstdlib>

#include "focksynth/errors.hpp"

namespace focksynth {

std::string to_string(SidebandKind kind) {
  switch (kind) {
    case SidebandKind::red: return "red";
    case SidebandKind::blue: return "blue";
    case SidebandKind::carrier: return "carrier";
  }
  return "?";
}

SidebandKind sideband_kind_from_string(const std::string& s) {
  if (s == "red") return SidebandKind::red;
  if (s == "blue") return SidebandKind::blue;
  if (s == "carrier") return SidebandKind::carrier;
  throw DomainError("unknown sideband kind '" + s + "'");
}

void SidebandSpec::validate() const {
  if (N == 0) throw DomainError("SidebandSpec: Bessel order N = 0 carries no drive assistance");
  if (kind == SidebandKind::carrier && k != 0) throw DomainError("SidebandSpec: carrier requires k = 0");
  if (kind != SidebandKind::carrier && k < 1) throw DomainError("SidebandSpec: red/blue require k >= 1");
}

namespace {

// Signed photon-number change j = m - n of the a^dag^m a^n term driven by the process.
int photon_change(const SidebandSpec& spec) {
  switch (spec.kind) {
    case SidebandKind::red: return -spec.k;
    case SidebandKind::blue: return spec.k;
    case SidebandKind::carrier: return 0;
  }
  return 0;
}

double process_frequency(int N, int j, const SystemParams& sys) {
  return -(sys.omega_z + j * sys.omega_cav) / N;
}

}  // namespace

double resonant_drive_frequency(const SidebandSpec& spec, const SystemParams& sys) {
  spec.validate();
  const double w = process_frequency(spec.N, photon_change(spec), sys);
  if (!(w > 0.0))
    throw NonPositiveDrive("resonant_drive_frequency: " + to_string(spec.kind) + " N=" + std::to_string(spec.N) +
                           " k=" + std::to_string(spec.k) + " needs omega_d = " + std::to_string(w) + " rad/ns");
  return w;
}

std::vector<Collision> collision_report(const SidebandSpec& spec, const SystemParams& sys,
                                        const CollisionOptions& opts) {
  std::vector<Collision> out;
  const double wd = resonant_drive_frequency(spec, sys);
  for (int n2 : opts.N_range) {
    if (n2 == spec.N || n2 == 0) continue;
    for (int k2 : opts.k_range) {
      for (SidebandKind kind : {SidebandKind::red, SidebandKind::blue, SidebandKind::carrier}) {
        if ((kind == SidebandKind::carrier) != (k2 == 0)) continue;
        const SidebandSpec other{kind, n2, k2};
        const double w2 = process_frequency(n2, photon_change(other), sys);
        if (w2 > 0.0 && std::abs(w2 - wd) <= opts.rel_tol * wd)
          out.push_back(Collision{Collision::Type::sideband, other, 0, 0});
      }
    }
  }
  const double ratio = sys.omega_z / sys.omega_cav;
  for (int divisor : {1, 2, 3}) {
    const double m = ratio * divisor;
    const double nearest = std::round(m);
    if (std::abs(m - nearest) <= opts.rel_tol * std::max(1.0, std::abs(m)))
      out.push_back(Collision{Collision::Type::commensurate, {}, divisor, static_cast<long>(nearest)});
  }
  return out;
}

cplx coupling_constant(const SidebandSpec& spec, const SystemParams& sys, double x_d, double phi_d) {
  spec.validate();
  const double eta = sys.eta();
  const double base = 0.5 * sys.omega_x * bessel_j(spec.N, x_d) * std::exp(-0.5 * eta * eta);
  const cplx phase = std::polar(1.0, spec.N * phi_d);
  switch (spec.kind) {
    case SidebandKind::carrier: return base * phase;
    case SidebandKind::blue: return base * std::pow(eta, spec.k) * phase;
    case SidebandKind::red: {
      const double sign = (spec.k % 2 == 0) ? 1.0 : -1.0;
      return sign * base * std::pow(eta, spec.k) * phase;
    }
  }
  return {};
}

cplx complex_rabi_frequency(const SidebandSpec& spec, int n, const SystemParams& sys, double x_d, double phi_d) {
  const double eta = sys.eta();
  const double ratio = std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(n + spec.k + 1.0)));
  return coupling_constant(spec, sys, x_d, phi_d) * ratio * laguerre(n, spec.k, eta * eta);
}

RabiFrequency rabi_frequency(const SidebandSpec& spec, int n, const SystemParams& sys, double x_d, double phi_d) {
  const cplx w = complex_rabi_frequency(spec, n, sys, x_d, phi_d);
  return {std::abs(w), std::arg(w)};
}

double reduced_rabi_frequency(int n, double eta) {
  return std::exp(-0.5 * eta * eta + n * std::log(eta) - 0.5 * std::lgamma(n + 1.0));
}

double multiphoton_coupling_magnitude(int N, int m, int n, double eta, double x_d) {
  return std::abs(bessel_j(N, x_d)) * std::pow(eta, m + n) * std::exp(-0.5 * eta * eta) /
         (std::tgamma(m + 1.0) * std::tgamma(n + 1.0));
}

Matrix evolution_operator(const SidebandSpec& spec, double t, const SystemParams& sys, double x_d, double phi_d,
                          const FockConfig& cfg) {
  spec.validate();
  cfg.validate();
  if (t < 0.0) throw DomainError("evolution_operator: t must be >= 0");
  const int dim = cfg.dim;
  const int k = spec.k;
  if (2 * k >= dim) throw TruncationError("evolution_operator: k >= dim/2");
  Matrix u = Matrix::Identity(2 * dim, 2 * dim);
  const auto e = [dim](int n) { return dim + n; };
  // Pair (low, high): red |n+k,g> <-> |n,e>; blue |n,g> <-> |n+k,e>; carrier |n,g> <-> |n,e>.
  for (int n = 0; n + k < dim; ++n) {
    const cplx omega = complex_rabi_frequency(spec, n, sys, x_d, phi_d);
    const double c = std::cos(std::abs(omega) * t);
    const double s = std::sin(std::abs(omega) * t);
    const double phi = std::arg(omega);
    int ground = 0, excited = 0;
    switch (spec.kind) {
      case SidebandKind::red: ground = n + k; excited = e(n); break;
      case SidebandKind::blue: ground = n; excited = e(n + k); break;
      case SidebandKind::carrier: ground = n; excited = e(n); break;
    }
    u(ground, ground) = c;
    u(excited, excited) = c;
    u(excited, ground) = std::polar(s, phi - 0.5 * pi);
    u(ground, excited) = std::polar(s, -phi - 0.5 * pi);
  }
  return u;
}

}  // namespace focksynth
