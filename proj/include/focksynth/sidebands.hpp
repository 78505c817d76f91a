#pragma once

#include <string>
#include <vector>

#include "focksynth/fock_math.hpp"
#include "focksynth/hamiltonians.hpp"

namespace focksynth {

enum class SidebandKind { red, blue, carrier };

std::string to_string(SidebandKind kind);
SidebandKind sideband_kind_from_string(const std::string& s);

/// One drive-assisted process: Bessel order N (nonzero) and photon number k.
struct SidebandSpec {
  SidebandKind kind = SidebandKind::carrier;
  int N = -1;
  int k = 0;

  void validate() const;
  bool operator==(const SidebandSpec&) const = default;
};

struct RabiFrequency {
  double magnitude = 0.0;
  double phase = 0.0;  // (-pi, pi]
};

/// Drive frequency making `spec` resonant: the term of Bessel order N carries the
/// time dependence exp[i(N omega_d + omega_z + (m - n) omega) t], so resonance is
/// N omega_d = k omega - omega_z (red), -(omega_z + k omega) (blue), -omega_z (carrier).
/// Throws NonPositiveDrive when the result is <= 0.
double resonant_drive_frequency(const SidebandSpec& spec, const SystemParams& sys);

struct Collision {
  enum class Type { sideband, commensurate };
  Type type = Type::sideband;
  /// For sideband collisions: the other process resonant at the same drive frequency.
  SidebandSpec other;
  /// For commensurate flags: omega_z = multiple * omega / divisor.
  int divisor = 0;
  long multiple = 0;
};

struct CollisionOptions {
  std::vector<int> N_range{-3, -2, -1, 1, 2, 3};
  std::vector<int> k_range{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  double rel_tol = 1e-6;
};

/// Other processes (N' != N) resonant at spec's drive frequency, plus the
/// omega_z = n omega, n omega/2, n omega/3 commensurability flags. Empty means clean.
std::vector<Collision> collision_report(const SidebandSpec& spec, const SystemParams& sys,
                                        const CollisionOptions& opts = {});

/// J^{(k)}_{N,beta}: e.g. red (-1)^k (omega_x/2) J_N(x_d) exp(-eta^2/2 + i N phi_d) eta^k.
cplx coupling_constant(const SidebandSpec& spec, const SystemParams& sys, double x_d, double phi_d);

/// Omega^{k,n}_{N,beta} = J^{(k)}_{N,beta} sqrt(n!/(n+k)!) L_n^{(k)}(eta^2).
cplx complex_rabi_frequency(const SidebandSpec& spec, int n, const SystemParams& sys, double x_d, double phi_d);
RabiFrequency rabi_frequency(const SidebandSpec& spec, int n, const SystemParams& sys, double x_d, double phi_d);

/// 2|Omega^{n,0}| / |omega_x J_N| = exp(-eta^2/2) eta^n / sqrt(n!).
double reduced_rabi_frequency(int n, double eta);

/// |J_N^{mn}| = |J_N(x_d)| eta^{m+n} exp(-eta^2/2) / (m! n!).
double multiphoton_coupling_magnitude(int N, int m, int n, double eta, double x_d);

/// Closed-form rotating-wave propagator on qubit⊗Fock for one process held for time t.
/// Pairs whose upper Fock level would exceed the truncation are left uncoupled.
Matrix evolution_operator(const SidebandSpec& spec, double t, const SystemParams& sys, double x_d, double phi_d,
                          const FockConfig& cfg);

}  // namespace focksynth
