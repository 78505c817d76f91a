#pragma once

#include <cstddef>

#include "focksynth/linalg.hpp"

namespace focksynth {

/// Truncated Fock space: photon numbers 0..dim-1.
struct FockConfig {
  int dim = 40;
  /// Maximum weight allowed on the two highest retained Fock levels.
  double leak_tol = 1e-8;

  void validate() const;
};

/// Bessel function of the first kind J_N(x) for integer order, |N| <= 64, |x| <= 50.
double bessel_j(int order, double x);

/// Generalized Laguerre polynomial L_n^{(k)}(x) by the three-term recurrence.
double laguerre(int n, int k, double x);

/// All L_0^{(k)}(x) .. L_{n_max}^{(k)}(x) in one pass.
RealVector laguerre_sequence(int n_max, int k, double x);

/// <l| D(alpha) |n>, the displaced-number-state overlap in closed form.
cplx displaced_number_overlap(int l, cplx alpha, int n);

/// Truncated matrix of D(alpha) = exp(alpha a^dag - alpha^* a) built from the closed form.
/// Throws TruncationError when |alpha|^2 > dim/4 or the displaced vacuum leaks onto the
/// top two levels by more than cfg.leak_tol.
Matrix displacement_matrix(cplx alpha, const FockConfig& cfg);

/// Annihilation operator a on the truncated Fock space.
Matrix annihilation(int dim);
/// Number operator a^dag a.
Matrix number_operator(int dim);

/// Weight of a qubit⊗Fock vector on the top two Fock levels (both qubit branches).
double top_level_weight(const Vector& psi, int dim);
/// Same for the diagonal of a density matrix on qubit⊗Fock.
double top_level_weight(const Matrix& rho, int dim);

/// ||U^dag U - I||_max restricted to the leading `retained` basis states of each
/// qubit branch (the first `retained` Fock levels in each of the `blocks` blocks).
double unitarity_defect(const Matrix& u, int dim, int retained, int blocks);

}  // namespace focksynth
