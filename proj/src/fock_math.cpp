#include "focksynth/fock_math.hpp"

#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "focksynth/errors.hpp"

namespace focksynth {

void FockConfig::validate() const {
  if (dim < 4) throw DomainError("FockConfig.dim must be >= 4, got " + std::to_string(dim));
  if (!(leak_tol >= 0.0 && leak_tol < 1.0)) throw DomainError("FockConfig.leak_tol must lie in [0, 1)");
}

double bessel_j(int order, double x) {
  if (std::abs(order) > 64 || !(std::abs(x) <= 50.0))
    throw DomainError("bessel_j: arguments outside |N| <= 64, |x| <= 50");
  // J_N(-x) = (-1)^N J_N(x), J_{-N}(x) = (-1)^N J_N(x)
  const int n = std::abs(order);
  double value = std::cyl_bessel_j(static_cast<double>(n), std::abs(x));
  int sign_flips = 0;
  if (order < 0) sign_flips += n;
  if (x < 0.0) sign_flips += n;
  return (sign_flips % 2 == 0) ? value : -value;
}

double laguerre(int n, int k, double x) {
  if (n < 0 || k < 0) throw DomainError("laguerre: n and k must be non-negative");
  if (n == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + k - x;
  for (int j = 1; j < n; ++j) {
    const double next = ((2.0 * j + 1.0 + k - x) * cur - (j + k) * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

RealVector laguerre_sequence(int n_max, int k, double x) {
  RealVector out(n_max + 1);
  out(0) = 1.0;
  if (n_max >= 1) out(1) = 1.0 + k - x;
  for (int j = 1; j < n_max; ++j)
    out(j + 1) = ((2.0 * j + 1.0 + k - x) * out(j) - (j + k) * out(j - 1)) / (j + 1.0);
  return out;
}

namespace {

// alpha^p * sqrt(small! / big!) * exp(-|alpha|^2 / 2), with p = big - small.
cplx overlap_prefactor(cplx alpha, int small, int big) {
  const int p = big - small;
  const double r = std::abs(alpha);
  if (r == 0.0) return p == 0 ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
  const double log_mag =
      p * std::log(r) + 0.5 * (std::lgamma(small + 1.0) - std::lgamma(big + 1.0)) - 0.5 * r * r;
  return std::polar(std::exp(log_mag), p * std::arg(alpha));
}

}  // namespace

cplx displaced_number_overlap(int l, cplx alpha, int n) {
  const double x = std::norm(alpha);
  if (l >= n) return overlap_prefactor(alpha, n, l) * laguerre(n, l - n, x);
  return overlap_prefactor(-std::conj(alpha), l, n) * laguerre(l, n - l, x);
}

Matrix displacement_matrix(cplx alpha, const FockConfig& cfg) {
  cfg.validate();
  const int dim = cfg.dim;
  const double x = std::norm(alpha);
  if (x > dim / 4.0)
    throw TruncationError("displacement_matrix: |alpha|^2 = " + std::to_string(x) +
                          " exceeds dim/4 for dim = " + std::to_string(dim));
  Matrix d(dim, dim);
  for (int n = 0; n < dim; ++n) {
    for (int l = 0; l < dim; ++l) d(l, n) = displaced_number_overlap(l, alpha, n);
  }
  const double leak = std::norm(d(dim - 1, 0)) + std::norm(d(dim - 2, 0));
  if (leak > cfg.leak_tol)
    throw TruncationError("displacement_matrix: displaced vacuum leaks " + std::to_string(leak) +
                          " onto the top two Fock levels");
  return d;
}

Matrix annihilation(int dim) {
  Matrix a = Matrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

Matrix number_operator(int dim) {
  Matrix n = Matrix::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) n(i, i) = static_cast<double>(i);
  return n;
}

double top_level_weight(const Vector& psi, int dim) {
  double w = 0.0;
  const int blocks = static_cast<int>(psi.size() / dim);
  for (int b = 0; b < blocks; ++b)
    w += std::norm(psi(b * dim + dim - 1)) + std::norm(psi(b * dim + dim - 2));
  return w;
}

double top_level_weight(const Matrix& rho, int dim) {
  double w = 0.0;
  const int blocks = static_cast<int>(rho.rows() / dim);
  for (int b = 0; b < blocks; ++b) {
    const int i = b * dim + dim - 1;
    w += std::abs(rho(i, i).real()) + std::abs(rho(i - 1, i - 1).real());
  }
  return w;
}

double unitarity_defect(const Matrix& u, int dim, int retained, int blocks) {
  std::vector<Eigen::Index> idx;
  for (int b = 0; b < blocks; ++b)
    for (int n = 0; n < retained; ++n) idx.push_back(b * dim + n);
  const Eigen::Index m = static_cast<Eigen::Index>(idx.size());
  Matrix cols(u.rows(), m);
  for (Eigen::Index j = 0; j < m; ++j) cols.col(j) = u.col(idx[j]);
  const Matrix gram = cols.adjoint() * cols - Matrix::Identity(m, m);
  return max_abs(gram);
}

}  // namespace focksynth
