#include "focksynth/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "focksynth/errors.hpp"
#include "focksynth/fock_math.hpp"

namespace focksynth {

namespace {

// Kernels K(m, n) for m >= n at one point, sharing the Laguerre sequences.
Matrix lower_kernels(int dim, cplx beta) {
  const double r2 = std::norm(beta);
  const double x = 4.0 * r2;
  const double gauss = std::exp(-2.0 * r2) / pi;
  Matrix k = Matrix::Zero(dim, dim);
  const cplx two_bc = 2.0 * std::conj(beta);
  for (int d = 0; d < dim; ++d) {
    // m = n + d
    RealVector lag = laguerre_sequence(dim - 1 - d, d, x);
    cplx pw = std::pow(two_bc, d);
    for (int n = 0; n + d < dim; ++n) {
      int m = n + d;
      double ratio = std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0)));
      double sign = n % 2 == 0 ? 1.0 : -1.0;
      k(m, n) = 2.0 * gauss * sign * ratio * lag(n) * pw;
    }
  }
  return k;
}

cplx sum_kernels(const Matrix& rho, const Matrix& k) {
  const int dim = static_cast<int>(rho.rows());
  cplx w = 0.0;
  for (int n = 0; n < dim; ++n)
    for (int m = n; m < dim; ++m) {
      if (std::abs(rho(m, n)) > 1e-14) w += rho(m, n) * k(m, n);
      if (m != n && std::abs(rho(n, m)) > 1e-14) w += rho(n, m) * std::conj(k(m, n));
    }
  return w;
}

}  // namespace

void GridSpec::validate() const {
  if (nx < 1 || ny < 1) throw DomainError("grid needs at least one point per axis");
  if (!(x_max >= x_min) || !(y_max >= y_min)) throw DomainError("grid range is empty");
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !std::isfinite(y_min) || !std::isfinite(y_max))
    throw DomainError("grid range must be finite");
}

cplx wigner_kernel(int m, int n, cplx beta) {
  if (m < 0 || n < 0) throw DomainError("Fock indices must be >= 0");
  if (m < n) return std::conj(wigner_kernel(n, m, beta));
  const int d = m - n;
  const double r2 = std::norm(beta);
  double ratio = std::exp(0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0)));
  double sign = n % 2 == 0 ? 1.0 : -1.0;
  return (2.0 / pi) * sign * ratio * std::pow(2.0 * std::conj(beta), d) * std::exp(-2.0 * r2) *
         laguerre(n, d, 4.0 * r2);
}

cplx wigner_value(const Matrix& rho_c, cplx beta) {
  if (rho_c.rows() != rho_c.cols()) throw DomainError("density matrix is not square");
  return sum_kernels(rho_c, lower_kernels(static_cast<int>(rho_c.rows()), beta));
}

WignerGrid wigner_from_density(const Matrix& rho_c, const GridSpec& spec, int threads) {
  spec.validate();
  if (rho_c.rows() != rho_c.cols()) throw DomainError("density matrix is not square");
  const int dim = static_cast<int>(rho_c.rows());
  WignerGrid g{spec, RealMatrix::Zero(spec.nx, spec.ny), 0.0};
  const int total = spec.nx * spec.ny;
  threads = std::clamp(threads, 1, std::max(1, total));
  std::vector<double> imag(threads, 0.0);
  auto work = [&](int tid) {
    for (int p = tid; p < total; p += threads) {
      int i = p / spec.ny, j = p % spec.ny;
      cplx w = sum_kernels(rho_c, lower_kernels(dim, {spec.x(i), spec.y(j)}));
      g.values(i, j) = w.real();
      imag[tid] = std::max(imag[tid], std::abs(w.imag()));
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }
  g.max_imag = *std::max_element(imag.begin(), imag.end());
  return g;
}

Peak find_peak(const WignerGrid& grid) {
  const GridSpec& s = grid.spec;
  if (grid.values.size() == 0) throw DomainError("empty Wigner grid");
  const double vmax = grid.values.maxCoeff();
  const double tie = 1e-12 * std::max(1.0, std::abs(vmax));
  int bi = -1, bj = -1;
  double best_r = 0.0;
  for (int i = 0; i < s.nx; ++i)
    for (int j = 0; j < s.ny; ++j) {
      if (grid.values(i, j) < vmax - tie) continue;
      double r = std::hypot(s.x(i), s.y(j));
      if (bi < 0 || r < best_r) {
        bi = i;
        bj = j;
        best_r = r;
      }
    }
  Peak pk{s.x(bi), s.y(bj), grid.values(bi, bj)};
  if (bi == 0 || bj == 0 || bi == s.nx - 1 || bj == s.ny - 1) return pk;

  // f(u, v) = c0 + c1 u + c2 v + c3 u^2 + c4 u v + c5 v^2 in grid-index offsets, from central
  // differences on the 3x3 stencil; exact at the centre and its four neighbours.
  auto f = [&](int du, int dv) { return grid.values(bi + du, bj + dv); };
  Eigen::Matrix<double, 6, 1> c;
  c << f(0, 0), 0.5 * (f(1, 0) - f(-1, 0)), 0.5 * (f(0, 1) - f(0, -1)), 0.5 * (f(1, 0) - 2 * f(0, 0) + f(-1, 0)),
      0.25 * (f(1, 1) - f(1, -1) - f(-1, 1) + f(-1, -1)), 0.5 * (f(0, 1) - 2 * f(0, 0) + f(0, -1));
  Eigen::Matrix2d H;
  H << 2 * c(3), c(4), c(4), 2 * c(5);
  if (!(H(0, 0) < 0.0 && H.determinant() > 0.0)) return pk;
  Eigen::Vector2d off = H.ldlt().solve(-Eigen::Vector2d(c(1), c(2)));
  if (std::abs(off(0)) > 1.0 || std::abs(off(1)) > 1.0) return pk;
  const double hx = s.nx > 1 ? (s.x_max - s.x_min) / (s.nx - 1) : 0.0;
  const double hy = s.ny > 1 ? (s.y_max - s.y_min) / (s.ny - 1) : 0.0;
  pk.x += off(0) * hx;
  pk.y += off(1) * hy;
  pk.value = c(0) + c(1) * off(0) + c(2) * off(1) + c(3) * off(0) * off(0) + c(4) * off(0) * off(1) +
             c(5) * off(1) * off(1);
  return pk;
}

namespace {

RealVector trapezoid_weights(int n, double lo, double hi) {
  RealVector w = RealVector::Zero(n);
  if (n == 1) return w;
  const double h = (hi - lo) / (n - 1);
  w.setConstant(h);
  w(0) = w(n - 1) = 0.5 * h;
  return w;
}

}  // namespace

double grid_integral(const WignerGrid& grid) {
  const GridSpec& s = grid.spec;
  RealVector wx = trapezoid_weights(s.nx, s.x_min, s.x_max);
  RealVector wy = trapezoid_weights(s.ny, s.y_min, s.y_max);
  return wx.dot(grid.values * wy);
}

RealVector marginal_x(const WignerGrid& grid) {
  const GridSpec& s = grid.spec;
  return grid.values * trapezoid_weights(s.ny, s.y_min, s.y_max);
}

void write_wigner_csv(std::ostream& os, const WignerGrid& grid, const std::string& metadata) {
  const GridSpec& s = grid.spec;
  char buf[128];
  os << "# " << metadata;
  std::snprintf(buf, sizeof buf, " x_range=[%.17g,%.17g] y_range=[%.17g,%.17g] nx=%d ny=%d", s.x_min, s.x_max,
                s.y_min, s.y_max, s.nx, s.ny);
  os << buf << "\n";
  os << "x,y,W\n";
  for (int i = 0; i < s.nx; ++i)
    for (int j = 0; j < s.ny; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", s.x(i), s.y(j), grid.values(i, j));
      os << buf;
    }
}

}  // namespace focksynth
