#pragma once

#include <ostream>
#include <string>

#include "focksynth/linalg.hpp"

namespace focksynth {

struct GridSpec {
  double x_min = -3.0, x_max = 3.0;
  double y_min = -3.0, y_max = 3.0;
  int nx = 201, ny = 201;

  void validate() const;
  double x(int i) const { return nx == 1 ? x_min : x_min + (x_max - x_min) * i / (nx - 1); }
  double y(int j) const { return ny == 1 ? y_min : y_min + (y_max - y_min) * j / (ny - 1); }
};

/// W at beta = x + iy; values(i, j) belongs to (spec.x(i), spec.y(j)).
struct WignerGrid {
  GridSpec spec;
  RealMatrix values;
  /// Largest |Im W| met while summing.
  double max_imag = 0.0;
};

/// Kernel W_mn(beta) with W = sum_mn rho_mn W_mn; W_mn = conj(W_nm).
cplx wigner_kernel(int m, int n, cplx beta);

/// Unreduced sum at one point; the imaginary part vanishes for Hermitian rho.
cplx wigner_value(const Matrix& rho_c, cplx beta);

/// Terms with |rho_mn| <= 1e-14 are skipped. Points are split across `threads` workers.
WignerGrid wigner_from_density(const Matrix& rho_c, const GridSpec& spec, int threads = 1);

struct Peak {
  double x = 0.0, y = 0.0;
  double value = 0.0;
};

/// Grid argmax (ties to the smallest |beta|) refined by a finite-difference quadratic on the 3x3 stencil.
Peak find_peak(const WignerGrid& grid);

/// Trapezoidal integral of W over the grid.
double grid_integral(const WignerGrid& grid);

/// Integral of W over y for every grid x.
RealVector marginal_x(const WignerGrid& grid);

/// "# ..." metadata line, "x,y,W" header, then one row per point.
void write_wigner_csv(std::ostream& os, const WignerGrid& grid, const std::string& metadata);

}  // namespace focksynth
