#include "focksynth/linalg.hpp"

#include <cmath>

namespace focksynth {

Matrix kron(const Matrix& qubit, const Matrix& fock) {
  const Eigen::Index q = qubit.rows(), f = fock.rows();
  Matrix out = Matrix::Zero(q * f, qubit.cols() * fock.cols());
  for (Eigen::Index i = 0; i < q; ++i)
    for (Eigen::Index j = 0; j < qubit.cols(); ++j)
      if (qubit(i, j) != cplx{0.0, 0.0}) out.block(i * f, j * fock.cols(), f, fock.cols()) = qubit(i, j) * fock;
  return out;
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double wrap_phase(double phi) {
  double w = std::remainder(phi, two_pi);
  if (w <= -pi) w += two_pi;
  return w;
}

}  // namespace focksynth
