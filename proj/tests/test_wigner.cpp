#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <sstream>

#include "focksynth/errors.hpp"
#include "focksynth/fock_math.hpp"
#include "focksynth/wigner.hpp"
#include "support/oracles.hpp"

using namespace focksynth;

namespace {

Matrix pure(const Vector& v) { return v * v.adjoint(); }

Vector random_vector(std::mt19937& rng, int dim, int used) {
  std::normal_distribution<double> g;
  Vector v = Vector::Zero(dim);
  for (int n = 0; n < used; ++n) v(n) = cplx{g(rng), g(rng)};
  return v.normalized();
}

}  // namespace

TEST_CASE("kernel") {
  CHECK(wigner_kernel(0, 0, 0.0).real() == doctest::Approx(2.0 / M_PI).epsilon(1e-15));
  CHECK(std::abs(wigner_kernel(0, 0, 0.0) - 2.0 / M_PI) < 1e-9);
  CHECK(wigner_kernel(1, 1, 0.0).real() == doctest::Approx(-2.0 / M_PI));
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 20; ++i) {
    cplx b{u(rng), u(rng)};
    CHECK(std::abs(wigner_kernel(0, 0, b) - 2.0 / M_PI * std::exp(-2.0 * std::norm(b))) < 1e-15);
    for (int m = 0; m < 5; ++m)
      for (int n = 0; n < 5; ++n) CHECK(std::abs(wigner_kernel(m, n, b) - std::conj(wigner_kernel(n, m, b))) < 1e-14);
  }
}

TEST_CASE("kernel against characteristic-function quadrature") {
  // W of the operator |m><n| from C(lambda) = <n| D(lambda) |m>.
  for (auto [m, n] : {std::pair{0, 2}, std::pair{1, 1}, std::pair{2, 1}}) {
    auto C = [m = m, n = n](cplx lam) { return oracle::displacement_element_complex(n, m, lam); };
    for (cplx b : {cplx{0.0, 0.0}, cplx{0.4, -0.3}, cplx{-0.7, 0.9}}) {
      cplx ref = oracle::wigner_by_characteristic(C, b, 9.0, 700);
      CHECK(std::abs(wigner_kernel(m, n, b) - ref) < 1e-5);
    }
  }
}

TEST_CASE("values over a grid") {
  const int dim = 30;
  GridSpec spec;
  spec.nx = spec.ny = 121;
  SUBCASE("vacuum") {
    Matrix rho = Matrix::Zero(dim, dim);
    rho(0, 0) = 1.0;
    auto g = wigner_from_density(rho, spec);
    auto p = find_peak(g);
    CHECK(std::abs(p.value - 2.0 / M_PI) < 1e-9);
    CHECK(std::abs(p.x) < 1e-12);
    CHECK(std::abs(p.y) < 1e-12);
    CHECK(std::abs(grid_integral(g) - 1.0) < 1e-6);
    CHECK(g.max_imag < 1e-14);
  }
  SUBCASE("displacement covariance") {
    std::mt19937 rng(3);
    Vector v = random_vector(rng, 60, 3);
    const cplx alpha{0.45, -0.2};
    Vector dv = displacement_matrix(alpha, FockConfig{60, 1e-8}) * v;
    Matrix rho = pure(v).topLeftCorner(dim, dim), rho_d = pure(dv).topLeftCorner(dim, dim);
    double worst = 0.0;
    for (cplx b : {cplx{0.0, 0.0}, cplx{0.3, 0.6}, cplx{-1.0, 0.2}, cplx{1.2, -0.8}})
      worst = std::max(worst, std::abs(wigner_value(rho_d, b + alpha) - wigner_value(rho, b)));
    CHECK(worst < 1e-8);
  }
  SUBCASE("coherent state peak") {
    Vector v(dim);
    for (int n = 0; n < dim; ++n) v(n) = displaced_number_overlap(n, 0.555, 0);
    auto g = wigner_from_density(pure(v), spec, 3);
    auto p = find_peak(g);
    CHECK(std::abs(p.x - 0.555) < 1e-3);
    CHECK(std::abs(p.y) < 1e-3);
    CHECK(p.value == doctest::Approx(2.0 / M_PI).epsilon(1e-3));
  }
  SUBCASE("integral, marginal, realness, threads") {
    std::mt19937 rng(5);
    Vector v = random_vector(rng, dim, 4);
    Matrix rho = pure(v);
    // The y range must hold the tails for the marginal.
    GridSpec wide = spec;
    wide.y_min = -5.0;
    wide.y_max = 5.0;
    wide.ny = 201;
    auto g1 = wigner_from_density(rho, wide, 1);
    auto g4 = wigner_from_density(rho, wide, 4);
    CHECK((g1.values - g4.values).cwiseAbs().maxCoeff() == 0.0);
    CHECK(g1.max_imag < 1e-12);
    CHECK(std::abs(grid_integral(g1) - 1.0) < 1e-4);
    RealVector mx = marginal_x(g1);
    double worst = 0.0;
    for (int i = 0; i < spec.nx; ++i) {
      cplx psi = 0.0;
      for (int n = 0; n < 4; ++n) psi += v(n) * oracle::hermite_function(n, spec.x(i));
      worst = std::max(worst, std::abs(mx(i) - std::norm(psi)));
    }
    CHECK(worst < 1e-6);
  }
  SUBCASE("mixed state is linear in rho") {
    Matrix a = Matrix::Zero(dim, dim), b = a;
    a(1, 1) = 1.0;
    b(2, 2) = 1.0;
    cplx beta{0.2, 0.5};
    CHECK(std::abs(wigner_value(0.3 * a + 0.7 * b, beta) - (0.3 * wigner_value(a, beta) + 0.7 * wigner_value(b, beta))) <
          1e-15);
  }
}

TEST_CASE("grid and output") {
  GridSpec bad;
  bad.nx = 0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  GridSpec flipped;
  flipped.x_max = -4.0;
  CHECK_THROWS_AS(flipped.validate(), DomainError);
  GridSpec s;
  s.nx = 3;
  s.ny = 2;
  CHECK(s.x(0) == -3.0);
  CHECK(s.x(2) == 3.0);
  Matrix rho = Matrix::Zero(4, 4);
  rho(0, 0) = 1.0;
  std::ostringstream os;
  write_wigner_csv(os, wigner_from_density(rho, s), "command=test");
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# command=test", 0) == 0);
  std::getline(in, line);
  CHECK(line == "x,y,W");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 6);
}
