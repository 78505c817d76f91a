#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "focksynth/errors.hpp"
#include "focksynth/fock_math.hpp"
#include "support/oracles.hpp"

using namespace focksynth;

TEST_CASE("bessel_j at the origin and reflection") {
  CHECK(std::abs(bessel_j(0, 0.0) - 1.0) < 1e-15);
  for (double x : {0.5, 1.0}) CHECK(bessel_j(1, x) == doctest::Approx(-bessel_j(-1, x)).epsilon(1e-15));
  for (int N = -8; N <= 8; ++N)
    for (double x : {0.0, 0.3, 1.305, 4.0, 11.5, -2.5}) {
      double sign = (std::abs(N) % 2 == 0) ? 1.0 : -1.0;
      CHECK(std::abs(bessel_j(N, x) - sign * bessel_j(-N, x)) < 1e-13);
    }
}

TEST_CASE("bessel_j against the power series") {
  CHECK(std::abs(bessel_j(1, 1.305) - oracle::bessel_series(1, 1.305)) < 1e-12);
  for (int N : {0, 1, 2, 3, -1, -3})
    for (double x : {0.1, 0.785, 1.305, 3.0}) CHECK(std::abs(bessel_j(N, x) - oracle::bessel_series(N, x)) < 1e-12);
  // odd function of x for odd order
  CHECK(bessel_j(3, -1.2) == doctest::Approx(-bessel_j(3, 1.2)).epsilon(1e-15));
}

TEST_CASE("bessel_j domain") {
  CHECK_THROWS_AS(bessel_j(65, 1.0), DomainError);
  CHECK_THROWS_AS(bessel_j(1, 50.5), DomainError);
  CHECK_NOTHROW(bessel_j(-64, -50.0));
}

TEST_CASE("laguerre") {
  for (int k : {0, 1, 4})
    for (double x : {0.0, 0.7, 3.0}) {
      CHECK(laguerre(0, k, x) == 1.0);
      CHECK(laguerre(1, k, x) == doctest::Approx(1.0 + k - x).epsilon(1e-15));
    }
  CHECK(std::abs(laguerre(5, 2, 1.2321) - oracle::laguerre_sum(5, 2, 1.2321)) < 1e-12);
  for (int n = 0; n <= 12; ++n)
    for (int k = 0; k <= 6; ++k)
      for (double x : {0.0, 0.5, 1.0, 2.0, 5.0}) {
        double ref = oracle::laguerre_sum(n, k, x);
        CHECK(std::abs(laguerre(n, k, x) - ref) < 1e-11 * std::max(1.0, std::abs(ref)));
      }
  RealVector seq = laguerre_sequence(8, 3, 1.7);
  for (int n = 0; n <= 8; ++n) CHECK(seq(n) == doctest::Approx(laguerre(n, 3, 1.7)).epsilon(1e-14));
}

TEST_CASE("displaced_number_overlap closed form") {
  for (int n = 0; n < 6; ++n) CHECK(std::abs(displaced_number_overlap(n, 0.0, n) - 1.0) < 1e-15);
  cplx v = displaced_number_overlap(0, 0.35, 1);
  CHECK(std::abs(v - cplx(-0.35 * std::exp(-0.35 * 0.35 / 2), 0.0)) < 1e-15);
  FockConfig cfg{40, 1e-8};
  Matrix d = displacement_matrix(0.35, cfg);
  CHECK(std::abs(displaced_number_overlap(3, 0.35, 2) - d(3, 2)) < 1e-14);
  for (int l = 0; l < 8; ++l)
    for (int n = 0; n < 8; ++n)
      CHECK(std::abs(displaced_number_overlap(l, 0.7, n) - oracle::displacement_element_series(l, n, 0.7)) < 1e-13);
}

TEST_CASE("displacement_matrix") {
  FockConfig cfg{40, 1e-8};
  CHECK(max_abs(displacement_matrix(0.0, cfg) - Matrix::Identity(40, 40)) < 1e-15);
  cplx a{0.3, -0.2};
  Matrix d = displacement_matrix(a, cfg);
  CHECK(std::abs(d(0, 0) - std::exp(-std::norm(a) / 2)) < 1e-15);

  SUBCASE("matches the exponential of alpha a^dag - alpha^* a") {
    // The exponential is taken in a larger space so truncation does not matter.
    const int big = 80;
    Matrix A = annihilation(big);
    Matrix gen = 0.555 * A.adjoint() - 0.555 * A;
    Matrix ref = oracle::expm(gen).topLeftCorner(40, 40);
    Matrix dm = displacement_matrix(0.555, cfg);
    CHECK(max_abs(dm - ref) < 1e-9);
  }
  SUBCASE("inverse and column norms") {
    for (cplx alpha : {cplx(0.1, 0), cplx(0.555, 0), cplx(0, 0.555), cplx(0.5, 0.5), cplx(-1.0, 0.4)}) {
      // Columns whose displaced support (about |alpha| sqrt(2n+1) levels wide) stays clear of the top.
      int retained = 0;
      while (retained + 8 + 6.0 * std::abs(alpha) * std::sqrt(2.0 * retained + 1) <= 40) ++retained;
      REQUIRE(retained >= 5);
      Matrix p = displacement_matrix(alpha, cfg) * displacement_matrix(-alpha, cfg);
      CHECK(max_abs((p - Matrix::Identity(40, 40)).topLeftCorner(retained, retained)) < 1e-9);
      Matrix dd = displacement_matrix(alpha, cfg);
      for (int n = 0; n < retained; ++n) CHECK(std::abs(dd.col(n).norm() - 1.0) < 1e-9);
    }
    // Small displacements keep every column up to dim - 8.
    Matrix dd = displacement_matrix(0.1, cfg);
    for (int n = 0; n <= 32; ++n) CHECK(std::abs(dd.col(n).norm() - 1.0) < 1e-9);
  }
  SUBCASE("truncation guard") {
    CHECK_THROWS_AS(displacement_matrix(4.0, FockConfig{40, 1e-8}), TruncationError);
    CHECK_THROWS_AS(displacement_matrix(2.5, FockConfig{16, 1e-8}), TruncationError);
  }
  SUBCASE("unitarity on the retained subspace") {
    Matrix dd = displacement_matrix(0.8, cfg);
    CHECK(unitarity_defect(dd, 40, 20, 1) < 1e-10);
  }
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(FockConfig({3, 1e-8}).validate(), DomainError);
  CHECK_THROWS_AS(FockConfig({10, 1.0}).validate(), DomainError);
  CHECK_NOTHROW(FockConfig({4, 0.0}).validate());
}

TEST_CASE("operators") {
  Matrix a = annihilation(6);
  Matrix n = number_operator(6);
  CHECK(max_abs(a.adjoint() * a - n) < 1e-14);
  Matrix comm = a * a.adjoint() - a.adjoint() * a;
  CHECK(max_abs((comm - Matrix::Identity(6, 6)).topLeftCorner(5, 5)) < 1e-14);
  Vector psi = Vector::Zero(12);
  psi(5) = std::sqrt(0.3);
  psi(10) = std::sqrt(0.7);
  CHECK(top_level_weight(psi, 6) == doctest::Approx(1.0));
}
