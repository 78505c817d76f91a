#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include <Eigen/Eigenvalues>

#include "focksynth/errors.hpp"
#include "focksynth/hamiltonians.hpp"

using namespace focksynth;

namespace {

RealVector eigenvalues(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace

TEST_CASE("unit conversion") {
  auto s = SystemParams::from_ghz(19.5, 1.6, 2.0, 0.5);
  CHECK(s.omega_z == doctest::Approx(2 * M_PI * 19.5));
  CHECK(s.g == doctest::Approx(2 * M_PI * 0.5));
  CHECK(s.eta() == doctest::Approx(0.5));
  CHECK(SystemParams::from_ghz_eta(19.5, 1.6, 2.0, 1.11).eta() == doctest::Approx(1.11));
  CHECK(s.large_detuning());
  CHECK_FALSE(SystemParams::from_ghz(5.0, 1.0, 2.0, 0.1).large_detuning());
  CHECK_THROWS_AS(SystemParams::from_ghz(19.5, -1.0, 2.0, 0.1), DomainError);
  CHECK_THROWS_AS(SystemParams::from_ghz(19.5, 1.0, 0.0, 0.1), DomainError);
}

TEST_CASE("full_hamiltonian") {
  FockConfig cfg{12, 1e-8};
  const int d = cfg.dim;
  SUBCASE("decoupled limit is diagonal") {
    auto s = SystemParams::from_ghz(19.5, 0.0, 2.0, 0.0);
    Matrix h = full_hamiltonian(s, DriveParams{0.0, 1.0, 0.0}, 0.37, cfg);
    for (int q = 0; q < 2; ++q)
      for (int n = 0; n < d; ++n) {
        double e = (q == 0 ? -0.5 : 0.5) * s.omega_z + n * s.omega_cav;
        CHECK(std::abs(h(q * d + n, q * d + n) - e) < 1e-12);
      }
    CHECK(max_abs(h - Matrix(h.diagonal().asDiagonal())) == 0.0);
    CHECK(h(0, 0).real() == doctest::Approx(-0.5 * 2 * M_PI * 19.5));
  }
  SUBCASE("vacuum energy with transverse bias present") {
    auto s = SystemParams::from_ghz(19.5, 1.6, 2.0, 0.0);
    Matrix h = full_hamiltonian(s, DriveParams{0.0, 1.0, 0.0}, 0.0, cfg);
    CHECK(h(0, 0).real() == doctest::Approx(-0.5 * s.omega_z));
  }
  SUBCASE("Hermitian for random parameters") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.1, 20.0);
    for (int i = 0; i < 10; ++i) {
      auto s = SystemParams::from_ghz(u(rng), u(rng), u(rng), 0.1 * u(rng));
      auto drv = DriveParams::from_ratio(0.1 * u(rng), u(rng), u(rng));
      Matrix h = full_hamiltonian(s, drv, u(rng), cfg);
      CHECK(max_abs(h - h.adjoint()) == 0.0);
    }
  }
  SUBCASE("drive term") {
    auto s = SystemParams::from_ghz(19.5, 1.6, 2.0, 0.3);
    auto drv = DriveParams::from_ratio(1.305, 2 * M_PI * 15.5, 0.4);
    LabHamiltonian lab = lab_hamiltonian(s, drv, cfg);
    const double t = 0.123;
    Matrix diff = lab.at(t) - static_original_hamiltonian(s, cfg);
    CHECK(std::abs(diff(0, 0).real() + drv.Omega_d * std::cos(drv.omega_d * t + 0.4)) < 1e-12);
    CHECK(std::abs(diff(d, d).real() - drv.Omega_d * std::cos(drv.omega_d * t + 0.4)) < 1e-12);
    CHECK(drv.x_d() == doctest::Approx(1.305));
  }
}

TEST_CASE("qubit_basis_decomposition") {
  DriveParams drv = DriveParams::from_ratio(1.0, 10.0, 0.0);
  auto s0 = SystemParams{0.0, 5.0, 2.0, 0.7};
  auto q0 = qubit_basis_decomposition(s0, drv);
  CHECK(q0.theta == doctest::Approx(M_PI / 2));
  CHECK(std::abs(q0.g_z) < 1e-15);
  CHECK(q0.g_x == doctest::Approx(-0.7));

  auto s1 = SystemParams{5.0, 0.0, 2.0, 0.7};
  auto q1 = qubit_basis_decomposition(s1, drv);
  CHECK(q1.theta == 0.0);
  CHECK(q1.g_x == 0.0);
  CHECK(q1.g_z == doctest::Approx(0.7));

  auto s2 = SystemParams::from_ghz_eta(19.5, 1.6, 2.0, 1.11);
  auto q2 = qubit_basis_decomposition(s2, drv);
  CHECK(q2.theta == doctest::Approx(std::atan(1.6 / 19.5)).epsilon(1e-14));
  CHECK(std::abs(q2.g_z * q2.g_z + q2.g_x * q2.g_x - s2.g * s2.g) < 1e-12 * s2.g * s2.g);
  CHECK(std::abs(q2.Omega_dz * q2.Omega_dz + q2.Omega_dx * q2.Omega_dx - drv.Omega_d * drv.Omega_d) <
        1e-12 * drv.Omega_d * drv.Omega_d);
  CHECK(q2.omega_q == doctest::Approx(std::hypot(s2.omega_x, s2.omega_z)));

  CHECK_THROWS_AS(qubit_basis_decomposition(SystemParams{0.0, 0.0, 2.0, 0.1}, drv), DegenerateQubit);
}

TEST_CASE("qubit operators and rotation") {
  using namespace qubit;
  CHECK(max_abs(sigma_plus() + sigma_minus() - sigma_x()) == 0.0);
  CHECK(max_abs(sigma_y() - (-I) * (sigma_plus() - sigma_minus())) == 0.0);
  CHECK(max_abs(sigma_x() * sigma_y() - I * sigma_z()) < 1e-15);
  Matrix r = rotation_y(0.3);
  CHECK(max_abs(r * r.adjoint() - Matrix::Identity(2, 2)) < 1e-15);
  // R_y(theta)|g> is the ground state of (omega_z/2) sigma_z + (omega_x/2) sigma_x.
  const double wz = 19.5, wx = 1.6;
  Matrix hq = 0.5 * wz * sigma_z() + 0.5 * wx * sigma_x();
  Matrix rot = rotation_y(std::atan2(wx, wz));
  Vector v = hq * rot.col(0);
  CHECK(max_abs(v + 0.5 * std::hypot(wx, wz) * rot.col(0)) < 1e-13);
}

TEST_CASE("heff_static") {
  SUBCASE("no transverse bias: diagonal with ground |0,g>") {
    FockConfig cfg{20, 1e-8};
    auto s = SystemParams{2 * M_PI * 19.5, 0.0, 2 * M_PI * 2.0, 0.5 * 1.11 * 2 * M_PI * 2.0};
    Matrix h = heff_static(s, cfg);
    CHECK(max_abs(h - Matrix(h.diagonal().asDiagonal())) == 0.0);
    Vector gs = ground_state(h);
    CHECK(std::abs(gs(0) - 1.0) < 1e-14);
    CHECK(ground_vacuum_probability(s, cfg) == 1.0);
  }
  SUBCASE("Hermitian") {
    FockConfig cfg{30, 1e-8};
    Matrix h = heff_static(SystemParams::from_ghz_eta(19.5, 1.6, 2.0, 1.2), cfg);
    CHECK(max_abs(h - h.adjoint()) < 1e-12);
  }
  SUBCASE("spectrum equals the original-picture spectrum up to g^2/omega") {
    FockConfig cfg{60, 1e-8};
    for (double eta : {0.3, 1.11, 1.5}) {
      auto s = SystemParams::from_ghz_eta(19.5, 1.6, 2.0, eta);
      RealVector a = eigenvalues(heff_static(s, cfg));
      RealVector b = eigenvalues(static_original_hamiltonian(s, cfg));
      const double shift = s.g * s.g / s.omega_cav;
      for (int i = 0; i < 40; ++i) CHECK(std::abs(a(i) - (b(i) + shift)) < 1e-8 * std::max(1.0, std::abs(a(i))));
    }
  }
}

TEST_CASE("ground_vacuum_probability") {
  FockConfig cfg{60, 1e-8};
  auto near_decoupled = SystemParams::from_ghz_eta(19.5, 1e-6, 2.0, 1e-6);
  CHECK(ground_vacuum_probability(near_decoupled, cfg) == doctest::Approx(1.0).epsilon(1e-10));

  auto s = SystemParams::from_ghz_eta(19.5, 0.082 * 19.5, 2.0, 1.11);
  double p = ground_vacuum_probability(s, cfg);
  double p2 = ground_vacuum_probability(s, FockConfig{120, 1e-8});
  CHECK(std::abs(p - p2) < 1e-6);
  CHECK(p > 0.99);

  // Property of the computed numbers: non-increasing in omega_x at fixed eta.
  for (double eta : {0.5, 1.5, 3.0}) {
    double prev = 1.0;
    for (int i = 1; i <= 10; ++i) {
      double v = ground_vacuum_probability(SystemParams::from_ghz_eta(19.5, 0.02 * i * 19.5, 2.0, eta), cfg);
      CHECK(v <= prev + 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("ground_state phase convention") {
  Matrix h = Matrix::Zero(2, 2);
  h(0, 0) = 1.0;
  h(1, 1) = -1.0;
  Vector v = ground_state(h);
  CHECK(std::abs(v(1) - 1.0) < 1e-15);
}
