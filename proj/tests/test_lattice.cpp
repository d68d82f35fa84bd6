#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "meanfield/errors.hpp"
#include "meanfield/lattice.hpp"

using namespace meanfield;

namespace {

std::mt19937_64 rng(20260816u);

WaveFunction random_wave(int m) {
  std::normal_distribution<double> g;
  WaveFunction f(m);
  for (int x = 0; x < m; ++x) f(x) = cplx(g(rng), g(rng));
  return f;
}

Eigen::VectorXd random_density(int m) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXd r(m);
  for (int x = 0; x < m; ++x) r(x) = u(rng);
  return r;
}

}  // namespace

TEST_CASE("laplacian stencil on a delta function") {
  WaveFunction f = WaveFunction::Zero(4);
  f(0) = 1.0;
  const WaveFunction lf = apply_laplacian(f);
  CHECK(lf(0) == cplx(-2.0, 0.0));
  CHECK(lf(1) == cplx(1.0, 0.0));
  CHECK(lf(2) == cplx(0.0, 0.0));
  CHECK(lf(3) == cplx(1.0, 0.0));
}

TEST_CASE("plane waves diagonalize the laplacian") {
  for (int m : {2, 3, 4, 6, 8, 12}) {
    const Eigen::VectorXd eps = kinetic_eigenvalues(m);
    for (int k = 0; k < m; ++k) {
      WaveFunction e(m);
      for (int x = 0; x < m; ++x)
        e(x) = std::polar(1.0 / std::sqrt(double(m)), 2.0 * std::numbers::pi * k * x / m);
      const WaveFunction r = -apply_laplacian(e) - eps(k) * e;
      CHECK(r.norm() <= 1e-12);
    }
  }
}

TEST_CASE("stencil agrees with the spectral route") {
  for (int m : {2, 3, 4, 6, 8, 12}) {
    const Eigen::MatrixXcd f = dft_matrix(m);
    const Eigen::MatrixXcd spectral =
        f.adjoint() * kinetic_eigenvalues(m).cast<cplx>().asDiagonal() * f;
    for (int rep = 0; rep < 5; ++rep) {
      const WaveFunction w = random_wave(m);
      CHECK((spectral * w + apply_laplacian(w)).norm() <= 1e-12 * w.norm());
    }
    // dense kinetic matrix is the same operator
    const WaveFunction w = random_wave(m);
    CHECK((kinetic_matrix(m).cast<cplx>() * w + apply_laplacian(w)).norm() <= 1e-13 * w.norm());
  }
}

TEST_CASE("laplacian is symmetric") {
  for (int rep = 0; rep < 10; ++rep) {
    const WaveFunction f = random_wave(6), g = random_wave(6);
    const cplx a = inner_product(f, apply_laplacian(g));
    const cplx b = inner_product(apply_laplacian(f), g);
    CHECK(std::abs(a - b) <= 1e-13 * std::abs(a));
  }
}

TEST_CASE("convolution with a delta at the origin returns the potential") {
  const PairPotential v = PairPotential::from_displacements((Eigen::VectorXd(4) << 0, 1, 0, 1).finished());
  Eigen::VectorXd rho = Eigen::VectorXd::Zero(4);
  rho(0) = 1.0;
  const Eigen::VectorXd c = convolve(v, rho);
  CHECK(c(0) == 0.0);
  CHECK(c(1) == 1.0);
  CHECK(c(2) == 0.0);
  CHECK(c(3) == 1.0);
}

TEST_CASE("direct-sum convolution matches the DFT route") {
  for (int m : {4, 6, 9}) {
    Eigen::VectorXd raw(m);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int d = 0; d <= m / 2; ++d) {
      const double val = u(rng);
      raw(d) = val;
      raw((m - d) % m) = val;
    }
    const PairPotential v = PairPotential::from_displacements(raw);
    for (int rep = 0; rep < 5; ++rep) {
      const Eigen::VectorXd rho = random_density(m);
      const Eigen::VectorXd direct = convolve(v, rho);
      const Eigen::MatrixXcd f = dft_matrix(m);
      const Eigen::VectorXcd spectral = f.adjoint() * ((f * raw.cast<cplx>()).cwiseProduct(
                                            f * rho.cast<cplx>())) * std::sqrt(double(m));
      CHECK((spectral.real() - direct).norm() <= 1e-12 * direct.norm());
      CHECK(spectral.imag().norm() <= 1e-12);
    }
  }
}

TEST_CASE("convolution commutes with translation exactly") {
  const int m = 6;
  Eigen::VectorXd raw(m);
  raw << 0.75, 0.45, 0.15, 0.08, 0.15, 0.45;
  const PairPotential v = PairPotential::from_displacements(raw);
  const Eigen::VectorXd rho = random_density(m);
  for (int a = 0; a < m; ++a) {
    Eigen::VectorXd shifted(m);
    for (int x = 0; x < m; ++x) shifted(x) = rho(((x - a) % m + m) % m);
    const Eigen::VectorXd left = convolve(v, shifted);
    const Eigen::VectorXd right = convolve(v, rho);
    for (int x = 0; x < m; ++x) {
      // bitwise identical: the displacement-ordered sum sees the same terms
      CHECK(left(x) == right(((x - a) % m + m) % m));
    }
  }
}

TEST_CASE("odd potential is rejected with the offending displacement named") {
  Eigen::VectorXd raw(4);
  raw << 0.0, 1.0, 0.0, 0.5;
  CHECK_THROWS_WITH_AS(PairPotential::from_displacements(raw),
                       doctest::Contains("V(1)"), config_error);
}

TEST_CASE("inner product is conjugate linear on the left") {
  const WaveFunction f = random_wave(5), g = random_wave(5);
  const cplx alpha(0.3, -1.2);
  CHECK(std::abs(inner_product(f, alpha * g) - alpha * inner_product(f, g)) <= 1e-13);
  CHECK(std::abs(inner_product(alpha * f, g) - std::conj(alpha) * inner_product(f, g)) <= 1e-13);
  CHECK(std::abs(inner_product(f, f).imag()) <= 1e-15);
}

TEST_CASE("translation is a cyclic shift") {
  const WaveFunction f = random_wave(7);
  const WaveFunction t = translate(f, 3);
  for (int x = 0; x < 7; ++x) CHECK(t(x) == f(((x - 3) % 7 + 7) % 7));
  CHECK((translate(t, -3) - f).norm() == 0.0);
  CHECK((translate(f, 7) - f).norm() == 0.0);
}
