#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "meanfield/bogoliubov.hpp"
#include "meanfield/errors.hpp"
#include "meanfield/fock_ops.hpp"
#include "meanfield/hartree.hpp"
#include "meanfield/statistics.hpp"

using namespace meanfield;

namespace {

std::mt19937_64 rng(20260816u);

cplx rand_cplx() {
  static std::normal_distribution<double> g(0.0, 1.0);
  return cplx(g(rng), g(rng));
}

WaveFunction rand_wave(int m, bool normalized = false) {
  WaveFunction f(m);
  for (int x = 0; x < m; ++x) f(x) = rand_cplx();
  if (normalized) f /= f.norm();
  return f;
}

Eigen::MatrixXcd rand_hermitian(int m) {
  Eigen::MatrixXcd a(m, m);
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) a(x, y) = rand_cplx();
  return 0.5 * (a + a.adjoint().eval());
}

PairPotential test_potential(int m, double scale = 1.0) {
  Eigen::VectorXd v(m);
  for (int d = 0; d < m; ++d) {
    const int dist = std::min(d, m - d);
    v(d) = scale / (1.0 + dist * dist);
  }
  return PairPotential::from_displacements(v);
}

double single_moment(const WaveFunction& phi, const Eigen::MatrixXcd& a, int k) {
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(a.rows(), a.cols());
  for (int i = 0; i < k; ++i) p = (p * a).eval();
  return std::real((phi.adjoint() * p * phi).value());
}

}  // namespace

TEST_CASE("observable builders") {
  const int m = 5;
  const Eigen::MatrixXcd c = build_observable(ObservableKind::site_cosine, m);
  for (int x = 0; x < m; ++x) {
    CHECK(std::abs(c(x, x) - std::cos(2.0 * M_PI * x / m)) < 1e-15);
    for (int y = 0; y < m; ++y)
      if (x != y) CHECK(std::abs(c(x, y)) == 0.0);
  }

  const Eigen::MatrixXcd h = build_observable(ObservableKind::hopping, m);
  CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(std::abs(h(0, 1) - cplx(0.5, 0.0)) == 0.0);
  CHECK(std::abs(h(m - 1, 0) - cplx(0.5, 0.0)) == 0.0);
  CHECK(std::abs(h(0, 2)) == 0.0);

  CHECK(observable_from_name("site_cosine") == ObservableKind::site_cosine);
  CHECK(observable_from_name(observable_name(ObservableKind::hopping)) ==
        ObservableKind::hopping);
  CHECK_THROWS_AS(observable_from_name("momentum"), config_error);
}

TEST_CASE("product state moments follow the iid sum algebra") {
  const int m = 4, n = 12;
  auto b = make_basis(m, n);
  const WaveFunction phi = rand_wave(m, true);
  const Eigen::MatrixXcd o = rand_hermitian(m);
  const FockState psi = product_state(phi, n, b);

  const MomentReport rep = fluctuation_moments(psi, o, phi, n);

  const double mu = single_moment(phi, o, 1);
  const Eigen::MatrixXcd ot = o - mu * Eigen::MatrixXcd::Identity(m, m);
  const double s2 = single_moment(phi, ot, 2);
  const double k3 = single_moment(phi, ot, 3);
  const double k4 = single_moment(phi, ot, 4);

  CHECK(std::abs(rep.m1) < 1e-12);
  CHECK(rep.m2 == doctest::Approx(s2).epsilon(1e-10));
  CHECK(rep.m3 == doctest::Approx(k3 / std::sqrt(double(n))).epsilon(1e-10));
  CHECK(rep.m4 ==
        doctest::Approx(3.0 * s2 * s2 * (n - 1.0) / n + k4 / n).epsilon(1e-10));
  CHECK(rep.imag_leak < 1e-12);
}

TEST_CASE("dense matrix oracle for evolved states") {
  const int m = 3, n = 4;
  auto b = make_basis(m, n);
  const PairPotential V = test_potential(m, 0.8);
  const WaveFunction phi0 = rand_wave(m, true);
  const double t = 0.35;
  const FockState psi = evolve_hamiltonian(V, n, product_state(phi0, n, b), t);
  const WaveFunction phi_t = hartree_evolve(phi0, V, t, 5e-4).state_at(t);
  const Eigen::MatrixXcd o = build_observable(ObservableKind::hopping, m);

  const MomentReport rep = fluctuation_moments(psi, o, phi_t, n);

  const double mu = std::real((phi_t.adjoint() * o * phi_t).value());
  const Eigen::MatrixXcd dg = dgamma_op(o, b).mat;
  const Eigen::MatrixXcd s =
      (dg - double(n) * mu * Eigen::MatrixXcd::Identity(b->dim(), b->dim())) /
      std::sqrt(double(n));
  Eigen::VectorXcd v = psi.amp;
  double want[4];
  for (int k = 0; k < 4; ++k) {
    v = (s * v).eval();
    want[k] = std::real(psi.amp.dot(v));
  }
  CHECK(rep.m1 == doctest::Approx(want[0]).epsilon(1e-9));
  CHECK(rep.m2 == doctest::Approx(want[1]).epsilon(1e-9));
  CHECK(rep.m3 == doctest::Approx(want[2]).epsilon(1e-9));
  CHECK(rep.m4 == doctest::Approx(want[3]).epsilon(1e-9));
}

TEST_CASE("moments are shift invariant and scale homogeneous") {
  const int m = 3, n = 6;
  auto b = make_basis(m, n);
  const PairPotential V = test_potential(m, 0.5);
  const WaveFunction phi0 = rand_wave(m, true);
  const FockState psi = evolve_hamiltonian(V, n, product_state(phi0, n, b), 0.2);
  const WaveFunction phi_t = hartree_evolve(phi0, V, 0.2, 1e-3).state_at(0.2);
  const Eigen::MatrixXcd o = rand_hermitian(m);

  const MomentReport base = fluctuation_moments(psi, o, phi_t, n);

  const Eigen::MatrixXcd shifted = o + 1.7 * Eigen::MatrixXcd::Identity(m, m);
  const MomentReport sh = fluctuation_moments(psi, shifted, phi_t, n);
  CHECK(sh.m1 == doctest::Approx(base.m1).epsilon(1e-9));
  CHECK(sh.m2 == doctest::Approx(base.m2).epsilon(1e-9));
  CHECK(sh.m3 == doctest::Approx(base.m3).epsilon(1e-9));
  CHECK(sh.m4 == doctest::Approx(base.m4).epsilon(1e-9));

  const double alpha = 0.6;
  const MomentReport sc = fluctuation_moments(psi, alpha * o, phi_t, n);
  CHECK(sc.m1 == doctest::Approx(alpha * base.m1).epsilon(1e-9));
  CHECK(sc.m2 == doctest::Approx(alpha * alpha * base.m2).epsilon(1e-9));
  CHECK(sc.m3 == doctest::Approx(std::pow(alpha, 3) * base.m3).epsilon(1e-9));
  CHECK(sc.m4 == doctest::Approx(std::pow(alpha, 4) * base.m4).epsilon(1e-9));
}

TEST_CASE("variance agrees with the uncentered two route computation") {
  const int m = 4, n = 5;
  auto b = make_basis(m, n);
  const PairPotential V = test_potential(m, 0.7);
  const WaveFunction phi0 = rand_wave(m, true);
  const FockState psi = evolve_hamiltonian(V, n, product_state(phi0, n, b), 0.3);
  const WaveFunction phi_t = hartree_evolve(phi0, V, 0.3, 1e-3).state_at(0.3);
  const Eigen::MatrixXcd o = rand_hermitian(m);

  const MomentReport rep = fluctuation_moments(psi, o, phi_t, n);
  const FockState a = apply_dgamma(o, psi);
  const double raw2 = std::real(inner_product(a, a));
  const double raw1 = std::real(inner_product(psi, a));
  CHECK(rep.variance() == doctest::Approx((raw2 - raw1 * raw1) / n).epsilon(1e-9));
}

TEST_CASE("input validation") {
  const int m = 3, n = 3;
  auto b = make_basis(m, 5);
  const WaveFunction phi = rand_wave(m, true);
  const Eigen::MatrixXcd o = rand_hermitian(m);

  FockState mixed(b);
  mixed.amp.setOnes();
  mixed.normalize();
  CHECK_THROWS_AS(fluctuation_moments(mixed, o, phi, n), std::invalid_argument);

  const FockState psi = product_state(phi, n, b);
  Eigen::MatrixXcd bad = o;
  bad(0, 1) += cplx(0.0, 1e-6);
  CHECK_THROWS_AS(fluctuation_moments(psi, bad, phi, n), std::invalid_argument);
  CHECK_THROWS_AS(fluctuation_moments(psi, o, phi, 9), std::invalid_argument);
  CHECK_THROWS_AS(lln_check(psi, o, phi, n, 0.0), std::invalid_argument);
}

TEST_CASE("per particle averages concentrate at the expected rate") {
  const int m = 3;
  const double t = 0.25, eps = 0.05;
  const PairPotential V = test_potential(m, 0.5);
  WaveFunction phi0(m);
  phi0 << cplx(1.0, 0.0), cplx(0.5, 0.4), cplx(0.3, -0.3);
  phi0 /= phi0.norm();
  const WaveFunction phi_t = hartree_evolve(phi0, V, t, 1e-3).state_at(t);
  const Eigen::MatrixXcd o = build_observable(ObservableKind::site_cosine, m);

  std::vector<double> msd;
  for (int n : {4, 8, 16}) {
    auto b = make_basis(m, n);
    const FockState psi = evolve_hamiltonian(V, n, product_state(phi0, n, b), t);
    const LlnReport rep = lln_check(psi, o, phi_t, n, eps);
    CHECK(rep.tail_bound ==
          doctest::Approx(rep.mean_square_deviation / (eps * eps)).epsilon(1e-12));
    msd.push_back(rep.mean_square_deviation);
  }
  CHECK(msd[1] < msd[0]);
  CHECK(msd[2] < msd[1]);
  CHECK(msd[0] / msd[2] > 2.5);
  CHECK(msd[0] / msd[2] < 8.0);
}

TEST_CASE("moments turn gaussian as the particle number grows") {
  const int m = 3;
  const double t = 0.3;
  const PairPotential V = test_potential(m, 0.5);
  WaveFunction phi0(m);
  phi0 << cplx(1.0, 0.0), cplx(0.6, 0.5), cplx(0.4, -0.2);
  phi0 /= phi0.norm();
  const Eigen::MatrixXcd o = build_observable(ObservableKind::hopping, m);

  const std::vector<CltPoint> pts = clt_sweep(phi0, V, t, 1e-3, o, {4, 8, 16, 24});
  REQUIRE(pts.size() == 4);
  for (const CltPoint& p : pts) MESSAGE("N=", p.n, " m1=", p.moments.m1, " m2=", p.moments.m2,
                                        " m3=", p.moments.m3, " kurt=", p.moments.kurtosis());

  CHECK(std::abs(pts.back().moments.kurtosis() - 3.0) <
        std::abs(pts.front().moments.kurtosis() - 3.0));
  CHECK(std::abs(pts.back().moments.kurtosis() - 3.0) < 0.2);
  CHECK(std::abs(pts.back().moments.m1) < std::abs(pts.front().moments.m1) + 0.02);
  CHECK(std::abs(pts.back().moments.skewness()) <
        std::abs(pts.front().moments.skewness()) + 0.02);
}

TEST_CASE("variance limit matches the quadratic flow prediction") {
  const int m = 3;
  const double t = 0.3;
  const PairPotential V = test_potential(m, 0.5);
  WaveFunction phi0(m);
  phi0 << cplx(1.0, 0.0), cplx(0.6, 0.5), cplx(0.4, -0.2);
  phi0 /= phi0.norm();
  const Eigen::MatrixXcd o = build_observable(ObservableKind::hopping, m);

  const HartreeTrajectory traj = hartree_evolve(phi0, V, t, 1e-3);
  const BogoliubovMap theta = theta_evolve(traj, V, t, 0.0);
  const double sigma2 = sigma_t(theta, o, phi0, traj.state_at(t));

  const std::vector<CltPoint> pts = clt_sweep(phi0, V, t, 1e-3, o, {4, 24});
  CHECK(std::abs(pts.back().moments.m2 - sigma2) < 0.01);
  CHECK(std::abs(pts.back().moments.m2 - sigma2) <
        std::abs(pts.front().moments.m2 - sigma2));
}
