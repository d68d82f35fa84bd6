#include "meanfield/hartree.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace meanfield {

namespace {

// Precomputed exact kinetic propagator exp(+i lap dt) = F^H diag(e^{-i eps dt}) F.
Eigen::MatrixXcd kinetic_propagator(int m, double dt) {
  const Eigen::MatrixXcd f = dft_matrix(m);
  const Eigen::VectorXd eps = kinetic_eigenvalues(m);
  Eigen::VectorXcd ph(m);
  for (int k = 0; k < m; ++k) ph(k) = std::polar(1.0, -eps(k) * dt);
  return f.adjoint() * ph.asDiagonal() * f;
}

WaveFunction half_phase(const WaveFunction& phi, const PairPotential& v, double dt) {
  const Eigen::VectorXd rho = phi.cwiseAbs2();
  const Eigen::VectorXd u = convolve(v, rho);
  WaveFunction out(phi.size());
  for (int x = 0; x < phi.size(); ++x) out(x) = std::polar(1.0, -0.5 * dt * u(x)) * phi(x);
  return out;
}

}  // namespace

namespace detail {

WaveFunction strang_step(const WaveFunction& phi, const PairPotential& v, double dt) {
  const int m = static_cast<int>(phi.size());
  WaveFunction w = half_phase(phi, v, dt);
  w = kinetic_propagator(m, dt) * w;
  return half_phase(w, v, dt);
}

}  // namespace detail

WaveFunction hartree_step(const WaveFunction& phi, const PairPotential& v, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("hartree_step: dt must be positive");
  if (v.sites() != phi.size()) throw std::invalid_argument("hartree_step: size mismatch");
  return detail::strang_step(phi, v, dt);
}

HartreeTrajectory hartree_evolve(const WaveFunction& phi0, const PairPotential& v, double T,
                                 double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("hartree_evolve: dt must be positive");
  if (T < 0.0) throw std::invalid_argument("hartree_evolve: T must be nonnegative");
  if (v.sites() != phi0.size()) throw std::invalid_argument("hartree_evolve: size mismatch");
  if (std::abs(phi0.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("hartree_evolve: initial state must be normalized");

  const int m = static_cast<int>(phi0.size());
  const int n = static_cast<int>(std::ceil(T / dt - 1e-12));
  HartreeTrajectory traj;
  traj.dt = dt;
  traj.times.resize(n + 1);
  traj.states.reserve(n + 1);
  traj.states.push_back(phi0);
  traj.times(0) = 0.0;

  const Eigen::MatrixXcd kin = kinetic_propagator(m, dt);
  WaveFunction w = phi0;
  for (int k = 1; k <= n; ++k) {
    w = half_phase(w, v, dt);
    w = kin * w;
    w = half_phase(w, v, dt);
    traj.states.push_back(w);
    traj.times(k) = k * dt;
  }
  return traj;
}

int HartreeTrajectory::index_at(double t) const {
  const long k = std::lround(t / dt);
  if (k < 0 || k >= static_cast<long>(states.size()) || std::abs(t - k * dt) > 1e-9)
    throw std::invalid_argument("HartreeTrajectory: t = " + std::to_string(t) +
                                " is not on the stored grid");
  return static_cast<int>(k);
}

double hartree_energy(const WaveFunction& phi, const PairPotential& v) {
  if (v.sites() != phi.size()) throw std::invalid_argument("hartree_energy: size mismatch");
  const double kin = std::real(inner_product(phi, -apply_laplacian(phi)));
  const Eigen::VectorXd rho = phi.cwiseAbs2();
  const double pot = 0.5 * convolve(v, rho).dot(rho);
  return kin + pot;
}

}  // namespace meanfield
