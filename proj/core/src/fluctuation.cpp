#include "meanfield/fluctuation.hpp"

#include <cmath>

#include "meanfield/errors.hpp"

namespace meanfield {

namespace {

double omega_n(const WaveFunction& phi, const PairPotential& V, int n_particles) {
  const Eigen::VectorXd rho = phi.cwiseAbs2();
  return -0.5 * double(n_particles) * convolve(V, rho).dot(rho);
}

}  // namespace

double fluctuation_phase(const HartreeTrajectory& traj, const PairPotential& V, int n_particles,
                         double t, double s) {
  if (n_particles < 1) throw std::invalid_argument("fluctuation_phase: N must be positive");
  const int ks = traj.index_at(s), kt = traj.index_at(t);
  if (ks == kt) return 0.0;
  const int lo = std::min(ks, kt), hi = std::max(ks, kt);
  double sum = 0.5 * (omega_n(traj.states.at(lo), V, n_particles) +
                      omega_n(traj.states.at(hi), V, n_particles));
  for (int k = lo + 1; k < hi; ++k) sum += omega_n(traj.states.at(k), V, n_particles);
  const double lambda = sum * traj.dt;
  return (kt >= ks) ? lambda : -lambda;
}

FluctuationResult fluctuation_dynamics(const HartreeTrajectory& traj, const PairPotential& V,
                                       int n_particles, const FockState& psi, double t, double s,
                                       const KrylovOptions& opts) {
  if (!psi.basis) throw std::invalid_argument("fluctuation_dynamics: state has no basis");
  const double root_n = std::sqrt(double(n_particles));

  const WeylResult undressed = weyl(-root_n * traj.state_at(s), psi, opts);
  const FockState moved = evolve_hamiltonian(V, n_particles, undressed.state, t - s, opts);
  const WeylResult dressed = weyl(root_n * traj.state_at(t), moved, opts);

  FluctuationResult out;
  out.phase = fluctuation_phase(traj, V, n_particles, t, s);
  out.state = dressed.state;
  out.state.amp *= std::exp(cplx(0.0, out.phase));
  out.truncation_deficit = undressed.truncation_deficit + dressed.truncation_deficit;
  return out;
}

GrowthSeries vacuum_number_growth(const HartreeTrajectory& traj, const PairPotential& V,
                                  int n_particles, std::shared_ptr<const FockBasis> basis,
                                  const Eigen::VectorXd& times, const KrylovOptions& opts) {
  const double root_n = std::sqrt(double(n_particles));
  GrowthSeries out;
  out.values.resize(times.size());

  const WeylResult start = weyl(-root_n * traj.state_at(0.0), vacuum_state(basis), opts);
  FockState chi = start.state;
  out.truncation_deficit = start.truncation_deficit;
  double at = 0.0;
  for (Eigen::Index k = 0; k < times.size(); ++k) {
    const double t = times(k);
    if (t < at) throw std::invalid_argument("vacuum_number_growth: times must ascend");
    if (t > at) chi = evolve_hamiltonian(V, n_particles, chi, t - at, opts);
    at = t;
    const WeylResult dressed = detail::weyl_cancelling(root_n * traj.state_at(t), chi, opts);
    out.truncation_deficit = std::max(out.truncation_deficit, dressed.truncation_deficit);
    out.values(k) = expected_number(dressed.state) + 1.0;
  }
  return out;
}

}  // namespace meanfield
