#pragma once

#include <memory>

#include "meanfield/weyl.hpp"

namespace meanfield {

// Integral of the c-number part of the conjugated generator,
// omega_N(tau) = -(N/2) sum_x (V * rho_tau)(x) rho_tau(x), by the trapezoid
// rule on the trajectory grid.  Both endpoints must lie on the grid.
double fluctuation_phase(const HartreeTrajectory& traj, const PairPotential& V, int n_particles,
                         double t, double s = 0.0);

struct FluctuationResult {
  FockState state;
  double phase = 0.0;  // the applied compensation angle
  double truncation_deficit = 0.0;
};

// Propagates psi with the scalar-free fluctuation generator:
// e^{i Lambda(t;s)} W(sqrt(N) phi_t) e^{-i H_N (t-s)} W(sqrt(N) phi_s)+ psi.
FluctuationResult fluctuation_dynamics(const HartreeTrajectory& traj, const PairPotential& V,
                                       int n_particles, const FockState& psi, double t,
                                       double s = 0.0, const KrylovOptions& opts = {});

struct GrowthSeries {
  Eigen::VectorXd values;            // <number + 1> per sample time
  double truncation_deficit = 0.0;   // worst Weyl deficit across the sweep
};

// <(number + 1)> along the fluctuation flow started from the vacuum, sampled
// at the given times (each on the trajectory grid, ascending).  One
// propagation sweep, not a fresh solve per sample.
GrowthSeries vacuum_number_growth(const HartreeTrajectory& traj, const PairPotential& V,
                                  int n_particles, std::shared_ptr<const FockBasis> basis,
                                  const Eigen::VectorXd& times, const KrylovOptions& opts = {});

}  // namespace meanfield
