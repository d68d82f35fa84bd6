#pragma once

#include <vector>

#include "meanfield/lattice.hpp"

namespace meanfield {

// Discrete Hartree flow  i dphi/dt = -lap phi + (V * |phi|^2) phi  sampled on
// a uniform time grid.  states[k] is the solution at times(k) = k dt.
struct HartreeTrajectory {
  double dt = 0.0;
  Eigen::VectorXd times;
  std::vector<WaveFunction> states;

  int steps() const { return static_cast<int>(states.size()) - 1; }
  double t_final() const { return times.size() ? times(times.size() - 1) : 0.0; }

  // index of grid point t; throws if t is not on the grid (tol 1e-9)
  int index_at(double t) const;
  const WaveFunction& state_at(double t) const { return states[index_at(t)]; }
};

// One Strang-splitting step: half nonlinear phase, exact kinetic step in the
// DFT basis, half nonlinear phase recomputed from the updated density.
// dt must be positive.
WaveFunction hartree_step(const WaveFunction& phi, const PairPotential& v, double dt);

// Evolves a normalized phi0 for ceil(T/dt) steps of size dt.
HartreeTrajectory hartree_evolve(const WaveFunction& phi0, const PairPotential& v, double T,
                                 double dt);

// E(phi) = <phi, -lap phi> + 1/2 sum_x (V * |phi|^2)(x) |phi(x)|^2
double hartree_energy(const WaveFunction& phi, const PairPotential& v);

namespace detail {
// Unchecked step, any sign of dt.  Reverse evolution runs through here.
WaveFunction strang_step(const WaveFunction& phi, const PairPotential& v, double dt);
}  // namespace detail

}  // namespace meanfield
