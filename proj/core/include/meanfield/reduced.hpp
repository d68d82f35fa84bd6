#pragma once

#include <memory>

#include "meanfield/fock_state.hpp"

namespace meanfield {

// Reduced density matrix with its health measured where it is produced.
struct DensityMatrix {
  Eigen::MatrixXcd mat;

  double hermiticity_dev() const;  // max |G - G+|
  double min_eigenvalue() const;
  double trace_dev() const;  // |tr G - 1|
};

// One-particle matrix, (1/N) <psi, a+_y a_x psi> at entry (x, y).
DensityMatrix gamma1(const FockState& psi, int n_particles);

// Two-particle matrix on pair indices alpha = x * M + y,
// (1/(N(N-1))) <psi, a+_{x'} a+_{y'} a_y a_x psi> at ((x,y), (x',y')).
DensityMatrix gamma2(const FockState& psi, int n_particles);

// sum of |eigenvalues| of the Hermitian difference a - b
double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

// |phi><phi| and |phi x phi><phi x phi|
Eigen::MatrixXcd hartree_projector(const WaveFunction& phi);
Eigen::MatrixXcd pair_projector(const WaveFunction& phi);

// contraction of the second pair slot: out(x, x') = sum_y g2((x,y), (x',y))
Eigen::MatrixXcd partial_trace_second(const Eigen::MatrixXcd& g2, int sites);

}  // namespace meanfield
