#pragma once

#include <memory>

#include "meanfield/fock_basis.hpp"
#include "meanfield/lattice.hpp"

namespace meanfield {

// A vector in the truncated Fock space, amplitudes indexed by basis rank.
struct FockState {
  std::shared_ptr<const FockBasis> basis;
  Eigen::VectorXcd amp;

  FockState() = default;
  explicit FockState(std::shared_ptr<const FockBasis> b)
      : basis(std::move(b)), amp(Eigen::VectorXcd::Zero(basis->dim())) {}

  double norm() const { return amp.norm(); }
  void normalize();
};

FockState vacuum_state(std::shared_ptr<const FockBasis> basis);

cplx inner_product(const FockState& f, const FockState& g);

// |amp|^2 summed per total-occupation sector, length n_max + 1
Eigen::VectorXd sector_weights(const FockState& psi);

// largest n whose sector carries more than tol weight (-1 for the zero vector)
int top_occupied_sector(const FockState& psi, double tol);

// zero out everything outside the n-particle sector
FockState project_sector(const FockState& psi, int n);

// <psi, N_hat psi> / <psi, psi>
double expected_number(const FockState& psi);

// site-resolved <n_x> / <psi, psi>, length M
Eigen::VectorXd occupation_profile(const FockState& psi);

}  // namespace meanfield
