#pragma once

#include <memory>

#include "meanfield/fock_ops.hpp"
#include "meanfield/hartree.hpp"
#include "meanfield/lattice.hpp"

namespace meanfield {

// Blocks of the Bogoliubov pair-space map theta(t;s).  Acting on a pair
// (f,g): f' = U f + conj(V) g, g' = V f + conj(U) g.  The full 2M x 2M
// matrix is reconstructed from (U,V) alone, so the conjugation-swap
// structure holds by construction.
struct BogoliubovMap {
  Eigen::MatrixXcd U, V;
  double t = 0.0, s = 0.0;
  double uv_identity_dev = 0.0;  // max |U+U - V+V - 1|
  double uv_offdiag_dev = 0.0;   // max |U+ conj(V) - V+ conj(U)|
  double v_hs_norm = 0.0;        // Frobenius norm of V (Shale-Stinespring)

  std::pair<WaveFunction, WaveFunction> apply(const WaveFunction& f,
                                              const WaveFunction& g) const;
};

// D_t = -lap + diag(V * |phi|^2) + X with X(x,y) = V(x-y) phi(x) conj(phi(y))
Eigen::MatrixXcd build_Dt(const WaveFunction& phi_t, const PairPotential& V);

// B_t(x,y) = V(x-y) conj(phi(x)) conj(phi(y)), complex-symmetric
Eigen::MatrixXcd build_Bt(const WaveFunction& phi_t, const PairPotential& V);

// Integrates the pair-space evolution between the trajectory times s and t
// with classical RK4 on the stored grid; needs both endpoints and midpoints
// on the grid, so steps are two trajectory intervals wide.
BogoliubovMap theta_evolve(const HartreeTrajectory& traj, const PairPotential& V, double t,
                           double s);

struct BtuReport {
  double max_rel_dev = 0.0;
  double truncation_deficit = 0.0;
  int samples = 0;
};

// Checks the pullback action U_inf+(t;s) A(f,g) U_inf(t;s) = A(theta(f,g))
// on a truncated basis for randomly sampled pairs and low-sector states.
// The trajectory must cover [s,t] of the supplied map at half the stepping
// resolution, as for theta_evolve.
BtuReport check_btu(const BogoliubovMap& theta, const HartreeTrajectory& traj,
                    const PairPotential& V, std::shared_ptr<const FockBasis> basis, int samples,
                    unsigned seed);

// CLT variance sigma_t^2 for observable O: with h = (O phi_t, conj(O phi_t))
// and the pair inner product, 1/2 [ <theta h, theta h> -
// |<theta h, (phi_0, conj(phi_0))/sqrt(2)>|^2 ].
double sigma_t(const BogoliubovMap& theta, const Eigen::MatrixXcd& O, const WaveFunction& phi0,
               const WaveFunction& phi_t);

}  // namespace meanfield
