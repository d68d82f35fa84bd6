#pragma once

#include <memory>

#include "meanfield/fock_ops.hpp"

namespace meanfield {

struct WeylResult {
  FockState state;
  // top-sector amplitude of the result plus any norm loss; how much of the
  // displaced state the cutoff failed to hold
  double truncation_deficit = 0.0;
};

// W(f) psi = exp(a+(f) - a(f)) psi.  Refuses when the displaced occupation
// distribution would not fit below the cutoff:  |f|^2 + 4 |f| must stay
// within the headroom above the highest occupied sector.
WeylResult weyl(const WaveFunction& f, const FockState& psi, const KrylovOptions& opts = {});

namespace detail {

// Same displacement without the stacking floor, for callers whose f is built
// to cancel the state's existing displacement (undressing).  The worst-case
// floor assumes the occupations add; here they subtract, so the only honest
// measure is the reported deficit, which the caller must check.
WeylResult weyl_cancelling(const WaveFunction& f, const FockState& psi,
                           const KrylovOptions& opts = {});

}  // namespace detail

struct XiResult {
  FockState xi;
  // 1 / |P_N W(sqrt(N) phi) vacuum|, the product-to-coherent normalization
  double d_n = 0.0;
  double truncation_deficit = 0.0;
};

// xi = W(sqrt(N) phi)+ phi^N, the fluctuation picture of a product state.
// Needs roughly 2N + 4 sqrt(N) of cutoff headroom.
XiResult xi_vector(const WaveFunction& phi, int n_particles,
                   std::shared_ptr<const FockBasis> basis, const KrylovOptions& opts = {});

}  // namespace meanfield
