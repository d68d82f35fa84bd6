#pragma once

#include <cstdint>

#include "meanfield/lattice.hpp"

namespace meanfield {

// Matrix-free linear action on a complex vector.  Implementations must be
// safe to call from the single propagation thread; internal row-parallelism
// is up to the map.  `out` is pre-sized by the caller.
struct LinearMap {
  virtual ~LinearMap() = default;
  virtual std::int64_t dim() const = 0;
  virtual void apply(Eigen::Ref<const Eigen::VectorXcd> in,
                     Eigen::Ref<Eigen::VectorXcd> out) const = 0;
};

struct KrylovOptions {
  double tol = 1e-10;             // local error per substep, relative to the input norm
  int max_dim = 32;               // Lanczos basis cap
  double memory_budget = 3.0e9;   // bytes available for basis vectors
};

// e^{-i t H} v for Hermitian H, by adaptive Lanczos substeps with full
// reorthogonalization.  t may be negative.  Norm is preserved up to the
// requested tolerance; no renormalization is applied.
Eigen::VectorXcd expm_apply(const LinearMap& H, double t, const Eigen::VectorXcd& v,
                            const KrylovOptions& opts = {});

}  // namespace meanfield
