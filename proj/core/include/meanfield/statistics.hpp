#pragma once

#include <memory>
#include <string>
#include <vector>

#include "meanfield/fock_state.hpp"
#include "meanfield/krylov.hpp"
#include "meanfield/lattice.hpp"

namespace meanfield {

// One-particle observables the experiments sample.  site_cosine is the
// diagonal cos(2 pi x / M) density weight, hopping the symmetrized shift.
enum class ObservableKind { site_cosine, hopping };

Eigen::MatrixXcd build_observable(ObservableKind kind, int sites);
ObservableKind observable_from_name(const std::string& name);  // config_error on unknown
std::string observable_name(ObservableKind kind);

// Moments of the centered, scaled fluctuation S = (dGamma(O) - N <phi, O phi>)
// / sqrt(N) in a state supported on the N-particle sector.
struct MomentReport {
  double m1 = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0;
  double imag_leak = 0.0;  // largest imaginary residue dropped above

  double variance() const { return m2 - m1 * m1; }
  double skewness() const;  // central, normalized by variance^(3/2)
  double kurtosis() const;  // central, normalized by variance^2
};

MomentReport fluctuation_moments(const FockState& psi, const Eigen::MatrixXcd& o,
                                 const WaveFunction& phi, int n_particles);

// Chebyshev content of the moments: the mean square deviation of the
// per-particle average dGamma(O)/N from the mean-field value, and the tail
// bound it implies at threshold eps.
struct LlnReport {
  double mean_square_deviation = 0.0;
  double eps = 0.0;
  double tail_bound = 0.0;
};

LlnReport lln_check(const FockState& psi, const Eigen::MatrixXcd& o, const WaveFunction& phi,
                    int n_particles, double eps);

// Evolves phi0^N under the N-particle dynamics to time t for each listed N
// and reports the fluctuation moments against the common mean-field state.
struct CltPoint {
  int n = 0;
  MomentReport moments;
};

std::vector<CltPoint> clt_sweep(const WaveFunction& phi0, const PairPotential& v, double t,
                                double dt, const Eigen::MatrixXcd& o, const std::vector<int>& ns,
                                const KrylovOptions& opts = {});

}  // namespace meanfield
