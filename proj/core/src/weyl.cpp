#include "meanfield/weyl.hpp"

#include <cmath>

#include "meanfield/errors.hpp"
#include "meanfield/krylov.hpp"

namespace meanfield {

namespace {

double top_sector_amp(const FockState& psi) {
  const FockBasis& b = *psi.basis;
  const int top = b.n_max();
  return std::sqrt(
      psi.amp.segment(b.sector_offset(top), b.sector_dim(top)).squaredNorm());
}

}  // namespace

namespace {

WeylResult displace(const WaveFunction& f, const FockState& psi, const KrylovOptions& opts,
                    bool enforce_floor) {
  if (!psi.basis) throw std::invalid_argument("weyl: state has no basis");
  const FockBasis& b = *psi.basis;
  if (f.size() != b.sites()) throw std::invalid_argument("weyl: wavefunction size mismatch");

  // coarse feasibility floor: sectors holding real mass plus the displaced
  // Poisson reach must fit below the cutoff.  The reported deficit is the
  // honest after-the-fact measure; this only rejects hopeless requests.
  const double fn = f.norm();
  if (fn > 0.0 && enforce_floor) {
    const int occupied = std::max(0, top_occupied_sector(psi, 1e-4));
    const double headroom = double(b.n_max() - occupied);
    if (fn * fn + 4.0 * fn > headroom)
      throw infeasible_error("weyl: displacement needs more cutoff headroom, increase N_max");
  }

  WeylResult out;
  out.state = psi;
  if (fn == 0.0) return out;

  // W(f) = exp(-i H) with the Hermitian H = i (a+(f) - a(f))
  const WeylGeneratorMap gen(f, psi.basis);
  KrylovOptions o = opts;
  o.tol = std::min(opts.tol, 1e-12);
  out.state.amp = expm_apply(gen, 1.0, psi.amp, o);
  out.truncation_deficit = std::abs(out.state.norm() - psi.norm()) + top_sector_amp(out.state);
  return out;
}

}  // namespace

WeylResult weyl(const WaveFunction& f, const FockState& psi, const KrylovOptions& opts) {
  return displace(f, psi, opts, true);
}

WeylResult detail::weyl_cancelling(const WaveFunction& f, const FockState& psi,
                                   const KrylovOptions& opts) {
  return displace(f, psi, opts, false);
}

XiResult xi_vector(const WaveFunction& phi, int n_particles,
                   std::shared_ptr<const FockBasis> basis, const KrylovOptions& opts) {
  if (n_particles < 1) throw std::invalid_argument("xi_vector: N must be positive");
  const WaveFunction f = std::sqrt(double(n_particles)) * phi;

  // the coherent state's sector weights give the normalization directly
  const WeylResult coh = weyl(f, vacuum_state(basis), opts);
  const double wn = std::sqrt(sector_weights(coh.state)(n_particles));
  if (wn <= 0.0) throw numeric_error("xi_vector: empty target sector");

  const WeylResult back = weyl(-f, product_state(phi, n_particles, basis), opts);
  XiResult out;
  out.xi = back.state;
  out.d_n = 1.0 / wn;
  out.truncation_deficit = std::max(coh.truncation_deficit, back.truncation_deficit);
  return out;
}

}  // namespace meanfield
