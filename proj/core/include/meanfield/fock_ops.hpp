#pragma once

#include <Eigen/SparseCore>
#include <functional>
#include <memory>

#include "meanfield/fock_state.hpp"
#include "meanfield/hartree.hpp"
#include "meanfield/krylov.hpp"
#include "meanfield/lattice.hpp"

namespace meanfield {

// Assembled sparse operator on a truncated Fock basis.
struct SecondQuantizedOperator {
  std::shared_ptr<const FockBasis> basis;
  Eigen::SparseMatrix<cplx> mat;
  bool hermitian = false;
  bool number_conserving = false;

  FockState apply(const FockState& psi) const;
};

// a+(f) = sum_x f(x) a+_x.  Requires the top sector of psi to carry weight
// below 1e-10, otherwise amplitude would be pushed past the cutoff.
FockState apply_create(const WaveFunction& f, const FockState& psi);

// a(f) = sum_x conj(f(x)) a_x; adjoint of apply_create below the cutoff.
FockState apply_annihilate(const WaveFunction& f, const FockState& psi);

// A(f,g) = a+(f) + a(conj(g)), linear in both arguments.
FockState apply_field_pair(const WaveFunction& f, const WaveFunction& g, const FockState& psi);

// dGamma(O) = sum_{x,y} O(x,y) a+_x a_y, applied matrix-free.
FockState apply_dgamma(const Eigen::MatrixXcd& O, const FockState& psi);

// second-quantized lattice translation by a sites
FockState translate_state(const FockState& psi, int a);

// normalized (a+(phi))^N Omega / sqrt(N!)
FockState product_state(const WaveFunction& phi, int n_particles,
                        std::shared_ptr<const FockBasis> basis);

SecondQuantizedOperator number_op(std::shared_ptr<const FockBasis> basis);

SecondQuantizedOperator dgamma_op(const Eigen::MatrixXcd& O,
                                  std::shared_ptr<const FockBasis> basis);

// H_N = dGamma(-lap) + (1/2N) sum_{x,y} V(x-y) a+_x a+_y a_y a_x,
// assembled once per (basis, V, N) and cached.
std::shared_ptr<const SecondQuantizedOperator> build_hamiltonian(
    const PairPotential& V, int n_particles, std::shared_ptr<const FockBasis> basis);

// Generator of the fluctuation dynamics around phi_t, scalar part dropped
// (see fluctuation_phase).  Hermitian, not number-conserving.
SecondQuantizedOperator build_LN_generator(const WaveFunction& phi_t, const PairPotential& V,
                                           int n_particles,
                                           std::shared_ptr<const FockBasis> basis);

// Large-N limit of build_LN_generator: quadratic lines only.
SecondQuantizedOperator build_Linfty_generator(const WaveFunction& phi_t, const PairPotential& V,
                                               std::shared_ptr<const FockBasis> basis);

// psi(T) = e^{-iTH} psi for an assembled Hermitian operator.
FockState evolve(const SecondQuantizedOperator& H, const FockState& psi, double T,
                 const KrylovOptions& opts = {});

// Time-ordered propagation from s to t with midpoint generator evaluation:
// per step of size dt the caller-supplied factory is asked for the generator
// at the midpoint time.  Steps of size dt (last one shorter).
FockState evolve_generator(const std::function<SecondQuantizedOperator(double)>& gen_at,
                           const FockState& psi, double s, double t, double dt,
                           const KrylovOptions& opts = {});

// e^{-iTH_N} psi, choosing between the cached sparse assembly and a
// matrix-free kernel depending on basis size.
FockState evolve_hamiltonian(const PairPotential& V, int n_particles, const FockState& psi,
                             double T, const KrylovOptions& opts = {});

// Matrix-free H_N action (pull-based, row-parallel); used directly by
// evolve_hamiltonian above the assembly threshold and by benchmarks.
class HamiltonianMap : public LinearMap {
 public:
  HamiltonianMap(const PairPotential& V, int n_particles,
                 std::shared_ptr<const FockBasis> basis);
  std::int64_t dim() const override { return basis_->dim(); }
  void apply(Eigen::Ref<const Eigen::VectorXcd> in,
             Eigen::Ref<Eigen::VectorXcd> out) const override;

 private:
  std::shared_ptr<const FockBasis> basis_;
  Eigen::VectorXd v_;   // potential by displacement
  double inv2n_;
  Eigen::VectorXd sqrt_;  // sqrt lookup 0..n_max+1
};

// Generator of the Weyl displacement: i (a+(f) - a(f)), a Hermitian map.
class WeylGeneratorMap : public LinearMap {
 public:
  WeylGeneratorMap(const WaveFunction& f, std::shared_ptr<const FockBasis> basis);
  std::int64_t dim() const override { return basis_->dim(); }
  void apply(Eigen::Ref<const Eigen::VectorXcd> in,
             Eigen::Ref<Eigen::VectorXcd> out) const override;

 private:
  std::shared_ptr<const FockBasis> basis_;
  WaveFunction f_;
  Eigen::VectorXd sqrt_;
};

}  // namespace meanfield
