#pragma once

#include <Eigen/Dense>
#include <complex>

namespace meanfield {

using cplx = std::complex<double>;

// One-particle wavefunction on the periodic chain, one complex amplitude
// per site.
using WaveFunction = Eigen::VectorXcd;

// Periodic 1-d lattice Z/MZ.
struct Lattice {
  int sites = 0;

  int wrap(int x) const {
    int r = x % sites;
    return r < 0 ? r + sites : r;
  }
  // displacement (x - y) mod M in [0, M)
  int displacement(int x, int y) const { return wrap(x - y); }
};

// Even pair potential indexed by lattice displacement: v(d) with
// v(d) == v(M-d).  Interactions depend on the minimal-image distance only.
class PairPotential {
 public:
  PairPotential() = default;
  // throws config_error naming the first displacement that breaks evenness
  static PairPotential from_displacements(const Eigen::VectorXd& v);
  static PairPotential zero(int sites);

  int sites() const { return static_cast<int>(v_.size()); }
  double operator()(int d) const;
  const Eigen::VectorXd& values() const { return v_; }
  bool is_zero() const { return v_.size() == 0 || v_.isZero(0.0); }

  // W(x,y) = v((x-y) mod M), the dense interaction matrix
  Eigen::MatrixXd displacement_matrix() const;

 private:
  explicit PairPotential(Eigen::VectorXd v) : v_(std::move(v)) {}
  Eigen::VectorXd v_;
};

// (lap f)(x) = f(x+1) - 2 f(x) + f(x-1), periodic wrap
WaveFunction apply_laplacian(const WaveFunction& f);

// Dense matrix of -lap; the kinetic part of every Hamiltonian here.
Eigen::MatrixXd kinetic_matrix(int sites);

// Eigenvalues of -lap on plane waves: 2(1 - cos(2 pi k / M)), k = 0..M-1
Eigen::VectorXd kinetic_eigenvalues(int sites);

// Unitary DFT, F(k,x) = exp(-2 pi i k x / M) / sqrt(M)
Eigen::MatrixXcd dft_matrix(int sites);

// Circular convolution (v * rho)(x) = sum_d v(d) rho(x-d).  The sum runs in
// displacement order so the result commutes with lattice translations
// exactly, not just up to roundoff.
Eigen::VectorXd convolve(const PairPotential& v, const Eigen::VectorXd& rho);

// <f,g> = sum_x conj(f(x)) g(x)
cplx inner_product(const WaveFunction& f, const WaveFunction& g);

// Cyclic shift by a sites: (T_a f)(x) = f(x-a)
WaveFunction translate(const WaveFunction& f, int a);

}  // namespace meanfield
