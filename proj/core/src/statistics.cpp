#include "meanfield/statistics.hpp"

#include <cmath>
#include <stdexcept>

#include "meanfield/errors.hpp"
#include "meanfield/fock_ops.hpp"
#include "meanfield/hartree.hpp"

namespace meanfield {

Eigen::MatrixXcd build_observable(ObservableKind kind, int sites) {
  if (sites < 1) throw std::invalid_argument("build_observable: need sites >= 1");
  Eigen::MatrixXcd o = Eigen::MatrixXcd::Zero(sites, sites);
  switch (kind) {
    case ObservableKind::site_cosine:
      for (int x = 0; x < sites; ++x) o(x, x) = std::cos(2.0 * M_PI * x / sites);
      break;
    case ObservableKind::hopping:
      for (int x = 0; x < sites; ++x) {
        o(x, (x + 1) % sites) += 0.5;
        o((x + 1) % sites, x) += 0.5;
      }
      break;
  }
  return o;
}

ObservableKind observable_from_name(const std::string& name) {
  if (name == "site_cosine") return ObservableKind::site_cosine;
  if (name == "hopping") return ObservableKind::hopping;
  throw config_error("unknown observable '" + name + "', expected site_cosine or hopping");
}

std::string observable_name(ObservableKind kind) {
  return kind == ObservableKind::site_cosine ? "site_cosine" : "hopping";
}

double MomentReport::skewness() const {
  const double var = variance();
  const double c3 = m3 - 3.0 * m2 * m1 + 2.0 * m1 * m1 * m1;
  return c3 / std::pow(var, 1.5);
}

double MomentReport::kurtosis() const {
  const double var = variance();
  const double c4 =
      m4 - 4.0 * m3 * m1 + 6.0 * m2 * m1 * m1 - 3.0 * m1 * m1 * m1 * m1;
  return c4 / (var * var);
}

MomentReport fluctuation_moments(const FockState& psi, const Eigen::MatrixXcd& o,
                                 const WaveFunction& phi, int n_particles) {
  if (!psi.basis) throw std::invalid_argument("fluctuation_moments: state has no basis");
  const int m = psi.basis->sites();
  if (o.rows() != m || o.cols() != m || phi.size() != m)
    throw std::invalid_argument("fluctuation_moments: observable or wave size mismatch");
  if ((o - o.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("fluctuation_moments: observable must be Hermitian");
  if (n_particles < 1 || n_particles > psi.basis->n_max())
    throw std::invalid_argument("fluctuation_moments: n_particles outside basis range");

  // S is only the centered particle sum when the state carries exactly N
  // particles, so mixed-sector input is rejected rather than misread.
  const Eigen::VectorXd w = sector_weights(psi);
  double off = 0.0;
  for (int s = 0; s <= psi.basis->n_max(); ++s)
    if (s != n_particles) off += w(s);
  if (off > 1e-12)
    throw std::invalid_argument("fluctuation_moments: state leaves the N-particle sector");

  const double mean = std::real((phi.adjoint() * o * phi).value());
  const Eigen::MatrixXcd ot = o - mean * Eigen::MatrixXcd::Identity(m, m);
  const FockState psi1 = apply_dgamma(ot, psi);
  const FockState psi2 = apply_dgamma(ot, psi1);

  const double n = n_particles;
  const cplx c1 = inner_product(psi, psi1) / std::sqrt(n);
  const cplx c2 = inner_product(psi1, psi1) / n;
  const cplx c3 = inner_product(psi1, psi2) / (n * std::sqrt(n));
  const cplx c4 = inner_product(psi2, psi2) / (n * n);

  MomentReport rep;
  rep.m1 = std::real(c1);
  rep.m2 = std::real(c2);
  rep.m3 = std::real(c3);
  rep.m4 = std::real(c4);
  rep.imag_leak = std::max(std::max(std::abs(std::imag(c1)), std::abs(std::imag(c2))),
                           std::max(std::abs(std::imag(c3)), std::abs(std::imag(c4))));
  return rep;
}

LlnReport lln_check(const FockState& psi, const Eigen::MatrixXcd& o, const WaveFunction& phi,
                    int n_particles, double eps) {
  if (eps <= 0.0) throw std::invalid_argument("lln_check: need eps > 0");
  const MomentReport rep = fluctuation_moments(psi, o, phi, n_particles);
  LlnReport out;
  out.mean_square_deviation = rep.m2 / n_particles;
  out.eps = eps;
  out.tail_bound = out.mean_square_deviation / (eps * eps);
  return out;
}

std::vector<CltPoint> clt_sweep(const WaveFunction& phi0, const PairPotential& v, double t,
                                double dt, const Eigen::MatrixXcd& o, const std::vector<int>& ns,
                                const KrylovOptions& opts) {
  const WaveFunction phi_t = t == 0.0 ? phi0 : hartree_evolve(phi0, v, t, dt).state_at(t);
  std::vector<CltPoint> out;
  out.reserve(ns.size());
  for (int n : ns) {
    auto basis = make_basis(int(phi0.size()), n);
    FockState psi = product_state(phi0, n, basis);
    if (t != 0.0) psi = evolve_hamiltonian(v, n, psi, t, opts);
    out.push_back({n, fluctuation_moments(psi, o, phi_t, n)});
  }
  return out;
}

}  // namespace meanfield
