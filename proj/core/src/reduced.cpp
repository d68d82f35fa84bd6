#include "meanfield/reduced.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "meanfield/errors.hpp"

namespace meanfield {

double DensityMatrix::hermiticity_dev() const {
  return (mat - mat.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mat, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double DensityMatrix::trace_dev() const {
  return std::abs(mat.trace() - cplx(1.0, 0.0));
}

DensityMatrix gamma1(const FockState& psi, int n_particles) {
  if (!psi.basis) throw std::invalid_argument("gamma1: state has no basis");
  if (n_particles < 1) throw std::invalid_argument("gamma1: need n_particles >= 1");
  const FockBasis& b = *psi.basis;
  const int m = b.sites();

  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(m, m);
  std::vector<std::uint8_t> hop(m);
  for (std::int64_t i = 0; i < b.dim(); ++i) {
    const cplx c = psi.amp(i);
    if (c == cplx(0.0, 0.0)) continue;
    const std::uint8_t* v = b.occ(i);
    const double p = std::norm(c);
    for (int x = 0; x < m; ++x) {
      if (v[x] == 0) continue;
      g(x, x) += p * v[x];
      for (int y = 0; y < m; ++y) {
        if (y == x) continue;
        for (int z = 0; z < m; ++z) hop[z] = v[z];
        hop[x] -= 1;
        hop[y] += 1;
        const double w = std::sqrt(double(v[x]) * (v[y] + 1.0));
        g(x, y) += w * c * std::conj(psi.amp(b.index_of(hop.data())));
      }
    }
  }
  g /= double(n_particles);

  DensityMatrix out;
  out.mat = 0.5 * (g + g.adjoint().eval());
  return out;
}

DensityMatrix gamma2(const FockState& psi, int n_particles) {
  if (!psi.basis) throw std::invalid_argument("gamma2: state has no basis");
  if (n_particles < 2) throw std::invalid_argument("gamma2: need n_particles >= 2");
  const FockBasis& b = *psi.basis;
  const int m = b.sites();

  // <psi, a+_{x'} a+_{y'} a_y a_x psi> = sum over intermediate states u of
  // T(u, (x,y)) conj(T(u, (x',y'))) with T(u, a) = <u, a_y a_x psi>, so the
  // matrix accumulates as rank-one updates from one pair vector per u.
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(m * m, m * m);
  Eigen::VectorXcd vec(m * m);
  std::vector<std::uint8_t> up(m);
  const std::int64_t u_end =
      b.n_max() < 2 ? 0 : b.sector_offset(b.n_max() - 2) + b.sector_dim(b.n_max() - 2);
  for (std::int64_t u = 0; u < u_end; ++u) {
    const std::uint8_t* occ = b.occ(u);
    bool any = false;
    for (int x = 0; x < m; ++x) {
      for (int y = 0; y < m; ++y) {
        for (int z = 0; z < m; ++z) up[z] = occ[z];
        up[x] += 1;
        up[y] += 1;
        const cplx a = psi.amp(b.index_of(up.data()));
        if (a == cplx(0.0, 0.0)) {
          vec(x * m + y) = cplx(0.0, 0.0);
          continue;
        }
        const double w = std::sqrt((occ[x] + 1.0 + (x == y ? 1.0 : 0.0)) * (occ[y] + 1.0));
        vec(x * m + y) = w * a;
        any = true;
      }
    }
    if (any) g.selfadjointView<Eigen::Lower>().rankUpdate(vec, 1.0);
  }
  DensityMatrix out;
  out.mat = Eigen::MatrixXcd(g.selfadjointView<Eigen::Lower>());
  out.mat /= double(n_particles) * (n_particles - 1.0);
  return out;
}

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("trace_distance: shape mismatch");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a - b, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

Eigen::MatrixXcd hartree_projector(const WaveFunction& phi) {
  return phi * phi.adjoint();
}

Eigen::MatrixXcd pair_projector(const WaveFunction& phi) {
  const int m = int(phi.size());
  Eigen::VectorXcd pair(m * m);
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) pair(x * m + y) = phi(x) * phi(y);
  return pair * pair.adjoint();
}

Eigen::MatrixXcd partial_trace_second(const Eigen::MatrixXcd& g2, int sites) {
  if (g2.rows() != sites * sites || g2.cols() != sites * sites)
    throw std::invalid_argument("partial_trace_second: shape mismatch");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(sites, sites);
  for (int x = 0; x < sites; ++x)
    for (int xp = 0; xp < sites; ++xp)
      for (int y = 0; y < sites; ++y) out(x, xp) += g2(x * sites + y, xp * sites + y);
  return out;
}

}  // namespace meanfield
