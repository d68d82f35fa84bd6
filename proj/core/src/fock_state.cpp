#include "meanfield/fock_state.hpp"

#include <stdexcept>

#include "meanfield/errors.hpp"

namespace meanfield {

namespace {
void require_same_basis(const FockState& f, const FockState& g) {
  if (!f.basis || !g.basis || f.basis->hash() != g.basis->hash())
    throw std::invalid_argument("FockState: basis mismatch");
}
}  // namespace

void FockState::normalize() {
  const double n = amp.norm();
  if (n == 0.0) throw numeric_error("FockState::normalize: zero vector");
  amp /= n;
}

FockState vacuum_state(std::shared_ptr<const FockBasis> basis) {
  FockState psi(std::move(basis));
  psi.amp(0) = 1.0;
  return psi;
}

cplx inner_product(const FockState& f, const FockState& g) {
  require_same_basis(f, g);
  return f.amp.dot(g.amp);
}

Eigen::VectorXd sector_weights(const FockState& psi) {
  const auto& b = *psi.basis;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(b.n_max() + 1);
  for (int n = 0; n <= b.n_max(); ++n)
    w(n) = psi.amp.segment(b.sector_offset(n), b.sector_dim(n)).squaredNorm();
  return w;
}

int top_occupied_sector(const FockState& psi, double tol) {
  const Eigen::VectorXd w = sector_weights(psi);
  for (int n = psi.basis->n_max(); n >= 0; --n)
    if (w(n) > tol) return n;
  return -1;
}

FockState project_sector(const FockState& psi, int n) {
  const auto& b = *psi.basis;
  if (n < 0 || n > b.n_max()) throw std::invalid_argument("project_sector: no such sector");
  FockState out(psi.basis);
  out.amp.segment(b.sector_offset(n), b.sector_dim(n)) =
      psi.amp.segment(b.sector_offset(n), b.sector_dim(n));
  return out;
}

double expected_number(const FockState& psi) {
  const Eigen::VectorXd w = sector_weights(psi);
  double num = 0.0, den = 0.0;
  for (int n = 0; n < w.size(); ++n) {
    num += n * w(n);
    den += w(n);
  }
  if (den == 0.0) throw numeric_error("expected_number: zero vector");
  return num / den;
}

Eigen::VectorXd occupation_profile(const FockState& psi) {
  const auto& b = *psi.basis;
  const int m = b.sites();
  Eigen::VectorXd prof = Eigen::VectorXd::Zero(m);
  double den = 0.0;
  for (std::int64_t i = 0; i < b.dim(); ++i) {
    const double w = std::norm(psi.amp(i));
    if (w == 0.0) continue;
    den += w;
    const std::uint8_t* occ = b.occ(i);
    for (int x = 0; x < m; ++x) prof(x) += w * occ[x];
  }
  if (den == 0.0) throw numeric_error("occupation_profile: zero vector");
  return prof / den;
}

}  // namespace meanfield
