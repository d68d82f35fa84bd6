#include "meanfield/lattice.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "meanfield/errors.hpp"

namespace meanfield {

PairPotential PairPotential::from_displacements(const Eigen::VectorXd& v) {
  const int m = static_cast<int>(v.size());
  if (m < 2) throw config_error("pair potential needs at least 2 displacement entries");
  for (int d = 1; d < m; ++d) {
    if (v(d) != v((m - d) % m)) {
      throw config_error("pair potential is not even: V(" + std::to_string(d) + ") = " +
                         std::to_string(v(d)) + " but V(" + std::to_string(m - d) + ") = " +
                         std::to_string(v(m - d)));
    }
  }
  return PairPotential(v);
}

PairPotential PairPotential::zero(int sites) {
  return PairPotential(Eigen::VectorXd::Zero(sites));
}

double PairPotential::operator()(int d) const {
  const int m = sites();
  int r = d % m;
  if (r < 0) r += m;
  return v_(r);
}

Eigen::MatrixXd PairPotential::displacement_matrix() const {
  const int m = sites();
  Eigen::MatrixXd w(m, m);
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) w(x, y) = (*this)(x - y);
  return w;
}

WaveFunction apply_laplacian(const WaveFunction& f) {
  const int m = static_cast<int>(f.size());
  if (m < 2) throw std::invalid_argument("apply_laplacian: need at least 2 sites");
  WaveFunction out(m);
  for (int x = 0; x < m; ++x) {
    const int xp = (x + 1) % m;
    const int xm = (x + m - 1) % m;
    out(x) = f(xp) - 2.0 * f(x) + f(xm);
  }
  return out;
}

Eigen::MatrixXd kinetic_matrix(int sites) {
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(sites, sites);
  for (int x = 0; x < sites; ++x) {
    k(x, x) += 2.0;
    k(x, (x + 1) % sites) -= 1.0;
    k(x, (x + sites - 1) % sites) -= 1.0;
  }
  return k;
}

Eigen::VectorXd kinetic_eigenvalues(int sites) {
  Eigen::VectorXd e(sites);
  for (int k = 0; k < sites; ++k)
    e(k) = 2.0 * (1.0 - std::cos(2.0 * std::numbers::pi * k / sites));
  return e;
}

Eigen::MatrixXcd dft_matrix(int sites) {
  Eigen::MatrixXcd f(sites, sites);
  const double s = 1.0 / std::sqrt(static_cast<double>(sites));
  for (int k = 0; k < sites; ++k)
    for (int x = 0; x < sites; ++x) {
      const double ph = -2.0 * std::numbers::pi * k * x / sites;
      f(k, x) = s * cplx(std::cos(ph), std::sin(ph));
    }
  return f;
}

Eigen::VectorXd convolve(const PairPotential& v, const Eigen::VectorXd& rho) {
  const int m = static_cast<int>(rho.size());
  if (v.sites() != m) throw std::invalid_argument("convolve: potential and density size mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(m);
  // displacement-major order: out(x) accumulates v(0) rho(x), v(1) rho(x-1), ...
  // so translating rho permutes identical sums term for term
  for (int d = 0; d < m; ++d) {
    const double vd = v(d);
    for (int x = 0; x < m; ++x) out(x) += vd * rho((x - d + m) % m);
  }
  return out;
}

cplx inner_product(const WaveFunction& f, const WaveFunction& g) {
  if (f.size() != g.size()) throw std::invalid_argument("inner_product: size mismatch");
  return f.dot(g);
}

WaveFunction translate(const WaveFunction& f, int a) {
  const int m = static_cast<int>(f.size());
  WaveFunction out(m);
  for (int x = 0; x < m; ++x) out(x) = f(((x - a) % m + m) % m);
  return out;
}

}  // namespace meanfield
