#include "meanfield/krylov.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "meanfield/errors.hpp"

namespace meanfield {

namespace {

// exp(-i h T) e_1 for the real symmetric tridiagonal T given by alpha, beta
Eigen::VectorXcd tridiag_exp_e1(const Eigen::VectorXd& alpha, const Eigen::VectorXd& beta,
                                int m, double h) {
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
  for (int j = 0; j < m; ++j) {
    T(j, j) = alpha(j);
    if (j + 1 < m) {
      T(j, j + 1) = beta(j);
      T(j + 1, j) = beta(j);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  if (es.info() != Eigen::Success) throw numeric_error("expm_apply: tridiagonal eigensolver failed");
  const Eigen::VectorXd q1 = es.eigenvectors().row(0);
  Eigen::VectorXcd w(m);
  for (int j = 0; j < m; ++j) {
    w(j) = 0.0;
    for (int k = 0; k < m; ++k)
      w(j) += es.eigenvectors()(j, k) * std::polar(1.0, -h * es.eigenvalues()(k)) * q1(k);
  }
  return w;
}

}  // namespace

Eigen::VectorXcd expm_apply(const LinearMap& H, double t, const Eigen::VectorXcd& v,
                            const KrylovOptions& opts) {
  const std::int64_t n = H.dim();
  if (v.size() != n) throw std::invalid_argument("expm_apply: dimension mismatch");
  const double vnorm = v.norm();
  if (t == 0.0 || vnorm == 0.0) return v;

  int m_cap = opts.max_dim;
  const double per_vec = 16.0 * double(n);
  const int m_mem = int(opts.memory_budget / per_vec) - 3;
  m_cap = std::min(m_cap, std::max(m_mem, 2));
  m_cap = std::max(m_cap, 2);

  Eigen::MatrixXcd basis(n, m_cap + 1);
  Eigen::VectorXd alpha(m_cap), beta(m_cap);
  Eigen::VectorXcd work(n);
  work.setZero();

  Eigen::VectorXcd psi = v;
  const double dir = (t > 0) ? 1.0 : -1.0;
  double remaining = std::abs(t);
  double h = remaining;
  int stuck = 0;

  while (remaining > 0.0) {
    const double beta0 = psi.norm();
    if (beta0 == 0.0) return psi;
    basis.col(0) = psi / beta0;

    int m = 0;
    bool happy = false;
    for (int j = 0; j < m_cap; ++j) {
      H.apply(basis.col(j), work);
      cplx a = basis.col(j).dot(work);
      alpha(j) = a.real();
      work -= alpha(j) * basis.col(j);
      if (j > 0) work -= beta(j - 1) * basis.col(j - 1);
      // full reorthogonalization, twice is enough
      for (int pass = 0; pass < 2; ++pass)
        for (int k = 0; k <= j; ++k) work -= basis.col(k).dot(work) * basis.col(k);
      const double b = work.norm();
      m = j + 1;
      if (b < 1e-14 * beta0) {
        happy = true;
        break;
      }
      beta(j) = b;
      if (j + 1 <= m_cap) basis.col(j + 1) = work / b;
    }

    while (true) {
      const double hs = std::min(h, remaining);
      const Eigen::VectorXcd w = tridiag_exp_e1(alpha, beta, m, dir * hs);
      // residual of the Krylov approximation through the first discarded basis vector
      const double err = happy ? 0.0 : beta0 * beta(m - 1) * std::abs(w(m - 1)) * std::min(hs, 1.0);
      if (happy || err <= opts.tol * beta0 || hs < 1e-15 * std::abs(t)) {
        psi = basis.leftCols(m) * (beta0 * w);
        remaining -= hs;
        if (!happy && err < 0.1 * opts.tol * beta0) h = hs * 1.5;
        stuck = 0;
        break;
      }
      h = hs * 0.5;
      if (++stuck > 60) throw numeric_error("expm_apply: step size underflow");
    }
  }
  return psi;
}

}  // namespace meanfield
