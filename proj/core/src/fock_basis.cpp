#include "meanfield/fock_basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "meanfield/errors.hpp"

namespace meanfield {

FockBasis::FockBasis(int sites, int n_max) : m_(sites), n_(n_max) {
  if (sites < 2 || sites > 64) throw std::invalid_argument("FockBasis: sites out of range");
  if (n_max < 0 || n_max > 200) throw std::invalid_argument("FockBasis: n_max out of range");

  const double est = dim_estimate(sites, n_max);
  if (est * sites > 1.5e9)
    throw infeasible_error("FockBasis: " + std::to_string(est) + " states will not fit in memory");

  // Pascal triangle up to n_max + sites rows; columns only up to m_ are ever queried
  binom_stride_ = m_ + 1;
  const int rows = n_ + m_ + 1;
  binom_.assign(static_cast<std::size_t>(rows) * binom_stride_, 0);
  for (int a = 0; a < rows; ++a) {
    binom_[a * binom_stride_] = 1;
    for (int b = 1; b <= std::min(a, m_); ++b) {
      const std::uint64_t up = binom_[(a - 1) * binom_stride_ + b];
      const std::uint64_t upleft = binom_[(a - 1) * binom_stride_ + (b - 1)];
      if (up > ~upleft) throw infeasible_error("FockBasis: dimension overflows 64 bits");
      binom_[a * binom_stride_ + b] = up + upleft;
    }
  }

  // enumerate sectors in ascending total occupation, lex order inside
  offsets_.assign(n_ + 2, 0);
  std::int64_t dim = 0;
  for (int n = 0; n <= n_; ++n) {
    offsets_[n] = dim;
    dim += static_cast<std::int64_t>(binom(n + m_ - 1, m_ - 1));
  }
  offsets_[n_ + 1] = dim;

  occ_.resize(static_cast<std::size_t>(dim) * m_);
  std::vector<std::uint8_t> cur(m_, 0);
  std::size_t pos = 0;
  auto emit = [&] {
    for (int j = 0; j < m_; ++j) occ_[pos++] = cur[j];
  };
  for (int n = 0; n <= n_; ++n) {
    // odometer over weak compositions of n into m_ parts, lex ascending
    auto fill = [&](auto&& self, int j, int rem) -> void {
      if (j == m_ - 1) {
        cur[j] = static_cast<std::uint8_t>(rem);
        emit();
        return;
      }
      for (int c = 0; c <= rem; ++c) {
        cur[j] = static_cast<std::uint8_t>(c);
        self(self, j + 1, rem - c);
      }
    };
    fill(fill, 0, n);
  }
}

std::uint64_t FockBasis::binom(int a, int b) const {
  if (b < 0 || b > a || a < 0) return 0;
  if (b > m_) throw std::invalid_argument("FockBasis::binom: column beyond table");
  return binom_[static_cast<std::size_t>(a) * binom_stride_ + b];
}

int FockBasis::sector_of(std::int64_t idx) const {
  int lo = 0, hi = n_;
  while (lo < hi) {
    const int mid = (lo + hi + 1) / 2;
    if (offsets_[mid] <= idx) lo = mid; else hi = mid - 1;
  }
  return lo;
}

std::int64_t FockBasis::index_of(const std::uint8_t* occ) const {
  int total = 0;
  for (int j = 0; j < m_; ++j) total += occ[j];
  if (total > n_) throw std::invalid_argument("FockBasis::index_of: total occupation exceeds n_max");

  std::int64_t rank = 0;
  int rem = total;
  for (int j = 0; j < m_ - 1; ++j) {
    const int p = m_ - 1 - j;
    // vectors whose site-j count is below occ[j]: hockey-stick partial sum
    rank += static_cast<std::int64_t>(binom(rem + p, p) - binom(rem - occ[j] + p, p));
    rem -= occ[j];
  }
  return offsets_[total] + rank;
}

std::uint64_t FockBasis::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](std::uint64_t v) {
    h ^= v;
    h *= 1099511628211ull;
  };
  mix(static_cast<std::uint64_t>(m_));
  mix(static_cast<std::uint64_t>(n_));
  return h;
}

double FockBasis::dim_estimate(int sites, int n_max) {
  // C(n_max + sites, sites) via lgamma
  const double a = n_max + sites;
  return std::exp(std::lgamma(a + 1.0) - std::lgamma(sites + 1.0) - std::lgamma(a - sites + 1.0));
}

std::shared_ptr<const FockBasis> make_basis(int sites, int n_max) {
  return std::make_shared<const FockBasis>(sites, n_max);
}

int truncation_for_product(int n_particles) { return n_particles; }

int truncation_for_coherent(int n_particles) {
  return n_particles + static_cast<int>(std::ceil(6.0 * std::sqrt(double(n_particles)))) + 6;
}

}  // namespace meanfield
