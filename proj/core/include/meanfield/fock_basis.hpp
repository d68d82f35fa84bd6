#pragma once

#include <cstdint>
#include <memory>
#include <vector>

namespace meanfield {

// Occupation-number basis of the bosonic Fock space over M sites, truncated
// at total occupation N_max.  States are grouped by total occupation, so each
// fixed-particle-number sector is one contiguous index block; inside a sector
// the occupation vectors (n_0, ..., n_{M-1}) run in ascending lexicographic
// order.  Ranking and unranking are closed-form, no hash map, which keeps
// matrix-free operator application cheap on multi-million-state bases.
class FockBasis {
 public:
  FockBasis(int sites, int n_max);

  int sites() const { return m_; }
  int n_max() const { return n_; }
  std::int64_t dim() const { return static_cast<std::int64_t>(occ_.size()) / m_; }

  std::int64_t sector_offset(int n) const { return offsets_[n]; }
  std::int64_t sector_dim(int n) const { return offsets_[n + 1] - offsets_[n]; }
  int sector_of(std::int64_t idx) const;

  // pointer to the M occupation numbers of basis state idx
  const std::uint8_t* occ(std::int64_t idx) const { return occ_.data() + idx * m_; }

  // exact index of an occupation vector; total must be <= n_max
  std::int64_t index_of(const std::uint8_t* occ) const;

  // binomial C(a, b) from the cached table, a <= n_max + sites, b <= sites
  std::uint64_t binom(int a, int b) const;

  // content hash of (sites, n_max); identifies the basis in snapshots
  std::uint64_t hash() const;

  // dimension without building anything, as a double (may be huge)
  static double dim_estimate(int sites, int n_max);

 private:
  int m_, n_;
  std::vector<std::uint8_t> occ_;         // dim * M occupation numbers
  std::vector<std::int64_t> offsets_;     // n_max + 2 sector offsets
  std::vector<std::uint64_t> binom_;      // Pascal triangle, columns 0..sites
  int binom_stride_;
};

std::shared_ptr<const FockBasis> make_basis(int sites, int n_max);

// N_max policy for experiments: product data stays in one sector, coherent
// data needs Poisson headroom.
int truncation_for_product(int n_particles);
int truncation_for_coherent(int n_particles);

}  // namespace meanfield
