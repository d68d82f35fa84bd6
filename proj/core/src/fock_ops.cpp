#include "meanfield/fock_ops.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <vector>

#include "meanfield/bogoliubov.hpp"
#include "meanfield/errors.hpp"
#include "meanfield/threads.hpp"

namespace meanfield {

namespace {

constexpr double kTopSectorTol = 1e-10;  // norm allowed in the cutoff sector
constexpr std::int64_t kAssembleLimit = 200000;

void require_basis(const FockState& psi) {
  if (!psi.basis) throw std::invalid_argument("fock op: state has no basis");
}

void require_headroom(const FockState& psi, const char* what) {
  const auto& b = *psi.basis;
  const double w = psi.amp.segment(b.sector_offset(b.n_max()), b.sector_dim(b.n_max())).norm();
  if (w > kTopSectorTol)
    throw infeasible_error(std::string(what) +
                           ": top sector already carries amplitude; increase N_max");
}

std::uint64_t bytes_hash(const void* p, std::size_t n, std::uint64_t h) {
  const auto* c = static_cast<const unsigned char*>(p);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= c[i];
    h *= 1099511628211ull;
  }
  return h;
}

// push-style assembly helper: enumerate matrix columns of an operator by
// mutating a scratch occupation vector
struct Assembler {
  const FockBasis& b;
  std::vector<Eigen::Triplet<cplx>> trip;
  std::uint8_t buf[64];

  explicit Assembler(const FockBasis& basis) : b(basis) {}

  void load(std::int64_t col) { std::memcpy(buf, b.occ(col), b.sites()); }

  void add(std::int64_t col, double coeff_abs, cplx c) {
    if (c == cplx(0.0)) return;
    trip.emplace_back(static_cast<int>(b.index_of(buf)), static_cast<int>(col), coeff_abs * c);
  }
};

Eigen::SparseMatrix<cplx> from_triplets(const FockBasis& b,
                                        std::vector<Eigen::Triplet<cplx>>& trip) {
  Eigen::SparseMatrix<cplx> m(b.dim(), b.dim());
  m.setFromTriplets(trip.begin(), trip.end());
  m.makeCompressed();
  return m;
}

double interaction_diag(const std::uint8_t* n, int m, const Eigen::VectorXd& v, double inv2n) {
  double acc = 0.0;
  int tot = 0;
  for (int x = 0; x < m; ++x) {
    tot += n[x];
    if (n[x] == 0) continue;
    for (int y = 0; y < m; ++y) {
      if (n[y] == 0) continue;
      int d = x - y;
      if (d < 0) d += m;
      acc += v(d) * double(n[x]) * double(n[y]);
    }
  }
  return inv2n * (acc - v(0) * tot);
}

}  // namespace

FockState SecondQuantizedOperator::apply(const FockState& psi) const {
  require_basis(psi);
  if (psi.basis->hash() != basis->hash())
    throw std::invalid_argument("SecondQuantizedOperator::apply: basis mismatch");
  FockState out(basis);
  out.amp.noalias() = mat * psi.amp;
  return out;
}

FockState apply_create(const WaveFunction& f, const FockState& psi) {
  require_basis(psi);
  const auto& b = *psi.basis;
  const int m = b.sites();
  if (f.size() != m) throw std::invalid_argument("apply_create: wavefunction size mismatch");
  if (f.norm() > 0.0) require_headroom(psi, "apply_create");

  FockState out(psi.basis);
  parallel_for(b.dim(), [&](std::int64_t lo, std::int64_t hi) {
    std::uint8_t buf[64];
    for (std::int64_t i = lo; i < hi; ++i) {
      const std::uint8_t* v = b.occ(i);
      cplx acc = 0.0;
      for (int x = 0; x < m; ++x) {
        if (v[x] == 0 || f(x) == cplx(0.0)) continue;
        std::memcpy(buf, v, m);
        buf[x] -= 1;
        acc += f(x) * std::sqrt(double(v[x])) * psi.amp(b.index_of(buf));
      }
      out.amp(i) = acc;
    }
  });
  return out;
}

FockState apply_annihilate(const WaveFunction& f, const FockState& psi) {
  require_basis(psi);
  const auto& b = *psi.basis;
  const int m = b.sites();
  if (f.size() != m) throw std::invalid_argument("apply_annihilate: wavefunction size mismatch");

  FockState out(psi.basis);
  const std::int64_t below = b.sector_offset(b.n_max());
  parallel_for(below, [&](std::int64_t lo, std::int64_t hi) {
    std::uint8_t buf[64];
    for (std::int64_t i = lo; i < hi; ++i) {
      const std::uint8_t* v = b.occ(i);
      cplx acc = 0.0;
      for (int x = 0; x < m; ++x) {
        if (f(x) == cplx(0.0)) continue;
        std::memcpy(buf, v, m);
        buf[x] += 1;
        acc += std::conj(f(x)) * std::sqrt(double(v[x]) + 1.0) * psi.amp(b.index_of(buf));
      }
      out.amp(i) = acc;
    }
  });
  return out;
}

FockState apply_field_pair(const WaveFunction& f, const WaveFunction& g, const FockState& psi) {
  FockState out = apply_create(f, psi);
  if (g.norm() > 0.0) {
    const WaveFunction gc = g.conjugate();
    out.amp += apply_annihilate(gc, psi).amp;
  }
  return out;
}

FockState apply_dgamma(const Eigen::MatrixXcd& O, const FockState& psi) {
  require_basis(psi);
  const auto& b = *psi.basis;
  const int m = b.sites();
  if (O.rows() != m || O.cols() != m) throw std::invalid_argument("apply_dgamma: size mismatch");

  FockState out(psi.basis);
  parallel_for(b.dim(), [&](std::int64_t lo, std::int64_t hi) {
    std::uint8_t buf[64];
    for (std::int64_t i = lo; i < hi; ++i) {
      const std::uint8_t* v = b.occ(i);
      cplx diag = 0.0;
      for (int x = 0; x < m; ++x)
        if (v[x]) diag += O(x, x) * double(v[x]);
      cplx acc = diag * psi.amp(i);
      for (int u = 0; u < m; ++u) {
        if (v[u] == 0) continue;
        for (int w = 0; w < m; ++w) {
          if (w == u || O(u, w) == cplx(0.0)) continue;
          std::memcpy(buf, v, m);
          buf[u] -= 1;
          buf[w] += 1;
          acc += O(u, w) * std::sqrt(double(v[u]) * (double(v[w]) + 1.0)) *
                 psi.amp(b.index_of(buf));
        }
      }
      out.amp(i) = acc;
    }
  });
  return out;
}

FockState translate_state(const FockState& psi, int a) {
  require_basis(psi);
  const auto& b = *psi.basis;
  const int m = b.sites();
  a = ((a % m) + m) % m;
  if (a == 0) return psi;
  FockState out(psi.basis);
  parallel_for(b.dim(), [&](std::int64_t lo, std::int64_t hi) {
    std::uint8_t buf[64];
    for (std::int64_t i = lo; i < hi; ++i) {
      const std::uint8_t* v = b.occ(i);
      for (int y = 0; y < m; ++y) buf[y] = v[(y + a) % m];
      out.amp(i) = psi.amp(b.index_of(buf));
    }
  });
  return out;
}

FockState product_state(const WaveFunction& phi, int n_particles,
                        std::shared_ptr<const FockBasis> basis) {
  if (!basis) throw std::invalid_argument("product_state: null basis");
  if (phi.size() != basis->sites()) throw std::invalid_argument("product_state: size mismatch");
  if (n_particles < 0 || n_particles > basis->n_max())
    throw std::invalid_argument("product_state: N exceeds N_max");
  if (std::abs(phi.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("product_state: wavefunction not normalized");

  FockState psi = vacuum_state(std::move(basis));
  for (int k = 0; k < n_particles; ++k) {
    psi = apply_create(phi, psi);
    psi.normalize();
  }
  return psi;
}

SecondQuantizedOperator number_op(std::shared_ptr<const FockBasis> basis) {
  const auto& b = *basis;
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(b.dim());
  for (std::int64_t i = 0; i < b.dim(); ++i) {
    const int n = b.sector_of(i);
    if (n) trip.emplace_back(int(i), int(i), cplx(double(n), 0.0));
  }
  SecondQuantizedOperator op;
  op.basis = std::move(basis);
  op.mat = from_triplets(b, trip);
  op.hermitian = true;
  op.number_conserving = true;
  return op;
}

SecondQuantizedOperator dgamma_op(const Eigen::MatrixXcd& O,
                                  std::shared_ptr<const FockBasis> basis) {
  const auto& b = *basis;
  const int m = b.sites();
  if (O.rows() != m || O.cols() != m) throw std::invalid_argument("dgamma_op: size mismatch");

  Assembler as(b);
  as.trip.reserve(std::size_t(b.dim()) * (m * m / 2 + 1));
  for (std::int64_t j = 0; j < b.dim(); ++j) {
    const std::uint8_t* n = b.occ(j);
    cplx diag = 0.0;
    for (int x = 0; x < m; ++x)
      if (n[x]) diag += O(x, x) * double(n[x]);
    if (diag != cplx(0.0)) as.trip.emplace_back(int(j), int(j), diag);
    for (int u = 0; u < m; ++u)
      for (int w = 0; w < m; ++w) {
        if (u == w || n[w] == 0 || O(u, w) == cplx(0.0)) continue;
        as.load(j);
        as.buf[w] -= 1;
        as.buf[u] += 1;
        as.add(j, std::sqrt(double(n[w]) * (double(n[u]) + 1.0)), O(u, w));
      }
  }
  SecondQuantizedOperator op;
  op.basis = std::move(basis);
  op.mat = from_triplets(b, as.trip);
  op.hermitian = (O - O.adjoint()).cwiseAbs().maxCoeff() <= 1e-12;
  op.number_conserving = true;
  return op;
}

std::shared_ptr<const SecondQuantizedOperator> build_hamiltonian(
    const PairPotential& V, int n_particles, std::shared_ptr<const FockBasis> basis) {
  if (n_particles < 1) throw std::invalid_argument("build_hamiltonian: N must be positive");
  const auto& b = *basis;
  if (V.values().size() != b.sites())
    throw std::invalid_argument("build_hamiltonian: potential size mismatch");

  static std::mutex mu;
  static std::map<std::array<std::uint64_t, 2>, std::shared_ptr<const SecondQuantizedOperator>>
      cache;
  std::uint64_t vh = bytes_hash(V.values().data(), sizeof(double) * b.sites(),
                                1469598103934665603ull);
  vh = bytes_hash(&n_particles, sizeof(n_particles), vh);
  const std::array<std::uint64_t, 2> key{b.hash(), vh};
  {
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }

  const int m = b.sites();
  const double inv2n = 0.5 / double(n_particles);
  Assembler as(b);
  as.trip.reserve(std::size_t(b.dim()) * (2 * m + 1));
  for (std::int64_t j = 0; j < b.dim(); ++j) {
    const std::uint8_t* n = b.occ(j);
    int tot = 0;
    for (int x = 0; x < m; ++x) tot += n[x];
    const double diag = 2.0 * tot + interaction_diag(n, m, V.values(), inv2n);
    if (diag != 0.0) as.trip.emplace_back(int(j), int(j), cplx(diag, 0.0));
    for (int x = 0; x < m; ++x) {
      const int u = (x + 1) % m;
      if (n[x]) {  // a+_u a_x
        as.load(j);
        as.buf[x] -= 1;
        as.buf[u] += 1;
        as.add(j, std::sqrt(double(n[x]) * (double(n[u]) + 1.0)), cplx(-1.0, 0.0));
      }
      if (n[u]) {  // a+_x a_u
        as.load(j);
        as.buf[u] -= 1;
        as.buf[x] += 1;
        as.add(j, std::sqrt(double(n[u]) * (double(n[x]) + 1.0)), cplx(-1.0, 0.0));
      }
    }
  }
  auto op = std::make_shared<SecondQuantizedOperator>();
  op->basis = std::move(basis);
  op->mat = from_triplets(b, as.trip);
  op->hermitian = true;
  op->number_conserving = true;
  std::lock_guard<std::mutex> lk(mu);
  cache[key] = op;
  return op;
}

namespace {

// shared by build_LN_generator and build_Linfty_generator: quadratic lines
// dGamma(D_t) plus the pair creation/annihilation terms
void push_quadratic(Assembler& as, const FockBasis& b, const Eigen::MatrixXcd& D,
                    const WaveFunction& phi, const PairPotential& V) {
  const int m = b.sites();
  for (std::int64_t j = 0; j < b.dim(); ++j) {
    const std::uint8_t* n = b.occ(j);
    int tot = 0;
    for (int x = 0; x < m; ++x) tot += n[x];

    cplx diag = 0.0;
    for (int x = 0; x < m; ++x)
      if (n[x]) diag += D(x, x) * double(n[x]);
    if (diag != cplx(0.0)) as.trip.emplace_back(int(j), int(j), diag);

    for (int u = 0; u < m; ++u)
      for (int w = 0; w < m; ++w) {
        if (u == w || n[w] == 0 || D(u, w) == cplx(0.0)) continue;
        as.load(j);
        as.buf[w] -= 1;
        as.buf[u] += 1;
        as.add(j, std::sqrt(double(n[w]) * (double(n[u]) + 1.0)), D(u, w));
      }

    for (int x = 0; x < m; ++x)
      for (int y = 0; y < m; ++y) {
        const double vxy = V(x - y);
        if (vxy == 0.0) continue;
        const cplx cpair = 0.5 * vxy * phi(x) * phi(y);
        if (tot + 2 <= b.n_max() && cpair != cplx(0.0)) {
          as.load(j);
          const double c1 = double(as.buf[y]) + 1.0;
          as.buf[y] += 1;
          const double c2 = double(as.buf[x]) + 1.0;
          as.buf[x] += 1;
          as.add(j, std::sqrt(c1 * c2), cpair);
        }
        if (n[y] >= 1) {
          as.load(j);
          const double c1 = double(as.buf[y]);
          as.buf[y] -= 1;
          const double c2 = double(as.buf[x]);
          if (c2 >= 1.0) {
            as.buf[x] -= 1;
            as.add(j, std::sqrt(c1 * c2), std::conj(cpair));
          }
        }
      }
  }
}

}  // namespace

SecondQuantizedOperator build_LN_generator(const WaveFunction& phi_t, const PairPotential& V,
                                           int n_particles,
                                           std::shared_ptr<const FockBasis> basis) {
  if (n_particles < 1) throw std::invalid_argument("build_LN_generator: N must be positive");
  const auto& b = *basis;
  const int m = b.sites();
  if (phi_t.size() != m) throw std::invalid_argument("build_LN_generator: size mismatch");

  const Eigen::MatrixXcd D = build_Dt(phi_t, V);
  const double isq = 1.0 / std::sqrt(double(n_particles));
  const double inv2n = 0.5 / double(n_particles);

  Assembler as(b);
  as.trip.reserve(std::size_t(b.dim()) * (5 * m * m / 2 + 1));
  push_quadratic(as, b, D, phi_t, V);

  for (std::int64_t j = 0; j < b.dim(); ++j) {
    const std::uint8_t* n = b.occ(j);
    int tot = 0;
    for (int x = 0; x < m; ++x) tot += n[x];

    const double quart = interaction_diag(n, m, V.values(), inv2n);
    if (quart != 0.0) as.trip.emplace_back(int(j), int(j), cplx(quart, 0.0));

    for (int x = 0; x < m; ++x) {
      if (n[x] == 0) continue;
      for (int y = 0; y < m; ++y) {
        const double vxy = V(x - y);
        if (vxy == 0.0) continue;
        // a+_x a_y a_x, lands one sector down
        {
          const double ny = (x == y) ? double(n[x]) - 1.0 : double(n[y]);
          if (ny >= 1.0) {
            const double nx2 = (x == y) ? double(n[x]) - 1.0 : double(n[x]);
            as.load(j);
            as.buf[y] -= 1;
            as.add(j, std::sqrt(double(n[x]) * ny * nx2), -isq * vxy * std::conj(phi_t(y)));
          }
        }
        // a+_x a+_y a_x, lands one sector up
        if (tot + 1 <= b.n_max()) {
          const double ny1 = (x == y) ? double(n[x]) : double(n[y]) + 1.0;
          const double nx3 = (x == y) ? double(n[x]) + 1.0 : double(n[x]);
          as.load(j);
          as.buf[y] += 1;
          as.add(j, std::sqrt(double(n[x]) * ny1 * nx3), -isq * vxy * phi_t(y));
        }
      }
    }
  }

  SecondQuantizedOperator op;
  op.basis = std::move(basis);
  op.mat = from_triplets(b, as.trip);
  op.hermitian = true;
  op.number_conserving = false;
  return op;
}

SecondQuantizedOperator build_Linfty_generator(const WaveFunction& phi_t, const PairPotential& V,
                                               std::shared_ptr<const FockBasis> basis) {
  const auto& b = *basis;
  if (phi_t.size() != b.sites())
    throw std::invalid_argument("build_Linfty_generator: size mismatch");
  const Eigen::MatrixXcd D = build_Dt(phi_t, V);

  Assembler as(b);
  as.trip.reserve(std::size_t(b.dim()) * (2 * b.sites() * b.sites() + 1));
  push_quadratic(as, b, D, phi_t, V);

  SecondQuantizedOperator op;
  op.basis = std::move(basis);
  op.mat = from_triplets(b, as.trip);
  op.hermitian = true;
  op.number_conserving = false;
  return op;
}

namespace {

struct SparseMap final : LinearMap {
  const Eigen::SparseMatrix<cplx>& a;
  explicit SparseMap(const Eigen::SparseMatrix<cplx>& m) : a(m) {}
  std::int64_t dim() const override { return a.rows(); }
  void apply(Eigen::Ref<const Eigen::VectorXcd> in,
             Eigen::Ref<Eigen::VectorXcd> out) const override {
    out.noalias() = a * in;
  }
};

}  // namespace

FockState evolve(const SecondQuantizedOperator& H, const FockState& psi, double T,
                 const KrylovOptions& opts) {
  require_basis(psi);
  if (!H.hermitian) throw std::invalid_argument("evolve: operator not flagged Hermitian");
  if (H.basis->hash() != psi.basis->hash())
    throw std::invalid_argument("evolve: basis mismatch");
  FockState out(psi.basis);
  out.amp = expm_apply(SparseMap(H.mat), T, psi.amp, opts);
  return out;
}

FockState evolve_generator(const std::function<SecondQuantizedOperator(double)>& gen_at,
                           const FockState& psi, double s, double t, double dt,
                           const KrylovOptions& opts) {
  require_basis(psi);
  if (dt <= 0) throw std::invalid_argument("evolve_generator: dt must be positive");
  if (t == s) return psi;
  const int nsteps = std::max<int>(1, int(std::ceil(std::abs(t - s) / dt - 1e-12)));
  const double h = (t - s) / nsteps;

  FockState out = psi;
  for (int k = 0; k < nsteps; ++k) {
    const double mid = s + (k + 0.5) * h;
    const SecondQuantizedOperator gen = gen_at(mid);
    if (!gen.hermitian)
      throw std::invalid_argument("evolve_generator: generator not flagged Hermitian");
    out.amp = expm_apply(SparseMap(gen.mat), h, out.amp, opts);
  }
  return out;
}

FockState evolve_hamiltonian(const PairPotential& V, int n_particles, const FockState& psi,
                             double T, const KrylovOptions& opts) {
  require_basis(psi);
  if (psi.basis->dim() <= kAssembleLimit) {
    auto H = build_hamiltonian(V, n_particles, psi.basis);
    return evolve(*H, psi, T, opts);
  }
  HamiltonianMap map(V, n_particles, psi.basis);
  FockState out(psi.basis);
  out.amp = expm_apply(map, T, psi.amp, opts);
  return out;
}

HamiltonianMap::HamiltonianMap(const PairPotential& V, int n_particles,
                               std::shared_ptr<const FockBasis> basis)
    : basis_(std::move(basis)), v_(V.values()), inv2n_(0.5 / double(n_particles)) {
  if (n_particles < 1) throw std::invalid_argument("HamiltonianMap: N must be positive");
  if (v_.size() != basis_->sites()) throw std::invalid_argument("HamiltonianMap: size mismatch");
  sqrt_.resize(basis_->n_max() + 2);
  for (int k = 0; k < sqrt_.size(); ++k) sqrt_(k) = std::sqrt(double(k));
}

void HamiltonianMap::apply(Eigen::Ref<const Eigen::VectorXcd> in,
                           Eigen::Ref<Eigen::VectorXcd> out) const {
  const auto& b = *basis_;
  const int m = b.sites();
  // at M = 2 the two sites are adjacent twice around the ring
  const double hopw = (m == 2) ? 2.0 : 1.0;
  parallel_for(b.dim(), [&](std::int64_t lo, std::int64_t hi) {
    int rem[64];
    std::uint8_t buf[64];
    for (std::int64_t i = lo; i < hi; ++i) {
      const std::uint8_t* v = b.occ(i);
      int tot = 0;
      for (int x = 0; x < m; ++x) tot += v[x];
      rem[0] = tot;
      for (int x = 0; x < m - 1; ++x) rem[x + 1] = rem[x] - v[x];

      cplx acc = (2.0 * tot + interaction_diag(v, m, v_, inv2n_)) * in(i);

      // nearest-neighbor hops; adjacent index pairs use rank deltas,
      // the wrap edge recomputes the full rank
      for (int a = 0; a + 1 < m; ++a) {
        const int p = m - 1 - a;
        const int q = p - 1;
        if (v[a]) {  // pull for a+_a a_{a+1}: neighbor has one moved a -> a+1
          const std::int64_t d1 = std::int64_t(b.binom(rem[a] - v[a] + p, p)) -
                                  std::int64_t(b.binom(rem[a] - v[a] + 1 + p, p));
          const std::int64_t d2 = std::int64_t(b.binom(rem[a + 1] + 1 + q, q)) -
                                  std::int64_t(b.binom(rem[a + 1] + q, q));
          acc -= hopw * sqrt_(v[a]) * sqrt_(v[a + 1] + 1) * in(i + d1 + d2);
        }
        if (v[a + 1]) {  // pull for a+_{a+1} a_a: one moved a+1 -> a
          const std::int64_t d1 = std::int64_t(b.binom(rem[a] - v[a] + p, p)) -
                                  std::int64_t(b.binom(rem[a] - v[a] - 1 + p, p));
          const std::int64_t d2 = std::int64_t(b.binom(rem[a + 1] - 1 + q, q)) -
                                  std::int64_t(b.binom(rem[a + 1] + q, q));
          acc -= hopw * sqrt_(v[a + 1]) * sqrt_(v[a] + 1) * in(i + d1 + d2);
        }
      }
      if (m > 2) {
        const int last = m - 1;
        if (v[0]) {
          std::memcpy(buf, v, m);
          buf[0] -= 1;
          buf[last] += 1;
          acc -= sqrt_(v[0]) * sqrt_(v[last] + 1) * in(b.index_of(buf));
        }
        if (v[last]) {
          std::memcpy(buf, v, m);
          buf[last] -= 1;
          buf[0] += 1;
          acc -= sqrt_(v[last]) * sqrt_(v[0] + 1) * in(b.index_of(buf));
        }
      }
      out(i) = acc;
    }
  });
}

WeylGeneratorMap::WeylGeneratorMap(const WaveFunction& f, std::shared_ptr<const FockBasis> basis)
    : basis_(std::move(basis)), f_(f) {
  if (f_.size() != basis_->sites()) throw std::invalid_argument("WeylGeneratorMap: size mismatch");
  sqrt_.resize(basis_->n_max() + 2);
  for (int k = 0; k < sqrt_.size(); ++k) sqrt_(k) = std::sqrt(double(k));
}

void WeylGeneratorMap::apply(Eigen::Ref<const Eigen::VectorXcd> in,
                             Eigen::Ref<Eigen::VectorXcd> out) const {
  const auto& b = *basis_;
  const int m = b.sites();
  const cplx iu(0.0, 1.0);
  const std::int64_t below = b.sector_offset(b.n_max());
  parallel_for(b.dim(), [&](std::int64_t lo, std::int64_t hi) {
    std::uint8_t buf[64];
    for (std::int64_t i = lo; i < hi; ++i) {
      const std::uint8_t* v = b.occ(i);
      cplx acc = 0.0;
      for (int x = 0; x < m; ++x) {
        if (f_(x) == cplx(0.0)) continue;
        if (v[x]) {
          std::memcpy(buf, v, m);
          buf[x] -= 1;
          acc += f_(x) * sqrt_(v[x]) * in(b.index_of(buf));
        }
        if (i < below) {
          std::memcpy(buf, v, m);
          buf[x] += 1;
          acc -= std::conj(f_(x)) * sqrt_(v[x] + 1) * in(b.index_of(buf));
        }
      }
      out(i) = iu * acc;
    }
  });
}

}  // namespace meanfield
