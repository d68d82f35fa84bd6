#include <benchmark/benchmark.h>

#include <numbers>

#include "meanfield/fock_ops.hpp"
#include "meanfield/fock_state.hpp"
#include "meanfield/reduced.hpp"

using namespace meanfield;

namespace {

WaveFunction ripple(int m) {
  WaveFunction phi(m);
  for (int x = 0; x < m; ++x)
    phi(x) = std::polar(1.0 + 0.4 * std::sin(2.0 * std::numbers::pi * x / m),
                        0.5 * std::cos(2.0 * std::numbers::pi * x / m));
  phi /= phi.norm();
  return phi;
}

PairPotential screened(int m) {
  Eigen::VectorXd raw(m);
  for (int d = 0; d < m; ++d) {
    const int dist = std::min(d, m - d);
    raw(d) = 0.5 / (1.0 + dist * dist);
  }
  return PairPotential::from_displacements(raw);
}

}  // namespace

// one matrix-free H_N application; range is the particle number at M = 6
static void BM_hamiltonian_apply(benchmark::State& state) {
  const int m = 6;
  const int n = static_cast<int>(state.range(0));
  auto basis = make_basis(m, n);
  const HamiltonianMap h(screened(m), n, basis);
  const FockState psi = product_state(ripple(m), n, basis);
  Eigen::VectorXcd out(basis->dim());
  for (auto _ : state) {
    h.apply(psi.amp, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * basis->dim());
}
BENCHMARK(BM_hamiltonian_apply)->Arg(4)->Arg(8)->Arg(12)->Arg(16);

// short Krylov propagation of a product state
static void BM_evolve_hamiltonian(benchmark::State& state) {
  const int m = 6;
  const int n = static_cast<int>(state.range(0));
  auto basis = make_basis(m, n);
  const PairPotential v = screened(m);
  const FockState psi = product_state(ripple(m), n, basis);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evolve_hamiltonian(v, n, psi, 0.05));
  }
}
BENCHMARK(BM_evolve_hamiltonian)->Arg(4)->Arg(8)->Arg(12);

// streaming one-particle reduction of an evolved state
static void BM_gamma1(benchmark::State& state) {
  const int m = 6;
  const int n = static_cast<int>(state.range(0));
  auto basis = make_basis(m, n);
  const FockState psi = evolve_hamiltonian(screened(m), n, product_state(ripple(m), n, basis), 0.2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gamma1(psi, n));
  }
  state.SetItemsProcessed(state.iterations() * basis->dim());
}
BENCHMARK(BM_gamma1)->Arg(4)->Arg(8)->Arg(12);
