#include <benchmark/benchmark.h>

#include "meanfield/hartree.hpp"

using namespace meanfield;

namespace {

WaveFunction bump(int m) {
  WaveFunction phi(m);
  for (int x = 0; x < m; ++x)
    phi(x) = std::polar(1.0 + 0.5 * std::cos(2.0 * std::numbers::pi * x / m),
                        0.7 * std::sin(2.0 * std::numbers::pi * x / m));
  phi /= phi.norm();
  return phi;
}

PairPotential gentle(int m) {
  Eigen::VectorXd raw(m);
  for (int d = 0; d < m; ++d) {
    const int dist = std::min(d, m - d);
    raw(d) = 0.75 * std::exp(-0.8 * dist);
  }
  return PairPotential::from_displacements(raw);
}

}  // namespace

static void BM_hartree_evolve(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const WaveFunction phi0 = bump(m);
  const PairPotential v = gentle(m);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hartree_evolve(phi0, v, 0.1, 1e-3));
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_hartree_evolve)->Arg(4)->Arg(6)->Arg(8)->Arg(16);

BENCHMARK_MAIN();
