#include <benchmark/benchmark.h>

#include "bbmlab/field.hpp"
#include "bbmlab/littlewood_paley.hpp"
#include "bbmlab/solver.hpp"
#include "bbmlab/spectral.hpp"

namespace {

bbm::GridSpec grid_for(const benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  return st.range(1) == 1 ? bbm::GridSpec::line(80.0, n) : bbm::GridSpec::plane(80.0, 80.0, n, n);
}

bbm::State random_state(const bbm::GridSpec& g) {
  bbm::State s{0.1 * bbm::random_field(g, 1), {}};
  for (int a = 0; a < g.dim; ++a) s.velocity.push_back(0.1 * bbm::random_field(g, 2 + a));
  return s;
}

void BM_TransformRoundTrip(benchmark::State& st) {
  const bbm::Field f = bbm::random_field(grid_for(st), 7);
  for (auto _ : st) benchmark::DoNotOptimize(bbm::inverse_transform(bbm::transform(f)));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(f.size()));
}

void BM_Rhs(benchmark::State& st) {
  const bbm::GridSpec g = grid_for(st);
  bbm::ModelParams p;
  p.b = p.d = 1.0 / 6;
  p.eps = 0.1;
  const bbm::RhsEvaluator rhs(g, p, bbm::SolverConfig{});
  const bbm::State s = random_state(g);
  const bbm::CoefficientFields none;
  for (auto _ : st) benchmark::DoNotOptimize(rhs(s, 0.0, none));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(g.size()));
}

void BM_BlockEnergies(benchmark::State& st) {
  const bbm::GridSpec g = grid_for(st);
  const bbm::DyadicPartition part = bbm::build_partition(g);
  const bbm::State s = random_state(g);
  const bbm::EnergyWeights w{1.0 / 6, 1.0 / 6, 0.1, 2.0};
  for (auto _ : st) benchmark::DoNotOptimize(bbm::block_energies(s, w, part));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(g.size()));
}

void BM_BesovNorm(benchmark::State& st) {
  const bbm::GridSpec g = grid_for(st);
  const bbm::DyadicPartition part = bbm::build_partition(g);
  const bbm::Field f = bbm::random_field(g, 3);
  const bbm::BesovSpec spec{2.0, 2.0, 2.0};
  for (auto _ : st) benchmark::DoNotOptimize(bbm::besov_norm(f, spec, part));
}

void grids(benchmark::internal::Benchmark* b) {
  for (long n : {256, 1024, 4096}) b->Args({n, 1});
  for (long n : {64, 256}) b->Args({n, 2});
  b->ArgNames({"N", "dim"});
}

}  // namespace

BENCHMARK(BM_TransformRoundTrip)->Apply(grids);
BENCHMARK(BM_Rhs)->Apply(grids);
BENCHMARK(BM_BlockEnergies)->Apply(grids);
BENCHMARK(BM_BesovNorm)->Apply(grids);

BENCHMARK_MAIN();
