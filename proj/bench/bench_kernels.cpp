#include <benchmark/benchmark.h>

#include "modlat/glueing.hpp"
#include "modlat/models.hpp"
#include "modlat/tower_presentation.hpp"

using namespace modlat;

namespace {

const FiniteLattice& big_lattice() {
  static const FiniteLattice L = [] {
    auto M = abelian_group(2, {2, 2, 1});
    return submodule_lattice(*M, M->all_submodules());
  }();
  return L;
}

void BM_IsModularSerial(benchmark::State& st) {
  const auto& L = big_lattice();
  for (auto _ : st) benchmark::DoNotOptimize(is_modular_serial(L));
  st.counters["elements"] = double(L.size());
}
BENCHMARK(BM_IsModularSerial)->Unit(benchmark::kMillisecond);

void BM_IsModularParallel(benchmark::State& st) {
  const auto& L = big_lattice();
  const SearchOptions o{int(st.range(0))};
  for (auto _ : st) benchmark::DoNotOptimize(is_modular(L, o));
}
BENCHMARK(BM_IsModularParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_HoldsIdentity(benchmark::State& st) {
  const FiniteLattice L = product(make_n5(), make_m3());
  const Term s = parse_term("x(y + x z)"), t = parse_term("x y + x z");
  const SearchOptions o{int(st.range(0))};
  for (auto _ : st) benchmark::DoNotOptimize(holds_identity(L, s, t, {"x", "y", "z"}, o));
  st.counters["assignments"] = double(L.size() * L.size() * L.size());
}
BENCHMARK(BM_HoldsIdentity)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_GeneratedSublattice(benchmark::State& st) {
  TowerModel T = tower_canonical_model(1, 2);
  const FiniteModule& M = *T.module;
  auto A = tower_assignment(T);
  HandleIndex<Submodule> seeds(M);
  for (const auto& g : tower_presentation(TowerKind::Omega, 1).economy) seeds.insert(A.at(g));
  const SearchOptions o{int(st.range(0))};
  for (auto _ : st) benchmark::DoNotOptimize(generated_sublattice(M, seeds.items(), kDefaultLatticeCap, o));
}
BENCHMARK(BM_GeneratedSublattice)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_Congruence(benchmark::State& st) {
  const auto& L = big_lattice();
  const Elem a = L.bottom(), b = L.covers(L.bottom())[0];
  for (auto _ : st) benchmark::DoNotOptimize(congruence_generated(L, a, b));
}
BENCHMARK(BM_Congruence)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
