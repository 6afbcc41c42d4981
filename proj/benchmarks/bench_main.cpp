#include <benchmark/benchmark.h>

#include "uict/ensembles.hpp"
#include "uict/offspring.hpp"
#include "uict/resistance.hpp"
#include "uict/tree_sampling.hpp"
#include "uict/triangulation.hpp"
#include "uict/walk.hpp"

using namespace uict;

namespace {

void conditioned_tree(benchmark::State& state) {
    const auto d = make_geometric();
    Rng rng(1);
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sample_gw_tree_conditioned(d, n, rng));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(conditioned_tree)->Arg(1000)->Arg(100000);

void uict_window(benchmark::State& state) {
    const OffspringSampler s(make_geometric());
    Rng rng(2);
    const auto h = static_cast<std::uint32_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sample_uict(h, s, rng));
}
BENCHMARK(uict_window)->Arg(100)->Arg(1000);

void reduced_R(benchmark::State& state) {
    const OffspringSampler s(make_geometric());
    Rng rng(3);
    const auto len = static_cast<std::uint32_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sample_reduced_R(len, s, rng));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(reduced_R)->Arg(100000);

void walk_steps(benchmark::State& state) {
    const OffspringSampler s(make_geometric());
    Rng rng(4);
    const auto g = ct_to_adjacency(sample_uict(400, s, rng));
    const auto t_max = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(simulate_walks(g, t_max, 16, rng.split(9)));
    state.SetItemsProcessed(state.iterations() * state.range(0) * 16);
}
BENCHMARK(walk_steps)->Arg(10000);

void birth_death_bracket(benchmark::State& state) {
    const OffspringSampler s(make_geometric());
    Rng rng(5);
    const auto rg = sample_reduced_R(static_cast<std::uint32_t>(state.range(0)), s, rng);
    for (auto _ : state) benchmark::DoNotOptimize(bd_q_bracket(rg, 1e-5, rg.length() - 1));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(birth_death_bracket)->Arg(100000);

void resistance_ball(benchmark::State& state) {
    const OffspringSampler s(make_geometric());
    Rng rng(6);
    const auto k = static_cast<std::uint32_t>(state.range(0));
    const auto ct = sample_uict(k, s, rng);
    for (auto _ : state) benchmark::DoNotOptimize(effective_resistance(ct, k));
}
BENCHMARK(resistance_ball)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
