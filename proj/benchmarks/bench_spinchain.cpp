#include <benchmark/benchmark.h>

#include "spinchain/flows.hpp"
#include "spinchain/linearization.hpp"
#include "spinchain/moment_map.hpp"
#include "spinchain/monodromy.hpp"
#include "spinchain/sampling.hpp"
#include "spinchain/spin_system.hpp"

namespace {

using namespace spinchain;

void BM_PoissonBracket(benchmark::State& state) {
    CounterRng rng(1, 0);
    const SpinTriple p = random_triple(rng);
    for (auto _ : state) benchmark::DoNotOptimize(poisson_bracket(Observable::H(), Observable::J(), p));
}
BENCHMARK(BM_PoissonBracket);

void BM_FlowJ(benchmark::State& state) {
    CounterRng rng(2, 0);
    const SpinTriple p = random_triple(rng);
    const double t = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(flow_j(p, t));
}
BENCHMARK(BM_FlowJ)->Arg(1)->Arg(10)->Arg(100);

void BM_FirstReturn(benchmark::State& state) {
    const SpinTriple p = find_fiber_point({1.3, 0.0, 0.0}, 5);
    for (auto _ : state) benchmark::DoNotOptimize(first_return(p));
}
BENCHMARK(BM_FirstReturn)->Unit(benchmark::kMillisecond);

void BM_SampleImage(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sample_image(n, 3));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleImage)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_FocusFocusEigs(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(focus_focus_eigs(0.3));
}
BENCHMARK(BM_FocusFocusEigs);

void BM_ContinueLattice(benchmark::State& state) {
    const auto loop = default_loop(0.3, 0.0, 48);
    for (auto _ : state) benchmark::DoNotOptimize(continue_lattice(loop, IntegratorConfig{}, 7));
}
BENCHMARK(BM_ContinueLattice)->Unit(benchmark::kMillisecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
