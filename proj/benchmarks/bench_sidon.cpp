#include <benchmark/benchmark.h>

#include "affdist/catalog.hpp"
#include "affdist/sidon.hpp"
#include "affdist/sidon_iso.hpp"

using namespace affdist;

static void BM_IsSidon24(benchmark::State& state) {
    SidonSet s = named_sidon_set("max-9");
    for (auto _ : state) benchmark::DoNotOptimize(is_sidon(s));
}
BENCHMARK(BM_IsSidon24);

static void BM_GreedyComplete(benchmark::State& state) {
    SidonSet empty{int(state.range(0)), {}};
    uint64_t seed = 0;
    for (auto _ : state) {
        SidonSet s = greedy_complete(empty, seed++);
        benchmark::DoNotOptimize(s.points.data());
    }
}
BENCHMARK(BM_GreedyComplete)->Arg(8)->Arg(9);

static void BM_AutSidon(benchmark::State& state) {
    SidonSet s = named_sidon_set("ellipse-6");
    for (auto _ : state) {
        auto g = aut_sidon(s);
        benchmark::DoNotOptimize(g.order);
    }
}
BENCHMARK(BM_AutSidon);
