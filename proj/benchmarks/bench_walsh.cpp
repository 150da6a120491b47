#include <benchmark/benchmark.h>

#include "affdist/catalog.hpp"
#include "affdist/vbf.hpp"

using namespace affdist;

static void BM_WalshTable(benchmark::State& state) {
    VBF f = vbf_from_power(FieldSpec::standard(int(state.range(0))), 3);
    for (auto _ : state) {
        WalshTable w = walsh_table(f);
        benchmark::DoNotOptimize(w.values.data());
    }
}
BENCHMARK(BM_WalshTable)->Arg(6)->Arg(8)->Arg(9);

static void BM_DifferentialSpectrum(benchmark::State& state) {
    VBF f = vbf_from_power(FieldSpec::standard(int(state.range(0))), 3);
    for (auto _ : state) {
        auto d = differential_spectrum(f);
        benchmark::DoNotOptimize(d.delta_max);
    }
}
BENCHMARK(BM_DifferentialSpectrum)->Arg(6)->Arg(8)->Arg(9);
