#include <benchmark/benchmark.h>

#include "affdist/gf2.hpp"

using namespace affdist;

static void BM_FieldMul(benchmark::State& state) {
    FieldSpec k = FieldSpec::standard(int(state.range(0)));
    uint32_t a = 3, b = 5;
    for (auto _ : state) {
        a = gf_mul(k, a, b) | 1;
        benchmark::DoNotOptimize(a);
    }
}
BENCHMARK(BM_FieldMul)->Arg(8)->Arg(16);

static void BM_FieldInverse(benchmark::State& state) {
    FieldSpec k = FieldSpec::standard(int(state.range(0)));
    uint32_t a = 7;
    for (auto _ : state) {
        a = gf_pow(k, a, k.size() - 2) | 1;
        benchmark::DoNotOptimize(a);
    }
}
BENCHMARK(BM_FieldInverse)->Arg(8)->Arg(16);

static void BM_Rref(benchmark::State& state) {
    BitMatrix m(24, 20);
    uint64_t x = 0x9e3779b97f4a7c15ull;
    for (int i = 0; i < 24; ++i) {
        x ^= x << 13; x ^= x >> 7; x ^= x << 17;
        m.set_row(i, x & 0xfffff);
    }
    for (auto _ : state) {
        auto r = m.rref();
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_Rref);
