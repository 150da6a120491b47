#include <benchmark/benchmark.h>

#include "affdist/catalog.hpp"
#include "affdist/distance.hpp"

using namespace affdist;

static void BM_ScanCenterDim7(benchmark::State& state) {
    VBF f = vbf_from_power(FieldSpec::standard(7), 3);
    ScanCenters reps = center_orbit_representatives(FieldSpec::standard(7), 3);
    for (auto _ : state) {
        ScanCertificate c = gerbera_scan(f, 12, 3, reps, 1);
        benchmark::DoNotOptimize(c.witnessed_max);
    }
}
BENCHMARK(BM_ScanCenterDim7)->Unit(benchmark::kMillisecond);

static void BM_ExactDistanceN4(benchmark::State& state) {
    VBF f = vbf_from_power(FieldSpec::standard(4), 3);
    for (auto _ : state) benchmark::DoNotOptimize(distance_exact(f, 1));
}
BENCHMARK(BM_ExactDistanceN4)->Unit(benchmark::kMillisecond);

static void BM_WitnessSearchN6(benchmark::State& state) {
    VBF f = kim_function();
    uint64_t seed = 0;
    for (auto _ : state) {
        WitnessResult w = witness_search(f, seed++);
        benchmark::DoNotOptimize(w.intersection);
    }
}
BENCHMARK(BM_WitnessSearchN6)->Unit(benchmark::kMillisecond);
