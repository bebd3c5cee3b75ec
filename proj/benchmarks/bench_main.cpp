#include <benchmark/benchmark.h>

#include "qpperc/clusters.hpp"
#include "qpperc/environment.hpp"
#include "qpperc/estimation.hpp"
#include "qpperc/realization.hpp"

namespace {

using namespace qpperc;

EnvironmentSpec golden_environment() {
    const Matrix M = Matrix::from_rows({{0.6180339887498949}});
    const TorusPoint zero(std::vector<double>{0.5});
    std::vector<FieldComponent> comps;
    comps.push_back({M, TorusPoint(std::vector<double>{0.0}),
                     SamplingFunction::power_product(1.0, {{zero, 0.5}})});
    comps.push_back({M, TorusPoint(std::vector<double>{0.25}),
                     SamplingFunction::power_product(1.0, {{zero, 0.5}})});
    return EnvironmentSpec(1, std::move(comps), 1.0, 1.0, 1.0);
}

void BM_FieldEvaluation(benchmark::State& state) {
    const EnvironmentSpec spec = golden_environment();
    std::int64_t x = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(spec.death_rate(LatticePoint{x}));
        benchmark::DoNotOptimize(spec.bond_rate(EdgeId{LatticePoint{x}, 0}));
        ++x;
    }
}
BENCHMARK(BM_FieldEvaluation);

void BM_ResonanceScan(benchmark::State& state) {
    const EnvironmentSpec spec = golden_environment();
    const std::int64_t L = state.range(0);
    for (auto _ : state)
        benchmark::DoNotOptimize(spec.scan_resonances(LatticePoint{0}, L, 1e-4));
    state.SetItemsProcessed(state.iterations() * (2 * L + 1));
}
BENCHMARK(BM_ResonanceScan)->Arg(100)->Arg(1000)->Arg(10000);

void BM_SampleRealization(benchmark::State& state) {
    const EnvironmentSpec spec = EnvironmentSpec::uniform(1, 1.0, 1.0, 1.0);
    const SpaceTimeBox box{LatticePoint{0}, state.range(0), -10.0, 10.0};
    const auto geometry = BoxGeometry::create(box.center, box.radius);
    std::uint64_t trial = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            sample_realization(EnvironmentRates(spec), box, geometry, 7, trial++));
}
BENCHMARK(BM_SampleRealization)->Arg(4)->Arg(16)->Arg(64);

void BM_ClusterBuild(benchmark::State& state) {
    const EnvironmentSpec spec = EnvironmentSpec::uniform(1, 1.0, 1.0, 1.0);
    const SpaceTimeBox box{LatticePoint{0}, state.range(0), -10.0, 10.0};
    const Realization r = sample_realization(spec, box, 7, 0);
    for (auto _ : state) {
        ClusterStructure clusters(r);
        benchmark::DoNotOptimize(clusters.cluster_count());
    }
}
BENCHMARK(BM_ClusterBuild)->Arg(4)->Arg(16)->Arg(64);

void BM_TwoPointTrial(benchmark::State& state) {
    const EnvironmentSpec spec = EnvironmentSpec::uniform(1, 1.0, 0.2, 1.0);
    const SpaceTimeBox box{LatticePoint{0}, 8, -4.0, 4.0};
    const SpaceTimePoint a{LatticePoint{0}, 0.0};
    const SpaceTimePoint b{LatticePoint{4}, 0.0};
    std::uint64_t seed = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            estimate_two_point(spec, box, a, b, RegionMask{}, 32, seed++, 1));
}
BENCHMARK(BM_TwoPointTrial);

}  // namespace

BENCHMARK_MAIN();
