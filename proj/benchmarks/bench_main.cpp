#include <benchmark/benchmark.h>

#include "spreadtime/analysis.hpp"
#include "spreadtime/chain.hpp"
#include "spreadtime/model.hpp"
#include "spreadtime/sim.hpp"

using namespace spreadtime;

namespace {

NetworkSpec taxi_spec() {
    NetworkSpec spec;
    spec.groups.push_back(GroupProfile{50, 1.0, 1.0, 1});
    spec.groups.push_back(GroupProfile{50, 1.0, 1.0, 0});
    spec.rates = RateMatrix(2);
    spec.rates.at(0, 0) = 7.17e-4;
    spec.rates.at(0, 1) = 3.72e-4;
    spec.rates.at(1, 0) = 3.72e-4;
    spec.rates.at(1, 1) = 1.93e-4;
    return spec;
}

void BM_BuildSubgenerator(benchmark::State& state) {
    const auto spec = taxi_spec();
    for (auto _ : state) benchmark::DoNotOptimize(build_subgenerator(spec, 0.9));
}
BENCHMARK(BM_BuildSubgenerator);

void BM_DistributionSetup(benchmark::State& state) {
    const auto spec = taxi_spec();
    for (auto _ : state)
        benchmark::DoNotOptimize(SpreadDistribution::from_spec(spec, 0.9));
}
BENCHMARK(BM_DistributionSetup);

void BM_CdfEvaluation(benchmark::State& state) {
    const auto dist = SpreadDistribution::from_spec(taxi_spec(), 0.9);
    double t = 100.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(dist.cdf(t));
        t = t < 400.0 ? t + 1.0 : 100.0;
    }
}
BENCHMARK(BM_CdfEvaluation);

void BM_GuaranteedTime(benchmark::State& state) {
    const auto dist = SpreadDistribution::from_spec(taxi_spec(), 0.9);
    for (auto _ : state) benchmark::DoNotOptimize(dist.guaranteed_time(0.99));
}
BENCHMARK(BM_GuaranteedTime);

void BM_Moment(benchmark::State& state) {
    const auto dist = SpreadDistribution::from_spec(taxi_spec(), 0.9);
    for (auto _ : state) benchmark::DoNotOptimize(dist.moment(2));
}
BENCHMARK(BM_Moment);

void BM_Simulate1k(benchmark::State& state) {
    const auto spec = taxi_spec();
    SimConfig config;
    config.replications = 1000;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_completion(spec, 0.9, config));
        ++config.rng_seed;
    }
}
BENCHMARK(BM_Simulate1k);

} // namespace

BENCHMARK_MAIN();
