// Microbenchmarks for the estimator hot paths: single-grid fits, the
// leave-one-out bandwidth search, and the parametric baseline.

#include "desmooth/bandwidth.hpp"
#include "desmooth/de_local.hpp"
#include "desmooth/local_poly.hpp"
#include "desmooth/parametric.hpp"
#include "desmooth/simulation.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace desmooth;

Dataset make_data(int n, std::uint64_t seed = 42) {
    RngStream stream(seed, 0);
    const TruthSpec truth{1.0, 1.0, nullptr};
    return generate_dataset(DesignSpec::uniform(0.0, 1.0), truth, NoiseSpec::normal(0.1), n,
                            stream);
}

std::vector<double> make_grid(int count) {
    std::vector<double> grid(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) grid[static_cast<std::size_t>(i)] = (i + 0.5) / count;
    return grid;
}

void BM_De1kFit(benchmark::State& state) {
    const Dataset data = make_data(static_cast<int>(state.range(0)));
    const auto grid = make_grid(101);
    const Kernel kernel;
    for (auto _ : state) {
        benchmark::DoNotOptimize(de1k_exponential(data, ExponentialDE{1.0},
                                                  static_cast<int>(state.range(1)), kernel, 0.1,
                                                  grid));
    }
}
BENCHMARK(BM_De1kFit)->Args({100, 1})->Args({100, 3})->Args({1000, 3})->Args({10000, 3});

void BM_LocalPolyFit(benchmark::State& state) {
    const Dataset data = make_data(static_cast<int>(state.range(0)));
    const auto grid = make_grid(101);
    const Kernel kernel;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            fit_local_poly(data, static_cast<int>(state.range(1)), kernel, 0.1, grid));
    }
}
BENCHMARK(BM_LocalPolyFit)->Args({100, 0})->Args({100, 1})->Args({100, 3})->Args({1000, 1});

void BM_LoocvSelect(benchmark::State& state) {
    const Dataset data = make_data(static_cast<int>(state.range(0)));
    const auto spec = EstimatorSpec::parse("de1-3", 1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(loocv_select(data, spec, default_cv_grid(data)));
    }
}
BENCHMARK(BM_LoocvSelect)->Arg(30)->Arg(100);

void BM_NlsFit(benchmark::State& state) {
    const Dataset data = make_data(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_exponential_nls(data));
    }
}
BENCHMARK(BM_NlsFit)->Arg(30)->Arg(100)->Arg(1000);

} // namespace

BENCHMARK_MAIN();
