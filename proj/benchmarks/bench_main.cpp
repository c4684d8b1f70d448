#include <benchmark/benchmark.h>

#include <cstddef>
#include <vector>

#include "uqfi/datagen.hpp"
#include "uqfi/density.hpp"
#include "uqfi/fitters.hpp"
#include "uqfi/importance.hpp"
#include "uqfi/pruning.hpp"
#include "uqfi/rng.hpp"

using namespace uqfi;

namespace {

std::vector<double> normal_sample(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.next_normal();
    return v;
}

void bm_kde_at(benchmark::State& state) {
    auto values = normal_sample(static_cast<std::size_t>(state.range(0)), 1);
    KdeConfig config;
    double point = 0.37;
    for (auto _ : state) {
        benchmark::DoNotOptimize(kde_at(values, point, config));
        point += 1e-9; // defeat caching without moving the evaluation point
    }
    state.SetComplexityN(state.range(0));
}

void bm_empirical_quantile(benchmark::State& state) {
    auto values = normal_sample(static_cast<std::size_t>(state.range(0)), 2);
    for (auto _ : state)
        benchmark::DoNotOptimize(empirical_quantile(values, 0.7));
    state.SetComplexityN(state.range(0));
}

void bm_residual_density_fit(benchmark::State& state) {
    auto values = normal_sample(static_cast<std::size_t>(state.range(0)), 3);
    for (auto _ : state) {
        ResidualTailModel model = fit_residual_density(values);
        benchmark::DoNotOptimize(model.bandwidth_body());
    }
}

void bm_estimate_importance(benchmark::State& state) {
    Dataset data = generate_linear_benchmark(FeatureSpec{}, ErrorLaw{},
                                             static_cast<std::size_t>(state.range(0)), 4);
    PredictorPtr fit = fit_ols(data);
    for (auto _ : state) {
        ImportanceCurve curve = estimate_importance(data, *fit, QuantileGrid{});
        benchmark::DoNotOptimize(curve.beta.data().data());
    }
}

void bm_mcp_fit(benchmark::State& state) {
    FeatureSpec spec;
    spec.p = static_cast<std::size_t>(state.range(0));
    Dataset data;
    data.x = sample_features(spec, 500);
    data.y.resize(500);
    Rng rng(6);
    for (std::size_t i = 0; i < 500; ++i)
        data.y[i] = model_outcome(ModelSpec{2}, data.x.row(i), rng.next_normal());
    McpConfig config;
    for (auto _ : state) {
        PredictorPtr fit = fit_mcp_additive(data, config);
        benchmark::DoNotOptimize(fit.get());
    }
}

void bm_marginal_quantile_full(benchmark::State& state) {
    Dataset data = generate(ModelSpec{1}, FeatureSpec{}, ErrorLaw{},
                            static_cast<std::size_t>(state.range(0)), 7);
    PredictorPtr fit = fit_additive_poly(data, {});
    DensityContext ctx = make_density_context(data, *fit, 0.5);
    for (auto _ : state)
        benchmark::DoNotOptimize(marginal_quantile_full(data, *fit, ctx));
    state.SetComplexityN(state.range(0));
}

} // namespace

BENCHMARK(bm_kde_at)->Arg(1000)->Arg(10000)->Complexity(benchmark::oN);
BENCHMARK(bm_empirical_quantile)->Arg(1000)->Arg(10000)->Complexity();
BENCHMARK(bm_residual_density_fit)->Arg(1000)->Arg(5000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_estimate_importance)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_mcp_fit)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_marginal_quantile_full)->Arg(1000)->Arg(4000)->Complexity(benchmark::oNLogN);

BENCHMARK_MAIN();
