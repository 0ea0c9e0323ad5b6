#include <random>

#include <benchmark/benchmark.h>

#include "alphalab/alphas.hpp"
#include "alphalab/backtest.hpp"
#include "alphalab/losses.hpp"
#include "alphalab/models.hpp"
#include "alphalab/synth.hpp"

using namespace alphalab;

namespace {

std::vector<double> normal(std::size_t n, double sd, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d(0.0, sd);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

void BM_Loss(benchmark::State& state) {
    const auto kind = static_cast<losses::LossKind>(state.range(0));
    const auto n = static_cast<std::size_t>(state.range(1));
    auto alpha = normal(n, 1.0, 1), r = normal(n, 0.02, 2);
    losses::LossSpec spec;
    spec.kind = kind;
    for (auto _ : state) benchmark::DoNotOptimize(losses::evaluate(spec, alpha, r));
    state.SetLabel(losses::to_string(kind));
    state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_Loss)->ArgsProduct({{0, 1, 2, 3, 4, 5, 6}, {1220}});  // 20 days x 61 assets

// Singular LSTM at the desk shape: 61 assets per step, 20 steps.
models::ModelParams lstm(std::size_t hidden) {
    return models::init(models::ModelKind::LSTM, {61, 20, hidden, 61}, 3);
}

Matrix batch(std::size_t rows, std::size_t cols) {
    Matrix x(rows, cols);
    auto v = normal(rows * cols, 1.0, 4);
    std::copy(v.begin(), v.end(), x.flat().begin());
    return x;
}

void BM_LstmForward(benchmark::State& state) {
    auto p = lstm(static_cast<std::size_t>(state.range(0)));
    Matrix x = batch(20, 61 * 20);
    for (auto _ : state) benchmark::DoNotOptimize(models::forward(p, x));
}
BENCHMARK(BM_LstmForward)->Arg(16)->Arg(64);

void BM_LstmBackward(benchmark::State& state) {
    auto p = lstm(static_cast<std::size_t>(state.range(0)));
    Matrix x = batch(20, 61 * 20), g = batch(20, 61);
    for (auto _ : state) benchmark::DoNotOptimize(models::backward(p, x, g));
}
BENCHMARK(BM_LstmBackward)->Arg(16)->Arg(64);

void BM_Backtest(benchmark::State& state) {
    synth::MarketSpec spec;
    spec.assets = 61;
    spec.days = static_cast<std::size_t>(state.range(0));
    auto panel = synth::ar1_panel(spec, 5);
    auto positions = alphas::reversion(panel);
    for (auto _ : state) benchmark::DoNotOptimize(backtest::run(positions, panel));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Backtest)->Arg(1277);  // 2022-01-01 .. 2025-07-01

}  // namespace

BENCHMARK_MAIN();
