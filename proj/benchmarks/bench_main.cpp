// Copyright (c) the semiflow contributors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <random>

#include "semiflow/flow.hpp"
#include "semiflow/generator.hpp"
#include "semiflow/operators.hpp"
#include "semiflow/series.hpp"

namespace {

using namespace semiflow;

TruncatedSeries random_series(std::size_t degree, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Complex> c(degree + 1);
    for (auto& v : c) v = Complex(u(rng), u(rng));
    return TruncatedSeries(std::move(c));
}

void BM_series_multiply(benchmark::State& state) {
    const auto a = random_series(std::size_t(state.range(0)), 1);
    const auto b = random_series(std::size_t(state.range(0)), 2);
    for (auto _ : state) benchmark::DoNotOptimize(multiply(a, b, 4096));
}
BENCHMARK(BM_series_multiply)->Arg(64)->Arg(256);

void BM_series_compose(benchmark::State& state) {
    const auto f = random_series(std::size_t(state.range(0)), 3);
    auto phic = random_series(std::size_t(state.range(0)), 4);
    phic *= Complex(0.2);
    for (auto _ : state) benchmark::DoNotOptimize(compose(f, phic, 256));
}
BENCHMARK(BM_series_compose)->Arg(16)->Arg(64);

void BM_condition_b_grid(benchmark::State& state) {
    const TruncatedSeries G(
        std::vector<Complex>{0.0, -1.0, 1.0 / std::sqrt(3.0), -1.0 / std::sqrt(3.0)});
    for (auto _ : state) benchmark::DoNotOptimize(condition_b_grid(G));
}
BENCHMARK(BM_condition_b_grid);

void BM_condition_c_certified(benchmark::State& state) {
    const auto G = random_series(8, 5);
    for (auto _ : state) benchmark::DoNotOptimize(condition_c(G, BoundaryMode::Certified));
}
BENCHMARK(BM_condition_c_certified);

void BM_finite_section_norm(benchmark::State& state) {
    const std::size_t N = std::size_t(state.range(0));
    const auto model = SemiflowModel::classify(
        TruncatedSeries(std::vector<Complex>{-1.0, 0.0, 1.0}));
    const TruncatedSeries phi = flow_series(model, 0.5, N + 48);
    for (auto _ : state) {
        const auto sec =
            finite_section(FiniteSection::Kind::Composition, phi, N, WeightSequence::hardy());
        benchmark::DoNotOptimize(operator_norm(sec));
    }
}
BENCHMARK(BM_finite_section_norm)->Arg(32)->Arg(64)->Arg(128);

void BM_integrate_flow(benchmark::State& state) {
    const TruncatedSeries G(
        std::vector<Complex>{0.0, -1.0, 1.0 / std::sqrt(3.0), -1.0 / std::sqrt(3.0)});
    for (auto _ : state)
        benchmark::DoNotOptimize(integrate_flow(G, double(state.range(0)), Complex(0.9)));
}
BENCHMARK(BM_integrate_flow)->Arg(1)->Arg(10);

void BM_toeplitz(benchmark::State& state) {
    const auto f = random_series(6, 8);
    for (auto _ : state) benchmark::DoNotOptimize(caratheodory_toeplitz(f, 12));
}
BENCHMARK(BM_toeplitz);

}  // namespace

BENCHMARK_MAIN();
