// Copyright (c) the revemb authors.
// SPDX-License-Identifier: Apache-2.0

#include <random>

#include <benchmark/benchmark.h>

#include "revemb/embedding.hpp"
#include "revemb/simulation.hpp"

using namespace revemb;

namespace {

// Reversible generator with unit-scale rates (same construction the
// tests use: symmetric flux over a positive distribution).
GeneratorMatrix make_generator(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.1, 1.0);
    Vector mu(n);
    double sum = 0.0;
    for (double &v : mu) {
        v = 0.5 + unit(rng);
        sum += v;
    }
    Matrix q(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double flux = unit(rng);
            q(i, j) = flux / (mu[i] / sum);
            q(j, i) = flux / (mu[j] / sum);
        }
    }
    for (int i = 0; i < n; ++i) {
        double off = 0.0;
        for (int j = 0; j < n; ++j) {
            off += i == j ? 0.0 : q(i, j);
        }
        q(i, i) = -off;
    }
    q *= 1.0 / inf_norm(q);
    return validate_generator(q);
}

void bench_symmetric_eigen(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Matrix s(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            s(i, j) = s(j, i) = unit(rng);
        }
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(symmetric_eigen(s));
    }
}
BENCHMARK(bench_symmetric_eigen)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void bench_expm(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    const Matrix q = make_generator(n, 11).matrix();
    for (auto _ : state) {
        benchmark::DoNotOptimize(expm(q));
    }
}
BENCHMARK(bench_expm)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void bench_reversible_embedding(benchmark::State &state) {
    const int n = static_cast<int>(state.range(0));
    const auto p =
        validate_stochastic(expm(make_generator(n, 23).matrix()), 1e-12);
    for (auto _ : state) {
        benchmark::DoNotOptimize(reversible_embedding(p));
    }
}
BENCHMARK(bench_reversible_embedding)->Arg(4)->Arg(8)->Arg(16)->Arg(32);

void bench_simulate_ctmc(benchmark::State &state) {
    const auto q = make_generator(4, 37);
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            simulate_ctmc(q, static_cast<double>(state.range(0)), 0, ++seed));
    }
}
BENCHMARK(bench_simulate_ctmc)->Arg(1000)->Arg(10000);

} // namespace

BENCHMARK_MAIN();
