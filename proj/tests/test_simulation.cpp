// Copyright (c) the revemb authors.
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "doctest.h"
#include "revemb/simulation.hpp"
#include "test_support.hpp"

using namespace revemb;
using namespace revemb::testing;

namespace {

// Empirical transition frequencies of a trajectory.
Matrix empirical_frequencies(const Trajectory &traj) {
    const auto counts = count_transitions(traj);
    Matrix freq(counts.n);
    for (int i = 0; i < counts.n; ++i) {
        for (int j = 0; j < counts.n; ++j) {
            if (counts.visits[i] > 0) {
                freq(i, j) = static_cast<double>(counts(i, j)) /
                             static_cast<double>(counts.visits[i]);
            }
        }
    }
    return freq;
}

} // namespace

TEST_SUITE("simulation") {

TEST_CASE("simulate_dtmc degenerate chains") {
    const auto constant = simulate_dtmc(
        validate_stochastic(Matrix::identity(2)), 10, 0, 42);
    for (int s : constant.states) {
        CHECK(s == 0);
    }

    const auto alternating = simulate_dtmc(
        validate_stochastic(make_matrix({{0, 1}, {1, 0}})), 9, 0, 42);
    for (std::size_t k = 0; k < alternating.states.size(); ++k) {
        CHECK(alternating.states[k] == static_cast<int>(k % 2));
    }
}

TEST_CASE("simulate_dtmc is deterministic under a fixed seed") {
    std::mt19937_64 rng(1);
    const auto p = random_stochastic(4, rng);
    const auto a = simulate_dtmc(p, 5000, 1, 987654321);
    const auto b = simulate_dtmc(p, 5000, 1, 987654321);
    CHECK(a.states == b.states);
    const auto c = simulate_dtmc(p, 5000, 1, 987654322);
    CHECK(a.states != c.states);
}

TEST_CASE("simulate_dtmc empirical frequencies converge to P") {
    const auto p = validate_stochastic(
        make_matrix({{0.9, 0.1}, {0.2, 0.8}}));
    const auto traj = simulate_dtmc(p, 100000, 0, 7);
    CHECK(max_abs_diff(empirical_frequencies(traj), p.matrix()) <= 0.015);
}

TEST_CASE("simulate_ctmc absorbing generators produce constant paths") {
    const auto q = validate_generator(Matrix(3));
    const auto path = simulate_ctmc(q, 100.0, 1, 5);
    CHECK(path.times.empty());
    const auto traj = sample_skeleton(path, 1.0);
    CHECK(traj.states.size() == 101);
    for (int s : traj.states) {
        CHECK(s == 1);
    }
}

TEST_CASE("simulate_ctmc holding times have the right mean") {
    const auto q = validate_generator(make_matrix({{-1, 1}, {1, -1}}));
    const auto path = simulate_ctmc(q, 20000.0, 0, 11);
    REQUIRE(path.times.size() > 10000);
    double previous = 0.0;
    double total = 0.0;
    for (double t : path.times) {
        CHECK(t > previous);
        total += t - previous;
        previous = t;
    }
    const double mean = total / static_cast<double>(path.times.size());
    CHECK(std::abs(mean - 1.0) <= 0.04); // ~4 sigma at 1e4 jumps
}

TEST_CASE("skeleton law: empirical skeleton frequencies match expm(Q T)") {
    const auto q = validate_generator(make_matrix({{-1, 1}, {1, -1}}));
    const auto path = simulate_ctmc(q, 100000.0, 0, 2024);
    const auto traj = sample_skeleton(path, 1.0);
    REQUIRE(traj.states.size() == 100001);
    const Matrix law = expm(q.matrix());
    CHECK(law(0, 0) == doctest::Approx(0.5676676416183063).epsilon(1e-12));
    CHECK(max_abs_diff(empirical_frequencies(traj), law) <= 0.015);
}

TEST_CASE("sample_skeleton respects the right-continuous convention") {
    JumpPath path;
    path.n = 2;
    path.initial_state = 0;
    path.horizon = 3.0;

    SUBCASE("jump before the first sample") {
        path.times = {0.5};
        path.states = {1};
        const auto traj = sample_skeleton(path, 1.0);
        CHECK(traj.states == std::vector<int>{0, 1, 1, 1});
    }
    SUBCASE("jump exactly at a sample time lands post-jump") {
        path.times = {1.0};
        path.states = {1};
        const auto traj = sample_skeleton(path, 1.0);
        CHECK(traj.states == std::vector<int>{0, 1, 1, 1});
    }
    SUBCASE("coarse sampling truncates at the horizon") {
        path.times = {0.25};
        path.states = {1};
        path.horizon = 10.0;
        const auto traj = sample_skeleton(path, 3.0);
        CHECK(traj.states.size() == 4); // t = 0, 3, 6, 9
    }
    SUBCASE("interval beyond the horizon is rejected") {
        CHECK_THROWS_AS(sample_skeleton(path, 5.0), Error);
    }
}

TEST_CASE("rng streams decorrelate by stream index") {
    Rng a(42, 0);
    Rng b(42, 1);
    bool any_different = false;
    for (int i = 0; i < 16; ++i) {
        any_different = any_different || a.next_uniform() != b.next_uniform();
    }
    CHECK(any_different);
}

} // TEST_SUITE
