// Copyright (c) the revemb authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>

#include "revemb/estimation.hpp"

namespace revemb {

/// Deterministic pseudorandom stream: a Mersenne Twister (mt19937_64,
/// fully specified by the C++ standard, hence reproducible across
/// platforms) seeded through a SplitMix64 mix of (seed, stream), one
/// independent stream per trajectory. Uniform doubles take the top 53
/// bits of each output word.
class Rng {
  public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : engine_(mix(seed, stream)) {}

    /// Uniform in [0, 1).
    double next_uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Exponential with the given rate (> 0).
    double next_exponential(double rate);

    static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream);

  private:
    std::mt19937_64 engine_;
};

/// Continuous-time path: the state after each jump, with strictly
/// increasing jump times below the horizon.
struct JumpPath {
    int n = 0;
    int initial_state = 0;
    std::vector<double> times;
    std::vector<int> states;
    double horizon = 0.0;
};

/// Simulates `steps` transitions of the discrete-time chain by
/// inverse-CDF sampling of each row. Identical (inputs, seed) produce
/// identical output. The returned trajectory has interval 1.
Trajectory simulate_dtmc(const StochasticMatrix &p, std::int64_t steps,
                         int initial, std::uint64_t seed);

/// Gillespie simulation of the continuous-time chain: state i holds for
/// an exponential time with rate -q_ii, then jumps to j != i with
/// probability q_ij / (-q_ii); states with q_ii = 0 are absorbing.
JumpPath simulate_ctmc(const GeneratorMatrix &q, double horizon, int initial,
                       std::uint64_t seed);

/// The discrete skeleton: the state occupied at times 0, T, 2T, ... up
/// to the horizon. Paths are right-continuous, so the state at exactly
/// a jump time is the post-jump state.
Trajectory sample_skeleton(const JumpPath &path, double interval);

} // namespace revemb
