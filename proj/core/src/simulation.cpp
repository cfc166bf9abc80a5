// Copyright (c) the revemb authors.
// SPDX-License-Identifier: Apache-2.0

#include "revemb/simulation.hpp"

#include <cmath>
#include <sstream>

namespace revemb {

double Rng::next_exponential(double rate) {
    if (!(rate > 0.0)) {
        throw Error("next_exponential: rate must be positive");
    }
    return -std::log1p(-next_uniform()) / rate;
}

std::uint64_t Rng::mix(std::uint64_t seed, std::uint64_t stream) {
    // SplitMix64 advanced twice so (seed, stream) pairs decorrelate.
    std::uint64_t z = seed + stream * 0x9e3779b97f4a7c15ULL;
    for (int round = 0; round < 2; ++round) {
        z += 0x9e3779b97f4a7c15ULL;
        std::uint64_t x = z;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        z = x ^ (x >> 31);
    }
    return z;
}

namespace {

void check_initial(int initial, int n) {
    if (initial < 0 || initial >= n) {
        std::ostringstream msg;
        msg << "initial state " << initial << " outside [0, " << n << ")";
        throw IndexOutOfRangeError(msg.str());
    }
}

// Inverse-CDF sample over weights[begin..n); zero-weight entries are
// never selected. `total` is the normalizing sum.
template <typename WeightFn>
int sample_index(Rng &rng, int n, double total, WeightFn weight) {
    const double u = rng.next_uniform() * total;
    double acc = 0.0;
    int last_positive = -1;
    for (int j = 0; j < n; ++j) {
        const double w = weight(j);
        if (w <= 0.0) {
            continue;
        }
        last_positive = j;
        acc += w;
        if (u < acc) {
            return j;
        }
    }
    return last_positive; // u landed on trailing rounding slack
}

} // namespace

Trajectory simulate_dtmc(const StochasticMatrix &p, std::int64_t steps,
                         int initial, std::uint64_t seed) {
    if (steps < 1) {
        throw Error("simulate_dtmc: steps must be at least 1");
    }
    check_initial(initial, p.dim());

    Rng rng(seed);
    Trajectory traj;
    traj.n = p.dim();
    traj.interval = 1.0;
    traj.states.reserve(static_cast<std::size_t>(steps) + 1);
    traj.states.push_back(initial);
    int state = initial;
    for (std::int64_t k = 0; k < steps; ++k) {
        state = sample_index(rng, p.dim(), 1.0,
                             [&](int j) { return p(state, j); });
        traj.states.push_back(state);
    }
    return traj;
}

JumpPath simulate_ctmc(const GeneratorMatrix &q, double horizon, int initial,
                       std::uint64_t seed) {
    if (!(horizon > 0.0)) {
        throw Error("simulate_ctmc: horizon must be positive");
    }
    check_initial(initial, q.dim());

    Rng rng(seed);
    JumpPath path;
    path.n = q.dim();
    path.initial_state = initial;
    path.horizon = horizon;

    int state = initial;
    double t = 0.0;
    for (;;) {
        const double rate = -q(state, state);
        if (rate <= 0.0) {
            break; // absorbing state
        }
        t += rng.next_exponential(rate);
        if (t >= horizon) {
            break;
        }
        state = sample_index(rng, q.dim(), rate, [&](int j) {
            return j == state ? 0.0 : q(state, j);
        });
        path.times.push_back(t);
        path.states.push_back(state);
    }
    return path;
}

Trajectory sample_skeleton(const JumpPath &path, double interval) {
    if (!(interval > 0.0)) {
        throw Error("sample_skeleton: interval must be positive");
    }
    if (interval > path.horizon) {
        throw Error("sample_skeleton: interval exceeds the path horizon");
    }

    Trajectory traj;
    traj.n = path.n;
    traj.interval = interval;

    const auto samples =
        static_cast<std::int64_t>(std::floor(path.horizon / interval));
    traj.states.reserve(static_cast<std::size_t>(samples) + 1);

    int state = path.initial_state;
    std::size_t jump = 0;
    for (std::int64_t k = 0; k <= samples; ++k) {
        const double t = static_cast<double>(k) * interval;
        while (jump < path.times.size() && path.times[jump] <= t) {
            state = path.states[jump];
            ++jump;
        }
        traj.states.push_back(state);
    }
    return traj;
}

} // namespace revemb
