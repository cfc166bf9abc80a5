// Copyright (c) the revemb authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "revemb/embedding.hpp"

namespace revemb {

/// A discretely observed trajectory: the state at times 0, T, 2T, ...
struct Trajectory {
    std::vector<int> states; // 0-based indices, length >= 2
    double interval = 1.0;   // sampling period T > 0
    int n = 0;               // state-space size
};

/// Throws unless the trajectory has length >= 2, a positive interval,
/// and all indices in [0, n).
void validate_trajectory(const Trajectory &traj);

/// Pair counts c_ij and visit counts v_i = sum_j c_ij over the first
/// length-1 positions of the trajectory.
struct TransitionCounts {
    int n = 0;
    std::vector<std::int64_t> counts; // row-major n x n
    std::vector<std::int64_t> visits;

    std::int64_t operator()(int i, int j) const {
        return counts[static_cast<std::size_t>(i) * n + j];
    }
};

TransitionCounts count_transitions(const Trajectory &traj);

/// Sums counts across trajectories; aggregation is associative and
/// order-independent. Trajectories must share the same state space.
TransitionCounts count_transitions(const std::vector<Trajectory> &trajs);

/// Maximum likelihood estimate p_ij = c_ij / v_i. A pseudocount alpha
/// adds alpha to every c_ij (and n * alpha to v_i); with alpha = 0 this
/// is the plain MLE. Throws UnvisitedStateError when some v_i = 0.
StochasticMatrix mle_transition(const TransitionCounts &counts,
                                double pseudocount = 0.0,
                                double tol = kDefaultTol);

struct EstimateOptions {
    EmbedOptions embed;
    /// Drop never-visited states (and, if the estimate is still not
    /// irreducible, restrict to the largest closed communicating class)
    /// instead of failing.
    bool restrict_states = false;
    double pseudocount = 0.0;
};

struct EstimationResult {
    /// Embeddability report for the estimated transition matrix. When
    /// the verdict is Embeddable the generator is rescaled to rate
    /// units: Q = H / T, so that expm(Q T) reproduces the estimate.
    EmbeddingReport report;
    StochasticMatrix p_hat;
    /// Original indices of the states the report refers to (identity
    /// unless restriction dropped states).
    std::vector<int> kept_states;
    double interval = 1.0;
};

EstimationResult estimate_generator(const Trajectory &traj,
                                    const EstimateOptions &opts = {});

/// Multi-trajectory variant: counts are pooled before estimation.
EstimationResult estimate_generator(const std::vector<Trajectory> &trajs,
                                    const EstimateOptions &opts = {});

} // namespace revemb
