// Copyright (c) the revemb authors.
// SPDX-License-Identifier: Apache-2.0

#include "revemb/estimation.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace revemb {

void validate_trajectory(const Trajectory &traj) {
    if (traj.states.size() < 2) {
        throw ParseError("trajectory must contain at least two states");
    }
    if (!(traj.interval > 0.0)) {
        throw Error("trajectory sampling interval must be positive");
    }
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        if (traj.states[k] < 0 || traj.states[k] >= traj.n) {
            std::ostringstream msg;
            msg << "state index " << traj.states[k] << " at position " << k
                << " outside [0, " << traj.n << ")";
            throw IndexOutOfRangeError(msg.str());
        }
    }
}

TransitionCounts count_transitions(const Trajectory &traj) {
    validate_trajectory(traj);
    TransitionCounts counts;
    counts.n = traj.n;
    counts.counts.assign(static_cast<std::size_t>(traj.n) * traj.n, 0);
    counts.visits.assign(traj.n, 0);
    for (std::size_t k = 0; k + 1 < traj.states.size(); ++k) {
        const int i = traj.states[k];
        const int j = traj.states[k + 1];
        ++counts.counts[static_cast<std::size_t>(i) * traj.n + j];
        ++counts.visits[i];
    }
    return counts;
}

TransitionCounts count_transitions(const std::vector<Trajectory> &trajs) {
    if (trajs.empty()) {
        throw Error("no trajectories given");
    }
    TransitionCounts total = count_transitions(trajs.front());
    for (std::size_t t = 1; t < trajs.size(); ++t) {
        if (trajs[t].n != total.n) {
            throw DimensionError(
                "trajectories disagree on the state-space size");
        }
        const TransitionCounts part = count_transitions(trajs[t]);
        for (std::size_t idx = 0; idx < total.counts.size(); ++idx) {
            total.counts[idx] += part.counts[idx];
        }
        for (int i = 0; i < total.n; ++i) {
            total.visits[i] += part.visits[i];
        }
    }
    return total;
}

StochasticMatrix mle_transition(const TransitionCounts &counts,
                                double pseudocount, double tol) {
    const int n = counts.n;
    Matrix p(n);
    for (int i = 0; i < n; ++i) {
        const double denom =
            static_cast<double>(counts.visits[i]) + n * pseudocount;
        if (denom <= 0.0) {
            std::ostringstream msg;
            msg << "state " << i
                << " was never visited; its transition row cannot be "
                   "estimated (consider --restrict)";
            throw UnvisitedStateError(i, msg.str());
        }
        for (int j = 0; j < n; ++j) {
            p(i, j) = (static_cast<double>(counts(i, j)) + pseudocount) /
                      denom;
        }
    }
    return validate_stochastic(p, tol);
}

namespace {

// Drops zero-visit states from the counts until every remaining state
// has at least one outgoing transition. Returns the kept original
// indices (states that only ever appear as a trajectory's final
// observation lose that single incoming transition).
std::vector<int> drop_unvisited(TransitionCounts &counts) {
    std::vector<int> kept(counts.n);
    std::iota(kept.begin(), kept.end(), 0);
    for (;;) {
        std::vector<int> alive;
        for (int i = 0; i < counts.n; ++i) {
            if (counts.visits[i] > 0) {
                alive.push_back(i);
            }
        }
        if (static_cast<int>(alive.size()) == counts.n) {
            return kept;
        }
        if (alive.empty()) {
            throw UnvisitedStateError(kept.front(),
                                      "no state has outgoing transitions");
        }
        const int m = static_cast<int>(alive.size());
        TransitionCounts next;
        next.n = m;
        next.counts.assign(static_cast<std::size_t>(m) * m, 0);
        next.visits.assign(m, 0);
        std::vector<int> next_kept(m);
        for (int a = 0; a < m; ++a) {
            next_kept[a] = kept[alive[a]];
            for (int b = 0; b < m; ++b) {
                const std::int64_t c = counts(alive[a], alive[b]);
                next.counts[static_cast<std::size_t>(a) * m + b] = c;
                next.visits[a] += c;
            }
        }
        counts = std::move(next);
        kept = std::move(next_kept);
    }
}

EstimationResult estimate_from_counts(TransitionCounts counts,
                                      double interval,
                                      const EstimateOptions &opts) {
    std::vector<int> kept(counts.n);
    std::iota(kept.begin(), kept.end(), 0);
    std::vector<std::string> notes;

    if (opts.restrict_states) {
        const int before = counts.n;
        kept = drop_unvisited(counts);
        if (counts.n != before) {
            std::ostringstream msg;
            msg << "restricted to " << counts.n << " of " << before
                << " states: the rest were never visited";
            notes.push_back(msg.str());
        }
    }

    StochasticMatrix p_hat =
        mle_transition(counts, opts.pseudocount, opts.embed.tol);

    if (opts.restrict_states && !is_irreducible(p_hat)) {
        const std::vector<int> cls = largest_closed_class(p_hat);
        if (!cls.empty() && static_cast<int>(cls.size()) < p_hat.dim()) {
            std::ostringstream msg;
            msg << "restricted to the largest closed communicating class ("
                << cls.size() << " of " << p_hat.dim() << " states)";
            notes.push_back(msg.str());
            std::vector<int> composed(cls.size());
            for (std::size_t a = 0; a < cls.size(); ++a) {
                composed[a] = kept[cls[a]];
            }
            p_hat = restrict_to_states(p_hat, cls, opts.embed.tol);
            kept = std::move(composed);
        }
    }

    EstimationResult result{reversible_embedding(p_hat, opts.embed), p_hat,
                            std::move(kept), interval};
    result.report.warnings.insert(result.report.warnings.begin(),
                                  notes.begin(), notes.end());

    if (result.report.verdict == Verdict::Embeddable) {
        // Rescale to rate units: Q = H / T, so expm(Q T) = P-hat. The
        // diagonal is rebuilt from the divided off-diagonals so row sums
        // stay exactly zero.
        const Matrix &h = result.report.generator->matrix();
        Matrix q(h.dim());
        for (int i = 0; i < h.dim(); ++i) {
            double off_sum = 0.0;
            for (int j = 0; j < h.dim(); ++j) {
                if (j == i) {
                    continue;
                }
                q(i, j) = h(i, j) / interval;
                off_sum += q(i, j);
            }
            q(i, i) = -off_sum;
        }
        result.report.generator = validate_generator(q, 1e-10);
    }
    return result;
}

} // namespace

EstimationResult estimate_generator(const Trajectory &traj,
                                    const EstimateOptions &opts) {
    return estimate_from_counts(count_transitions(traj), traj.interval, opts);
}

EstimationResult estimate_generator(const std::vector<Trajectory> &trajs,
                                    const EstimateOptions &opts) {
    const TransitionCounts counts = count_transitions(trajs);
    for (const Trajectory &traj : trajs) {
        if (traj.interval != trajs.front().interval) {
            throw Error("trajectories disagree on the sampling interval");
        }
    }
    return estimate_from_counts(counts, trajs.front().interval, opts);
}

} // namespace revemb
