// Copyright (c) the revemb authors.
// SPDX-License-Identifier: Apache-2.0

#include "revemb/chain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace revemb {

StochasticMatrix validate_stochastic(const Matrix &raw, double tol) {
    const int n = raw.dim();
    if (n == 0) {
        throw DimensionError("validate_stochastic: empty matrix");
    }
    if (!raw.all_finite()) {
        throw NotStochasticError(-1, 0.0,
                                 "validate_stochastic: non-finite entry");
    }

    Matrix m(raw);
    std::vector<std::pair<int, int>> clamped;
    for (int i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j < n; ++j) {
            const double v = m(i, j);
            if (v < -tol) {
                std::ostringstream msg;
                msg << "not stochastic: entry (" << i << ", " << j << ") = "
                    << v << " is negative beyond tolerance " << tol;
                throw NotStochasticError(i, v, msg.str());
            }
            if (v < 0.0) {
                m(i, j) = 0.0;
                clamped.emplace_back(i, j);
            }
            row_sum += m(i, j);
        }
        if (std::abs(row_sum - 1.0) > tol) {
            std::ostringstream msg;
            msg << "not stochastic: row " << i << " sums to " << row_sum;
            throw NotStochasticError(i, row_sum, msg.str());
        }
        if (row_sum != 1.0) {
            for (int j = 0; j < n; ++j) {
                m(i, j) /= row_sum;
            }
        }
    }
    return StochasticMatrix(std::move(m), std::move(clamped));
}

GeneratorMatrix validate_generator(const Matrix &raw, double tol) {
    const int n = raw.dim();
    if (n == 0) {
        throw DimensionError("validate_generator: empty matrix");
    }
    if (!raw.all_finite()) {
        throw NotGeneratorError(-1, -1, 0.0,
                                "validate_generator: non-finite entry");
    }

    Matrix m(raw);
    std::vector<std::pair<int, int>> clamped;
    for (int i = 0; i < n; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j < n; ++j) {
            const double v = m(i, j);
            if (j != i && v < -tol) {
                std::ostringstream msg;
                msg << "not a generator: off-diagonal (" << i << ", " << j
                    << ") = " << v << " is negative beyond tolerance " << tol;
                throw NotGeneratorError(i, j, v, msg.str());
            }
            row_sum += v;
        }
        if (std::abs(row_sum) > tol) {
            std::ostringstream msg;
            msg << "not a generator: row " << i << " sums to " << row_sum;
            throw NotGeneratorError(i, i, row_sum, msg.str());
        }
        // Clamp marginal negatives into the diagonal, then zero the row
        // sum exactly through the diagonal entry.
        double off_sum = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) {
                continue;
            }
            if (m(i, j) < 0.0) {
                clamped.emplace_back(i, j);
                m(i, j) = 0.0;
            }
            off_sum += m(i, j);
        }
        m(i, i) = -off_sum;
    }
    return GeneratorMatrix(std::move(m), std::move(clamped));
}

ProbabilityDistribution validate_distribution(const Vector &raw, double tol) {
    if (raw.empty()) {
        throw DimensionError("validate_distribution: empty vector");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (!(raw[i] > 0.0) || !std::isfinite(raw[i])) {
            std::ostringstream msg;
            msg << "not a positive distribution: component " << i << " = "
                << raw[i];
            throw Error(msg.str());
        }
        sum += raw[i];
    }
    if (std::abs(sum - 1.0) > tol) {
        std::ostringstream msg;
        msg << "not a distribution: components sum to " << sum;
        throw Error(msg.str());
    }
    return ProbabilityDistribution(raw);
}

namespace {

// Reachability closure from `start` following edges selected by `edge`.
template <typename EdgeFn>
std::vector<char> reachable(int n, int start, EdgeFn edge) {
    std::vector<char> seen(n, 0);
    std::vector<int> stack{start};
    seen[start] = 1;
    while (!stack.empty()) {
        const int i = stack.back();
        stack.pop_back();
        for (int j = 0; j < n; ++j) {
            if (!seen[j] && edge(i, j)) {
                seen[j] = 1;
                stack.push_back(j);
            }
        }
    }
    return seen;
}

} // namespace

bool is_irreducible(const StochasticMatrix &p) {
    const int n = p.dim();
    const auto forward =
        reachable(n, 0, [&](int i, int j) { return p(i, j) > 0.0; });
    const auto backward =
        reachable(n, 0, [&](int i, int j) { return p(j, i) > 0.0; });
    for (int i = 0; i < n; ++i) {
        if (!forward[i] || !backward[i]) {
            return false;
        }
    }
    return true;
}

ProbabilityDistribution invariant_distribution(const StochasticMatrix &p) {
    const int n = p.dim();
    // mu P = mu  <=>  (P^T - I) mu^T = 0; one equation is redundant and
    // is replaced by the normalization sum(mu) = 1.
    for (int replaced = 0; replaced < n; ++replaced) {
        Matrix a(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                a(i, j) = p(j, i) - (i == j ? 1.0 : 0.0);
            }
        }
        for (int j = 0; j < n; ++j) {
            a(replaced, j) = 1.0;
        }
        Vector b(n, 0.0);
        b[replaced] = 1.0;

        Vector mu;
        try {
            mu = solve_linear(a, b).x;
        } catch (const SingularMatrixError &) {
            continue; // try anchoring a different equation
        }
        double sum = 0.0;
        bool positive = true;
        for (double v : mu) {
            positive = positive && v > 0.0;
            sum += v;
        }
        if (!positive) {
            throw SingularMatrixError(
                "invariant_distribution: solution has nonpositive "
                "components; input is not irreducible");
        }
        for (double &v : mu) {
            v /= sum;
        }
        return validate_distribution(mu);
    }
    throw SingularMatrixError(
        "invariant_distribution: singular system; input is not irreducible");
}

bool is_reversible(const StochasticMatrix &p, const ProbabilityDistribution &mu,
                   double tol) {
    const int n = p.dim();
    if (mu.dim() != n) {
        throw DimensionError("is_reversible: dimension mismatch");
    }
    double max_flux = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            max_flux = std::max(max_flux, mu[i] * p(i, j));
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (std::abs(mu[i] * p(i, j) - mu[j] * p(j, i)) > tol * max_flux) {
                return false;
            }
        }
    }
    return true;
}

bool kolmogorov_triangle(const StochasticMatrix &p, double tol) {
    if (p.dim() != 3) {
        throw DimensionError("kolmogorov_triangle: matrix must be 3x3");
    }
    const double forward = p(0, 1) * p(1, 2) * p(2, 0);
    const double backward = p(1, 0) * p(2, 1) * p(0, 2);
    return std::abs(forward - backward) <=
           tol * std::max(std::abs(forward), std::abs(backward));
}

namespace {

// Iterative Tarjan; components come out in reverse topological order.
struct TarjanState {
    const Matrix &w;
    int n;
    int counter = 0;
    std::vector<int> index, lowlink;
    std::vector<char> on_stack;
    std::vector<int> stack;
    std::vector<std::vector<int>> components;

    explicit TarjanState(const Matrix &weights)
        : w(weights), n(weights.dim()), index(n, -1), lowlink(n, 0),
          on_stack(n, 0) {}

    void visit(int root) {
        struct Frame {
            int v;
            int next_child;
        };
        std::vector<Frame> frames{{root, 0}};
        begin(root);
        while (!frames.empty()) {
            auto &[v, next] = frames.back();
            bool descended = false;
            for (int j = next; j < n; ++j) {
                if (j == v || !(w(v, j) > 0.0)) {
                    continue;
                }
                if (index[j] == -1) {
                    next = j + 1;
                    begin(j);
                    frames.push_back({j, 0});
                    descended = true;
                    break;
                }
                if (on_stack[j]) {
                    lowlink[v] = std::min(lowlink[v], index[j]);
                }
            }
            if (descended) {
                continue;
            }
            if (lowlink[v] == index[v]) {
                std::vector<int> component;
                int u;
                do {
                    u = stack.back();
                    stack.pop_back();
                    on_stack[u] = 0;
                    component.push_back(u);
                } while (u != v);
                std::sort(component.begin(), component.end());
                components.push_back(std::move(component));
            }
            frames.pop_back();
            if (!frames.empty()) {
                lowlink[frames.back().v] =
                    std::min(lowlink[frames.back().v], lowlink[v]);
            }
        }
    }

    void begin(int v) {
        index[v] = lowlink[v] = counter++;
        stack.push_back(v);
        on_stack[v] = 1;
    }
};

} // namespace

std::vector<std::vector<int>> strongly_connected_components(const Matrix &w) {
    TarjanState state(w);
    for (int v = 0; v < w.dim(); ++v) {
        if (state.index[v] == -1) {
            state.visit(v);
        }
    }
    return state.components;
}

std::vector<int> largest_closed_class(const StochasticMatrix &p) {
    const auto components = strongly_connected_components(p.matrix());
    std::vector<int> best;
    for (const auto &component : components) {
        std::vector<char> inside(p.dim(), 0);
        for (int v : component) {
            inside[v] = 1;
        }
        bool closed = true;
        for (int v : component) {
            for (int j = 0; j < p.dim() && closed; ++j) {
                if (!inside[j] && p(v, j) > 0.0) {
                    closed = false;
                }
            }
        }
        if (!closed) {
            continue;
        }
        if (component.size() > best.size() ||
            (component.size() == best.size() && !best.empty() &&
             component.front() < best.front())) {
            best = component;
        }
    }
    return best;
}

StochasticMatrix restrict_to_states(const StochasticMatrix &p,
                                    const std::vector<int> &states,
                                    double tol) {
    const int m = static_cast<int>(states.size());
    Matrix sub(m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            sub(i, j) = p(states[i], states[j]);
        }
    }
    return validate_stochastic(sub, tol);
}

} // namespace revemb
