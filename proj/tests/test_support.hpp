// Copyright (c) the revemb authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <initializer_list>
#include <random>

#include "revemb/chain.hpp"
#include "revemb/matrix.hpp"

namespace revemb::testing {

inline Matrix make_matrix(
    std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(static_cast<int>(rows.size()));
    int i = 0;
    for (const auto &row : rows) {
        int j = 0;
        for (double v : row) {
            m(i, j++) = v;
        }
        ++i;
    }
    return m;
}

// 3x3 chains used throughout: a non-reversible one, a reversible one
// with a negative eigenvalue, a reversible one whose candidate has a
// negative off-diagonal, and an embeddable one.
inline Matrix example1() {
    return make_matrix({{1.0 / 6, 1.0 / 3, 1.0 / 2},
                        {1.0 / 2, 1.0 / 6, 1.0 / 3},
                        {1.0 / 3, 1.0 / 2, 1.0 / 6}});
}
inline Matrix example2() {
    return make_matrix({{1.0 / 3, 1.0 / 2, 1.0 / 6},
                        {1.0 / 2, 1.0 / 6, 1.0 / 3},
                        {1.0 / 6, 1.0 / 3, 1.0 / 2}});
}
inline Matrix example3() {
    return make_matrix({{0.5, 0.4, 0.1}, {0.4, 0.4, 0.2}, {0.1, 0.2, 0.7}});
}
inline Matrix example4() {
    return make_matrix({{0.5, 0.25, 0.25}, {0.25, 0.5, 0.25}, {0.25, 0.25, 0.5}});
}

inline double uniform(std::mt19937_64 &rng, double lo, double hi) {
    return lo + (hi - lo) * std::uniform_real_distribution<double>()(rng);
}

inline Matrix random_symmetric(int n, std::mt19937_64 &rng,
                               double scale = 1.0) {
    Matrix m(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            m(i, j) = m(j, i) = uniform(rng, -scale, scale);
        }
    }
    return m;
}

inline StochasticMatrix random_stochastic(int n, std::mt19937_64 &rng,
                                          double zero_fraction = 0.0) {
    Matrix m(n);
    for (int i = 0; i < n; ++i) {
        double row_sum = 0.0;
        while (row_sum == 0.0) {
            row_sum = 0.0;
            for (int j = 0; j < n; ++j) {
                const double keep =
                    uniform(rng, 0.0, 1.0) >= zero_fraction ? 1.0 : 0.0;
                m(i, j) = keep * uniform(rng, 0.0, 1.0);
                row_sum += m(i, j);
            }
        }
        for (int j = 0; j < n; ++j) {
            m(i, j) /= row_sum;
        }
    }
    return validate_stochastic(m, 1e-6);
}

// Reversible generator from a symmetric positive rate matrix and a
// positive distribution, rescaled to a moderate norm so expm stays well
// away from singular.
inline GeneratorMatrix random_reversible_generator(int n,
                                                   std::mt19937_64 &rng) {
    Vector mu(n);
    double mu_sum = 0.0;
    for (double &v : mu) {
        v = uniform(rng, 0.5, 1.5);
        mu_sum += v;
    }
    for (double &v : mu) {
        v /= mu_sum;
    }
    Matrix q(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double flux = uniform(rng, 0.1, 1.0);
            q(i, j) = flux / mu[i];
            q(j, i) = flux / mu[j];
        }
    }
    for (int i = 0; i < n; ++i) {
        double off = 0.0;
        for (int j = 0; j < n; ++j) {
            off += i == j ? 0.0 : q(i, j);
        }
        q(i, i) = -off;
    }
    const double target = uniform(rng, 0.3, 1.2);
    q *= target / inf_norm(q);
    return validate_generator(q);
}

// Reversible stochastic matrix built from a symmetric flux matrix;
// verdicts under embedding are mixed (spectra are not always positive).
inline StochasticMatrix random_reversible_stochastic(int n,
                                                     std::mt19937_64 &rng) {
    Matrix flux(n);
    for (int i = 0; i < n; ++i) {
        flux(i, i) = uniform(rng, 0.0, 1.0);
        for (int j = i + 1; j < n; ++j) {
            flux(i, j) = flux(j, i) = uniform(rng, 0.01, 1.0);
        }
    }
    Matrix p(n);
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) {
            row += flux(i, j);
        }
        for (int j = 0; j < n; ++j) {
            p(i, j) = flux(i, j) / row;
        }
    }
    return validate_stochastic(p, 1e-12);
}

inline std::vector<int> random_permutation(int n, std::mt19937_64 &rng) {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) {
        perm[i] = i;
    }
    std::shuffle(perm.begin(), perm.end(), rng);
    return perm;
}

// relabeled(i, j) = m(perm[i], perm[j])
inline Matrix relabel(const Matrix &m, const std::vector<int> &perm) {
    Matrix out(m.dim());
    for (int i = 0; i < m.dim(); ++i) {
        for (int j = 0; j < m.dim(); ++j) {
            out(i, j) = m(perm[i], perm[j]);
        }
    }
    return out;
}

// Power-summation oracle for matrix_polynomial.
inline Matrix naive_matrix_polynomial(const Vector &coeffs, const Matrix &p) {
    Matrix sum(p.dim());
    Matrix power = Matrix::identity(p.dim());
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
        sum += coeffs[j] * power;
        power = power * p;
    }
    return sum;
}

} // namespace revemb::testing
