// Copyright (c) the revemb authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>
#include <vector>

#include "revemb/matrix.hpp"

namespace revemb {

/// Default tolerance for domain validation and detailed-balance checks.
inline constexpr double kDefaultTol = 1e-9;

/// Validated row-stochastic square matrix.
class StochasticMatrix {
  public:
    const Matrix &matrix() const { return m_; }
    int dim() const { return m_.dim(); }
    double operator()(int i, int j) const { return m_(i, j); }

    /// Entries that were negative within tolerance and clamped to zero
    /// during validation (rows were renormalized afterwards).
    const std::vector<std::pair<int, int>> &clamped_entries() const {
        return clamped_;
    }

  private:
    friend StochasticMatrix validate_stochastic(const Matrix &, double);
    StochasticMatrix(Matrix m, std::vector<std::pair<int, int>> clamped)
        : m_(std::move(m)), clamped_(std::move(clamped)) {}

    Matrix m_;
    std::vector<std::pair<int, int>> clamped_;
};

/// Validated generator matrix: nonnegative off-diagonal, zero row sums.
class GeneratorMatrix {
  public:
    const Matrix &matrix() const { return m_; }
    int dim() const { return m_.dim(); }
    double operator()(int i, int j) const { return m_(i, j); }

    const std::vector<std::pair<int, int>> &clamped_entries() const {
        return clamped_;
    }

  private:
    friend GeneratorMatrix validate_generator(const Matrix &, double);
    GeneratorMatrix(Matrix m, std::vector<std::pair<int, int>> clamped)
        : m_(std::move(m)), clamped_(std::move(clamped)) {}

    Matrix m_;
    std::vector<std::pair<int, int>> clamped_;
};

/// Strictly positive probability vector.
class ProbabilityDistribution {
  public:
    const Vector &values() const { return v_; }
    int dim() const { return static_cast<int>(v_.size()); }
    double operator[](int i) const { return v_[i]; }

  private:
    friend ProbabilityDistribution validate_distribution(const Vector &,
                                                         double);
    explicit ProbabilityDistribution(Vector v) : v_(std::move(v)) {}

    Vector v_;
};

/// Accepts a matrix as row-stochastic when entries are >= -tol and row
/// sums are within tol of 1. Negative entries within tolerance are
/// clamped to zero and the row renormalized; the clamps are recorded.
/// Throws NotStochasticError naming the first violation beyond tol.
StochasticMatrix validate_stochastic(const Matrix &raw,
                                     double tol = kDefaultTol);

/// Accepts a matrix as a generator when off-diagonals are >= -tol
/// (clamped, with the diagonal absorbing the clamp) and row sums are
/// within tol of 0. The diagonal is adjusted so row sums are exactly 0.
GeneratorMatrix validate_generator(const Matrix &raw, double tol = kDefaultTol);

/// Accepts a strictly positive vector summing to 1 within tol.
ProbabilityDistribution validate_distribution(const Vector &raw,
                                              double tol = 1e-12);

/// True iff the directed graph with an edge i -> j whenever p_ij > 0 is
/// strongly connected. Edges are taken at exactly > 0: estimated
/// matrices produce exact zeros from zero counts.
bool is_irreducible(const StochasticMatrix &p);

/// Unique invariant distribution mu of an irreducible P, solved as the
/// linear system mu (P - I) = 0 with one equation replaced by the
/// normalization constraint. Throws SingularMatrixError when the input
/// turns out not to be irreducible.
ProbabilityDistribution invariant_distribution(const StochasticMatrix &p);

/// Detailed balance: |mu_i p_ij - mu_j p_ji| <= tol * max_ij(mu_i p_ij)
/// for every ordered pair.
bool is_reversible(const StochasticMatrix &p, const ProbabilityDistribution &mu,
                   double tol = kDefaultTol);

/// Kolmogorov's criterion specialized to 3x3 chains: reversibility holds
/// iff p12 p23 p31 = p21 p32 p13 (within tol relative to the larger
/// product). Throws DimensionError unless n = 3.
bool kolmogorov_triangle(const StochasticMatrix &p, double tol = kDefaultTol);

/// Strongly connected components of the directed graph with an edge
/// i -> j whenever weights(i, j) > 0.
std::vector<std::vector<int>>
strongly_connected_components(const Matrix &weights);

/// States of the largest closed communicating class (no transitions
/// leaving the class), ties broken towards the class containing the
/// smallest state index. Sorted ascending.
std::vector<int> largest_closed_class(const StochasticMatrix &p);

/// Restriction of P to the given states (must be a closed class for the
/// result to be stochastic without renormalization; rows are
/// revalidated with tol).
StochasticMatrix restrict_to_states(const StochasticMatrix &p,
                                    const std::vector<int> &states,
                                    double tol = kDefaultTol);

} // namespace revemb
