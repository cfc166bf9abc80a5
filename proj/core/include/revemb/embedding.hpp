// Copyright (c) the revemb authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "revemb/chain.hpp"
#include "revemb/matrix.hpp"

namespace revemb {

struct EmbedOptions {
    /// Detailed-balance tolerance and off-diagonal clamping band.
    double tol = kDefaultTol;
    /// Two eigenvalues are treated as coincident when they differ by at
    /// most cluster_tol * max|lambda|.
    double cluster_tol = 1e-8;
    /// Eigenvalues must exceed this absolute threshold to count as
    /// positive (log is undefined at zero).
    double positivity_tol = 1e-12;
    /// The polynomial cross-check is skipped with a warning when the
    /// Vandermonde condition estimate exceeds this limit.
    double crosscheck_condition_limit = 1e10;
};

/// Symmetrization and eigenstructure of a reversible stochastic matrix.
///
/// With M = diag(sqrt(mu_i)) the matrix S = M P M^-1 is symmetric, so an
/// orthogonal R exists with R S R^T = diag(lambdas). The similarity
/// transform diagonalizing P is T = M^-1 R^T.
struct SpectralData {
    Vector sqrt_mu;                  // diagonal of M
    Matrix symmetrized;              // S = M P M^-1
    Matrix rotation;                 // R, rows are eigenvectors of S
    Vector lambdas;                  // eigenvalues of P, descending
    Vector log_lambdas;              // filled only when spectrum positive
    std::vector<double> gammas;      // distinct eigenvalues (cluster means)
    std::vector<int> multiplicities; // one per gamma, sums to n
    bool clustering_ambiguous = false; // a gap sits close to cluster_tol
};

/// Coefficients k_0..k_{m-1} interpolating log at the distinct
/// eigenvalues, with the condition estimate of the Vandermonde system
/// that produced them.
struct LogCoefficients {
    Vector k;
    double condition_estimate = 0.0;
};

enum class Verdict {
    Embeddable,
    NotIrreducible,
    NotReversible,
    NonpositiveEigenvalue,
    NegativeOffDiagonal,
};

const char *to_string(Verdict v);

struct FailingEntry {
    int row;
    int col;
    double value;
};

/// Full decision record for one matrix. The generator is present iff
/// the verdict is Embeddable; failing_entries is non-empty iff the
/// verdict is NegativeOffDiagonal. `candidate` keeps the raw logarithm
/// candidate before clamping, for diagnostics, whenever the spectrum
/// admitted one.
struct EmbeddingReport {
    int n = 0;
    Verdict verdict = Verdict::NotIrreducible;
    std::vector<std::string> reasons;
    std::optional<ProbabilityDistribution> mu;
    std::optional<SpectralData> spectral;
    std::optional<LogCoefficients> coefficients;
    std::optional<Matrix> candidate;
    std::optional<GeneratorMatrix> generator;
    std::vector<FailingEntry> failing_entries;
    std::optional<double> residual_expm;  // ||expm(candidate) - P||_inf
    std::optional<double> crosscheck_gap; // spectral vs polynomial route
    std::vector<std::string> warnings;
};

/// Builds M and S from a reversible P and its invariant distribution,
/// diagonalizes S, and clusters the eigenvalues into distinct values
/// with multiplicities.
SpectralData spectral_decompose(const StochasticMatrix &p,
                                const ProbabilityDistribution &mu,
                                double cluster_tol = 1e-8,
                                double symmetry_tol = 1e-8);

/// True iff every eigenvalue exceeds tol.
bool check_positive_spectrum(const SpectralData &spec, double tol = 1e-12);

/// Solves the Vandermonde system sum_j k_j gamma_i^j = log gamma_i.
/// The system is uniquely solvable for distinct gammas because the
/// Vandermonde determinant, the product of pairwise differences
/// prod_{i<j}(gamma_j - gamma_i), is then nonzero.
LogCoefficients log_coefficients(const std::vector<double> &gammas);

/// The unique logarithm candidate H = M^-1 R^T log(D) R M. Requires a
/// positive spectrum.
Matrix candidate_spectral(const SpectralData &spec);

/// The same candidate as a matrix polynomial
/// H = k_0 I + k_1 P + ... + k_{m-1} P^{m-1}; agrees with the spectral
/// route up to conditioning of the Vandermonde system.
Matrix candidate_polynomial(const StochasticMatrix &p,
                            const LogCoefficients &k);

/// Decides reversible embeddability. The verdict is the first failure
/// of, in order: irreducibility, reversibility, spectrum positivity,
/// off-diagonal nonnegativity of the candidate. On success the clamped
/// candidate is returned as a validated generator.
EmbeddingReport reversible_embedding(const StochasticMatrix &p,
                                     const EmbedOptions &opts = {});

/// Closed-form decision for 2x2 chains (trace criterion). Must agree
/// with reversible_embedding on every irreducible 2x2 input.
EmbeddingReport kendall_2x2(const StochasticMatrix &p,
                            const EmbedOptions &opts = {});

/// Closed-form decision for 3x3 chains, dispatching on coincident vs
/// distinct subdominant eigenvalues. Must agree with
/// reversible_embedding on every irreducible 3x3 input.
EmbeddingReport criterion_3x3(const StochasticMatrix &p,
                              const EmbedOptions &opts = {});

} // namespace revemb
