// Copyright (c) the revemb authors.
// SPDX-License-Identifier: Apache-2.0

#include "revemb/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace revemb {

const char *to_string(Verdict v) {
    switch (v) {
    case Verdict::Embeddable:
        return "Embeddable";
    case Verdict::NotIrreducible:
        return "NotIrreducible";
    case Verdict::NotReversible:
        return "NotReversible";
    case Verdict::NonpositiveEigenvalue:
        return "NonpositiveEigenvalue";
    case Verdict::NegativeOffDiagonal:
        return "NegativeOffDiagonal";
    }
    return "unknown";
}

namespace {

std::string format_entry(int i, int j, double v) {
    std::ostringstream msg;
    msg << "(" << i << ", " << j << ") = " << v;
    return msg.str();
}

} // namespace

SpectralData spectral_decompose(const StochasticMatrix &p,
                                const ProbabilityDistribution &mu,
                                double cluster_tol, double symmetry_tol) {
    const int n = p.dim();
    if (mu.dim() != n) {
        throw DimensionError("spectral_decompose: dimension mismatch");
    }

    SpectralData spec;
    spec.sqrt_mu.resize(n);
    for (int i = 0; i < n; ++i) {
        spec.sqrt_mu[i] = std::sqrt(mu[i]);
    }
    spec.symmetrized = Matrix(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            spec.symmetrized(i, j) =
                spec.sqrt_mu[i] * p(i, j) / spec.sqrt_mu[j];
        }
    }

    EigenDecomposition eig = symmetric_eigen(spec.symmetrized, symmetry_tol);
    spec.rotation = std::move(eig.rotation);
    spec.lambdas = std::move(eig.eigenvalues);

    if (std::abs(spec.lambdas.front() - 1.0) > 1e-10) {
        std::ostringstream msg;
        msg << "spectral_decompose: leading eigenvalue "
            << spec.lambdas.front()
            << " is not 1; input is not a valid irreducible stochastic matrix";
        throw Error(msg.str());
    }
    for (double lambda : spec.lambdas) {
        if (std::abs(lambda) > 1.0 + 1e-10) {
            std::ostringstream msg;
            msg << "spectral_decompose: eigenvalue " << lambda
                << " outside the unit interval";
            throw Error(msg.str());
        }
    }

    double max_lambda = 0.0;
    for (double lambda : spec.lambdas) {
        max_lambda = std::max(max_lambda, std::abs(lambda));
    }
    const double abs_tol = cluster_tol * max_lambda;

    // Chain consecutive eigenvalues (they are sorted) into clusters.
    int cluster_start = 0;
    for (int i = 1; i <= n; ++i) {
        const double gap =
            i < n ? spec.lambdas[i - 1] - spec.lambdas[i] : abs_tol + 1.0;
        if (i < n && gap <= abs_tol) {
            continue;
        }
        double mean = 0.0;
        for (int j = cluster_start; j < i; ++j) {
            mean += spec.lambdas[j];
        }
        mean /= (i - cluster_start);
        spec.gammas.push_back(mean);
        spec.multiplicities.push_back(i - cluster_start);
        cluster_start = i;
        if (i < n && gap <= 10.0 * abs_tol) {
            spec.clustering_ambiguous = true;
        }
    }

    if (spec.lambdas.back() > 0.0) {
        spec.log_lambdas.resize(n);
        for (int i = 0; i < n; ++i) {
            spec.log_lambdas[i] = std::log(spec.lambdas[i]);
        }
    }
    return spec;
}

bool check_positive_spectrum(const SpectralData &spec, double tol) {
    return std::all_of(spec.lambdas.begin(), spec.lambdas.end(),
                       [tol](double lambda) { return lambda > tol; });
}

LogCoefficients log_coefficients(const std::vector<double> &gammas) {
    const int m = static_cast<int>(gammas.size());
    if (m == 0) {
        throw Error("log_coefficients: empty eigenvalue list");
    }
    for (double g : gammas) {
        if (!(g > 0.0)) {
            std::ostringstream msg;
            msg << "log_coefficients: eigenvalue " << g
                << " is not positive, log is undefined";
            throw Error(msg.str());
        }
    }
    Matrix vandermonde(m);
    Vector rhs(m);
    for (int i = 0; i < m; ++i) {
        double power = 1.0;
        for (int j = 0; j < m; ++j) {
            vandermonde(i, j) = power;
            power *= gammas[i];
        }
        rhs[i] = std::log(gammas[i]);
    }
    const LinearSolution sol = solve_linear(vandermonde, rhs);
    return LogCoefficients{sol.x, sol.condition_estimate};
}

Matrix candidate_spectral(const SpectralData &spec) {
    const int n = static_cast<int>(spec.lambdas.size());
    if (spec.log_lambdas.empty()) {
        throw Error("candidate_spectral: spectrum is not strictly positive");
    }
    // H = M^-1 R^T log(D) R M, computed as W = R^T log(D) R first.
    Matrix w(n);
    for (int k = 0; k < n; ++k) {
        const double log_lambda = spec.log_lambdas[k];
        if (log_lambda == 0.0) {
            continue;
        }
        for (int i = 0; i < n; ++i) {
            const double rki = spec.rotation(k, i) * log_lambda;
            for (int j = 0; j < n; ++j) {
                w(i, j) += rki * spec.rotation(k, j);
            }
        }
    }
    Matrix h(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            h(i, j) = w(i, j) * spec.sqrt_mu[j] / spec.sqrt_mu[i];
        }
    }
    return h;
}

Matrix candidate_polynomial(const StochasticMatrix &p,
                            const LogCoefficients &k) {
    return matrix_polynomial(k.k, p.matrix());
}

namespace {

// Off-diagonal nonnegativity decision shared by the pipeline and the
// closed-form criteria. Entries in [-tol * ||H||_inf, 0) are clamped to
// zero (the diagonal absorbs the clamp); anything lower fails.
void finish_candidate(EmbeddingReport &report, const Matrix &p_raw,
                      const Matrix &h, double tol) {
    const int n = h.dim();
    report.candidate = h;
    report.residual_expm = inf_norm(expm(h) - p_raw);

    const double band = tol * inf_norm(h);
    Matrix clamped(h);
    std::vector<std::pair<int, int>> marginal;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j == i || h(i, j) >= 0.0) {
                continue;
            }
            if (h(i, j) < -band) {
                report.failing_entries.push_back({i, j, h(i, j)});
            } else {
                clamped(i, i) += clamped(i, j);
                clamped(i, j) = 0.0;
                marginal.emplace_back(i, j);
            }
        }
    }

    if (!report.failing_entries.empty()) {
        report.verdict = Verdict::NegativeOffDiagonal;
        const auto &worst = *std::min_element(
            report.failing_entries.begin(), report.failing_entries.end(),
            [](const FailingEntry &a, const FailingEntry &b) {
                return a.value < b.value;
            });
        report.reasons.push_back(
            "candidate logarithm has a negative off-diagonal entry " +
            format_entry(worst.row, worst.col, worst.value) +
            "; no reversible generator exists");
        return;
    }

    for (const auto &[i, j] : marginal) {
        report.warnings.push_back("marginal off-diagonal " +
                                  format_entry(i, j, h(i, j)) +
                                  " clamped to zero");
    }
    report.generator = validate_generator(clamped, 1e-10);
    report.verdict = Verdict::Embeddable;
    report.reasons.push_back(
        "reversibly embeddable: the candidate logarithm is a reversible "
        "generator");
}

// Polynomial-route cross-check; skipped when the Vandermonde system is
// too ill-conditioned to be meaningful.
void attach_crosscheck(EmbeddingReport &report, const StochasticMatrix &p,
                       const SpectralData &spec, const Matrix &h,
                       const EmbedOptions &opts) {
    try {
        LogCoefficients coeffs = log_coefficients(spec.gammas);
        report.coefficients = coeffs;
        if (coeffs.condition_estimate > opts.crosscheck_condition_limit) {
            std::ostringstream msg;
            msg << "polynomial cross-check skipped: Vandermonde condition "
                   "estimate "
                << coeffs.condition_estimate << " exceeds "
                << opts.crosscheck_condition_limit;
            report.warnings.push_back(msg.str());
            return;
        }
        report.crosscheck_gap =
            max_abs_diff(h, candidate_polynomial(p, coeffs));
    } catch (const SingularMatrixError &e) {
        report.warnings.push_back(
            std::string("polynomial cross-check skipped: ") + e.what());
    }
}

} // namespace

EmbeddingReport reversible_embedding(const StochasticMatrix &p,
                                     const EmbedOptions &opts) {
    EmbeddingReport report;
    report.n = p.dim();

    if (!is_irreducible(p)) {
        report.verdict = Verdict::NotIrreducible;
        report.reasons.push_back(
            "the directed graph of positive transition probabilities is "
            "not strongly connected");
        return report;
    }
    try {
        report.mu = invariant_distribution(p);
    } catch (const SingularMatrixError &e) {
        report.verdict = Verdict::NotIrreducible;
        report.reasons.push_back(
            std::string("invariant distribution is not well defined: ") +
            e.what());
        return report;
    }
    const ProbabilityDistribution &mu = *report.mu;

    double max_flux = 0.0, worst_defect = 0.0;
    int worst_i = 0, worst_j = 0;
    for (int i = 0; i < report.n; ++i) {
        for (int j = 0; j < report.n; ++j) {
            max_flux = std::max(max_flux, mu[i] * p(i, j));
        }
    }
    for (int i = 0; i < report.n; ++i) {
        for (int j = i + 1; j < report.n; ++j) {
            const double defect = std::abs(mu[i] * p(i, j) - mu[j] * p(j, i));
            if (defect > worst_defect) {
                worst_defect = defect;
                worst_i = i;
                worst_j = j;
            }
        }
    }
    if (worst_defect > opts.tol * max_flux) {
        report.verdict = Verdict::NotReversible;
        std::ostringstream msg;
        msg << "detailed balance fails: |mu_" << worst_i << " p_" << worst_i
            << worst_j << " - mu_" << worst_j << " p_" << worst_j << worst_i
            << "| = " << worst_defect << " exceeds " << opts.tol * max_flux;
        report.reasons.push_back(msg.str());
        return report;
    }

    SpectralData spec;
    try {
        spec = spectral_decompose(p, mu, opts.cluster_tol);
    } catch (const NotSymmetricError &e) {
        report.verdict = Verdict::NotReversible;
        report.reasons.push_back(
            std::string("symmetrization is not symmetric: ") + e.what());
        return report;
    }
    if (spec.clustering_ambiguous) {
        report.warnings.push_back(
            "an eigenvalue gap lies within a decade of cluster_tol; the "
            "distinct-eigenvalue count and the polynomial cross-check are "
            "sensitive to the clustering (the verdict is not: it uses the "
            "spectral candidate)");
    }
    report.spectral = spec;

    if (!check_positive_spectrum(spec, opts.positivity_tol)) {
        report.verdict = Verdict::NonpositiveEigenvalue;
        std::ostringstream msg;
        msg << "the spectrum is not strictly positive: smallest eigenvalue "
            << spec.lambdas.back();
        report.reasons.push_back(msg.str());
        return report;
    }

    const Matrix h = candidate_spectral(spec);
    attach_crosscheck(report, p, spec, h, opts);
    finish_candidate(report, p.matrix(), h, opts.tol);
    return report;
}

namespace {

// Spectral record for the closed-form criteria: eigenvalues and
// clustering only, factor matrices left empty.
SpectralData closed_form_spectral(const ProbabilityDistribution &mu,
                                  Vector lambdas, std::vector<double> gammas,
                                  std::vector<int> multiplicities) {
    SpectralData spec;
    spec.sqrt_mu.resize(mu.dim());
    for (int i = 0; i < mu.dim(); ++i) {
        spec.sqrt_mu[i] = std::sqrt(mu[i]);
    }
    spec.lambdas = std::move(lambdas);
    if (spec.lambdas.back() > 0.0) {
        for (double lambda : spec.lambdas) {
            spec.log_lambdas.push_back(std::log(lambda));
        }
    }
    spec.gammas = std::move(gammas);
    spec.multiplicities = std::move(multiplicities);
    return spec;
}

// log(lambda) / (lambda - 1), stable near lambda = 1.
double log_slope(double lambda) {
    const double u = lambda - 1.0;
    return u == 0.0 ? 1.0 : std::log1p(u) / u;
}

} // namespace

EmbeddingReport kendall_2x2(const StochasticMatrix &p,
                            const EmbedOptions &opts) {
    if (p.dim() != 2) {
        throw DimensionError("kendall_2x2: matrix must be 2x2");
    }
    EmbeddingReport report;
    report.n = 2;

    if (!(p(0, 1) > 0.0) || !(p(1, 0) > 0.0)) {
        report.verdict = Verdict::NotIrreducible;
        report.reasons.push_back("a 2x2 chain with a zero off-diagonal "
                                 "entry is not irreducible");
        return report;
    }
    const double a = p(0, 0);
    const double d = p(1, 1);
    const double denom = (1.0 - d) + (1.0 - a);
    report.mu =
        validate_distribution({(1.0 - d) / denom, (1.0 - a) / denom});

    const double lambda2 = a + d - 1.0; // trace criterion: tr(P) - 1
    report.spectral =
        closed_form_spectral(*report.mu, {1.0, lambda2}, {1.0, lambda2},
                             {1, 1});
    if (lambda2 <= opts.positivity_tol) {
        report.verdict = Verdict::NonpositiveEigenvalue;
        std::ostringstream msg;
        msg << "tr(P) = " << 1.0 + lambda2
            << " <= 1: the subdominant eigenvalue " << lambda2
            << " is not positive";
        report.reasons.push_back(msg.str());
        return report;
    }

    const double k1 = log_slope(lambda2);
    report.coefficients = LogCoefficients{{-k1, k1}, 0.0};
    Matrix h = p.matrix();
    h -= Matrix::identity(2);
    h *= k1;
    std::ostringstream msg;
    msg << "tr(P) = " << 1.0 + lambda2 << " > 1";
    report.reasons.push_back(msg.str());
    finish_candidate(report, p.matrix(), h, opts.tol);
    return report;
}

EmbeddingReport criterion_3x3(const StochasticMatrix &p,
                              const EmbedOptions &opts) {
    if (p.dim() != 3) {
        throw DimensionError("criterion_3x3: matrix must be 3x3");
    }
    EmbeddingReport report;
    report.n = 3;

    if (!is_irreducible(p)) {
        report.verdict = Verdict::NotIrreducible;
        report.reasons.push_back(
            "the directed graph of positive transition probabilities is "
            "not strongly connected");
        return report;
    }
    report.mu = invariant_distribution(p);

    if (!kolmogorov_triangle(p, opts.tol)) {
        report.verdict = Verdict::NotReversible;
        std::ostringstream msg;
        msg << "Kolmogorov cycle products differ: p12 p23 p31 = "
            << p(0, 1) * p(1, 2) * p(2, 0) << " vs p21 p32 p13 = "
            << p(1, 0) * p(2, 1) * p(0, 2);
        report.reasons.push_back(msg.str());
        return report;
    }

    // Subdominant eigenvalues from the characteristic polynomial:
    // lambda2 + lambda3 = tr - 1, lambda2 * lambda3 = det.
    const double b = p.matrix().trace() - 1.0;
    const double det =
        p(0, 0) * (p(1, 1) * p(2, 2) - p(1, 2) * p(2, 1)) -
        p(0, 1) * (p(1, 0) * p(2, 2) - p(1, 2) * p(2, 0)) +
        p(0, 2) * (p(1, 0) * p(2, 1) - p(1, 1) * p(2, 0));
    const double disc = b * b - 4.0 * det;
    const double gap = std::sqrt(std::max(disc, 0.0));
    const double lambda2 = 0.5 * (b + gap);
    const double lambda3 = 0.5 * (b - gap);

    const bool coincident = gap <= opts.cluster_tol;
    if (coincident) {
        report.spectral = closed_form_spectral(
            *report.mu, {1.0, lambda2, lambda3}, {1.0, 0.5 * b}, {1, 2});
    } else {
        report.spectral =
            closed_form_spectral(*report.mu, {1.0, lambda2, lambda3},
                                 {1.0, lambda2, lambda3}, {1, 1, 1});
    }

    if (lambda3 <= opts.positivity_tol) {
        report.verdict = Verdict::NonpositiveEigenvalue;
        std::ostringstream msg;
        msg << "the spectrum is not strictly positive: smallest eigenvalue "
            << lambda3;
        report.reasons.push_back(msg.str());
        return report;
    }

    if (coincident) {
        const double lambda = 0.5 * b;
        const double k1 = log_slope(lambda);
        report.coefficients = LogCoefficients{{-k1, k1}, 0.0};
        Matrix h = p.matrix();
        h -= Matrix::identity(3);
        h *= k1;
        report.reasons.push_back(
            "coincident subdominant eigenvalues: reversibility and a "
            "positive spectrum suffice");
        finish_candidate(report, p.matrix(), h, opts.tol);
    } else {
        const double lambda = lambda2;
        const double eta = lambda3;
        const double den =
            (lambda - 1.0) * (eta - 1.0) * (eta - lambda);
        const double k1 = ((eta * eta - 1.0) * std::log(lambda) -
                           (lambda * lambda - 1.0) * std::log(eta)) /
                          den;
        const double k2 = ((lambda - 1.0) * std::log(eta) -
                           (eta - 1.0) * std::log(lambda)) /
                          den;
        const double k0 = -k1 - k2;
        report.coefficients = LogCoefficients{{k0, k1, k2}, 0.0};
        const Matrix h = matrix_polynomial({k0, k1, k2}, p.matrix());
        report.reasons.push_back(
            "distinct subdominant eigenvalues: checking k1 p_ij + k2 "
            "p_ij^(2) >= 0 off the diagonal");
        finish_candidate(report, p.matrix(), h, opts.tol);
    }

    // Near the coincident/distinct boundary, report when the two
    // branches disagree instead of silently picking one.
    if (!coincident && gap <= 10.0 * opts.cluster_tol) {
        EmbedOptions merged = opts;
        merged.cluster_tol = gap * 1.0000001;
        const EmbeddingReport other = criterion_3x3(p, merged);
        if (other.verdict != report.verdict) {
            std::ostringstream msg;
            msg << "eigenvalue gap " << gap
                << " is within a decade of cluster_tol: the coincident "
                   "branch would return "
                << to_string(other.verdict) << " instead of "
                << to_string(report.verdict);
            report.warnings.push_back(msg.str());
        }
    }
    return report;
}

} // namespace revemb
