// Copyright (c) the revemb authors.
// SPDX-License-Identifier: Apache-2.0

#include "revemb/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace revemb {

namespace {

constexpr double kPivotRelThreshold = 1e-14;
constexpr double kIllConditionedLimit = 1e12;
constexpr double kJacobiRelTarget = 1e-13;
constexpr int kJacobiMaxSweeps = 100;

void require_same_dim(const Matrix &a, const Matrix &b, const char *op) {
    if (a.dim() != b.dim()) {
        std::ostringstream msg;
        msg << op << ": dimension mismatch (" << a.dim() << " vs " << b.dim()
            << ")";
        throw DimensionError(msg.str());
    }
}

} // namespace

Matrix::Matrix(int n, double value)
    : n_(n), data_(static_cast<std::size_t>(n) * n, value) {
    if (n < 0) {
        throw DimensionError("matrix dimension must be nonnegative");
    }
}

Matrix Matrix::identity(int n) {
    Matrix m(n);
    for (int i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

bool Matrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](double v) { return std::isfinite(v); });
}

double Matrix::trace() const {
    double t = 0.0;
    for (int i = 0; i < n_; ++i) {
        t += (*this)(i, i);
    }
    return t;
}

Matrix Matrix::transposed() const {
    Matrix t(n_);
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            t(j, i) = (*this)(i, j);
        }
    }
    return t;
}

Matrix &Matrix::operator+=(const Matrix &other) {
    require_same_dim(*this, other, "matrix add");
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] += other.data_[i];
    }
    return *this;
}

Matrix &Matrix::operator-=(const Matrix &other) {
    require_same_dim(*this, other, "matrix subtract");
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] -= other.data_[i];
    }
    return *this;
}

Matrix &Matrix::operator*=(double scalar) {
    for (double &v : data_) {
        v *= scalar;
    }
    return *this;
}

Matrix operator*(const Matrix &a, const Matrix &b) {
    require_same_dim(a, b, "matrix multiply");
    const int n = a.dim();
    Matrix c(n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) {
                continue;
            }
            for (int j = 0; j < n; ++j) {
                c(i, j) += aik * b(k, j);
            }
        }
    }
    return c;
}

Vector operator*(const Vector &v, const Matrix &m) {
    const int n = m.dim();
    if (static_cast<int>(v.size()) != n) {
        throw DimensionError("vector-matrix product: dimension mismatch");
    }
    Vector out(v.size(), 0.0);
    for (int i = 0; i < n; ++i) {
        const double vi = v[i];
        for (int j = 0; j < n; ++j) {
            out[j] += vi * m(i, j);
        }
    }
    return out;
}

Vector operator*(const Matrix &m, const Vector &v) {
    const int n = m.dim();
    if (static_cast<int>(v.size()) != n) {
        throw DimensionError("matrix-vector product: dimension mismatch");
    }
    Vector out(v.size(), 0.0);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) {
            s += m(i, j) * v[j];
        }
        out[i] = s;
    }
    return out;
}

double inf_norm(const Matrix &m) {
    double worst = 0.0;
    for (int i = 0; i < m.dim(); ++i) {
        double row = 0.0;
        for (int j = 0; j < m.dim(); ++j) {
            row += std::abs(m(i, j));
        }
        worst = std::max(worst, row);
    }
    return worst;
}

double one_norm(const Matrix &m) {
    double worst = 0.0;
    for (int j = 0; j < m.dim(); ++j) {
        double col = 0.0;
        for (int i = 0; i < m.dim(); ++i) {
            col += std::abs(m(i, j));
        }
        worst = std::max(worst, col);
    }
    return worst;
}

double frobenius_norm(const Matrix &m) {
    double sum = 0.0;
    for (double v : m.data()) {
        sum += v * v;
    }
    return std::sqrt(sum);
}

double max_abs(const Matrix &m) {
    double worst = 0.0;
    for (double v : m.data()) {
        worst = std::max(worst, std::abs(v));
    }
    return worst;
}

double inf_norm(const Vector &v) {
    double worst = 0.0;
    for (double x : v) {
        worst = std::max(worst, std::abs(x));
    }
    return worst;
}

double max_abs_diff(const Matrix &a, const Matrix &b) {
    require_same_dim(a, b, "max_abs_diff");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
    }
    return worst;
}

bool all_finite(const Vector &v) {
    return std::all_of(v.begin(), v.end(),
                       [](double x) { return std::isfinite(x); });
}

EigenDecomposition symmetric_eigen(const Matrix &s, double symmetry_tol) {
    const int n = s.dim();
    if (!s.all_finite()) {
        throw Error("symmetric_eigen: input has non-finite entries");
    }

    const double scale = max_abs(s);
    double asym = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            asym = std::max(asym, std::abs(s(i, j) - s(j, i)));
        }
    }
    if (asym > symmetry_tol * std::max(scale, 1e-300)) {
        std::ostringstream msg;
        msg << "symmetric_eigen: asymmetry " << asym << " exceeds tolerance "
            << symmetry_tol * scale;
        throw NotSymmetricError(msg.str());
    }

    // Work on the symmetric average; residual asymmetry is below tolerance.
    Matrix a(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            a(i, j) = 0.5 * (s(i, j) + s(j, i));
        }
    }

    Matrix v = Matrix::identity(n);
    const double target = kJacobiRelTarget * frobenius_norm(a);

    auto off_diagonal_norm = [&]() {
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                sum += a(i, j) * a(i, j);
            }
        }
        return std::sqrt(2.0 * sum);
    };

    bool converged = off_diagonal_norm() <= target;
    for (int sweep = 0; sweep < kJacobiMaxSweeps && !converged; ++sweep) {
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) {
                    continue;
                }
                const double app = a(p, p);
                const double aqq = a(q, q);
                const double theta = 0.5 * (aqq - app) / apq;
                double t;
                if (std::abs(theta) > 1e154) {
                    t = 0.5 / theta; // avoid overflow in theta^2
                } else {
                    t = (theta >= 0.0 ? 1.0 : -1.0) /
                        (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;

                for (int j = 0; j < n; ++j) {
                    if (j == p || j == q) {
                        continue;
                    }
                    const double apj = a(p, j);
                    const double aqj = a(q, j);
                    a(p, j) = c * apj - sn * aqj;
                    a(j, p) = a(p, j);
                    a(q, j) = sn * apj + c * aqj;
                    a(j, q) = a(q, j);
                }
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;

                for (int i = 0; i < n; ++i) {
                    const double vip = v(i, p);
                    const double viq = v(i, q);
                    v(i, p) = c * vip - sn * viq;
                    v(i, q) = sn * vip + c * viq;
                }
            }
        }
        converged = off_diagonal_norm() <= target;
    }
    if (!converged) {
        throw ConvergenceError("symmetric_eigen: Jacobi iteration did not "
                               "converge within 100 sweeps");
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, i) > a(j, j); });

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.rotation = Matrix(n);
    for (int k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]);
        for (int j = 0; j < n; ++j) {
            out.rotation(k, j) = v(j, order[k]);
        }
    }
    return out;
}

namespace {

// LU factorization with partial pivoting: row piv[i] of the input ends up
// as row i of the packed L\U factors.
struct LuFactors {
    Matrix lu;
    std::vector<int> piv;
    double input_inf_norm = 0.0;
    double input_one_norm = 0.0;

    explicit LuFactors(const Matrix &a)
        : lu(a), piv(a.dim()), input_inf_norm(inf_norm(a)),
          input_one_norm(one_norm(a)) {
        const int n = a.dim();
        const double threshold =
            kPivotRelThreshold * std::max(input_inf_norm, 1e-300);
        std::iota(piv.begin(), piv.end(), 0);
        for (int k = 0; k < n; ++k) {
            int p = k;
            for (int i = k + 1; i < n; ++i) {
                if (std::abs(lu(i, k)) > std::abs(lu(p, k))) {
                    p = i;
                }
            }
            if (std::abs(lu(p, k)) < threshold) {
                std::ostringstream msg;
                msg << "solve_linear: pivot " << std::abs(lu(p, k))
                    << " below singularity threshold at column " << k;
                throw SingularMatrixError(msg.str());
            }
            if (p != k) {
                std::swap(piv[p], piv[k]);
                for (int j = 0; j < n; ++j) {
                    std::swap(lu(p, j), lu(k, j));
                }
            }
            const double pivot = lu(k, k);
            for (int i = k + 1; i < n; ++i) {
                lu(i, k) /= pivot;
                const double lik = lu(i, k);
                if (lik == 0.0) {
                    continue;
                }
                for (int j = k + 1; j < n; ++j) {
                    lu(i, j) -= lik * lu(k, j);
                }
            }
        }
    }

    Vector solve(const Vector &b) const {
        const int n = lu.dim();
        Vector x(n);
        for (int i = 0; i < n; ++i) {
            x[i] = b[piv[i]];
        }
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < i; ++j) {
                x[i] -= lu(i, j) * x[j];
            }
        }
        for (int i = n - 1; i >= 0; --i) {
            for (int j = i + 1; j < n; ++j) {
                x[i] -= lu(i, j) * x[j];
            }
            x[i] /= lu(i, i);
        }
        return x;
    }

    // Solves A^T z = c using A^T = U^T L^T P.
    Vector solve_transpose(const Vector &c) const {
        const int n = lu.dim();
        Vector w(c);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < i; ++j) {
                w[i] -= lu(j, i) * w[j];
            }
            w[i] /= lu(i, i);
        }
        for (int i = n - 1; i >= 0; --i) {
            for (int j = i + 1; j < n; ++j) {
                w[i] -= lu(j, i) * w[j];
            }
        }
        Vector z(n);
        for (int i = 0; i < n; ++i) {
            z[piv[i]] = w[i];
        }
        return z;
    }

    // Hager's one-norm estimate of ||A^-1||_1 times ||A||_1.
    double condition_estimate() const {
        const int n = lu.dim();
        if (n == 0) {
            return 0.0;
        }
        Vector x(n, 1.0 / n);
        double estimate = 0.0;
        for (int iter = 0; iter < 5; ++iter) {
            const Vector y = solve(x);
            double y1 = 0.0;
            for (double v : y) {
                y1 += std::abs(v);
            }
            estimate = std::max(estimate, y1);
            Vector xi(n);
            for (int i = 0; i < n; ++i) {
                xi[i] = y[i] >= 0.0 ? 1.0 : -1.0;
            }
            const Vector z = solve_transpose(xi);
            int j = 0;
            for (int i = 1; i < n; ++i) {
                if (std::abs(z[i]) > std::abs(z[j])) {
                    j = i;
                }
            }
            double zx = 0.0;
            for (int i = 0; i < n; ++i) {
                zx += z[i] * x[i];
            }
            if (std::abs(z[j]) <= zx) {
                break;
            }
            std::fill(x.begin(), x.end(), 0.0);
            x[j] = 1.0;
        }
        return estimate * input_one_norm;
    }
};

} // namespace

LinearSolution solve_linear(const Matrix &a, const Vector &b) {
    if (static_cast<int>(b.size()) != a.dim()) {
        throw DimensionError("solve_linear: right-hand side length mismatch");
    }
    const LuFactors factors(a);
    LinearSolution out;
    out.x = factors.solve(b);
    out.condition_estimate = factors.condition_estimate();
    out.ill_conditioned = out.condition_estimate > kIllConditionedLimit;
    return out;
}

Matrix expm(const Matrix &a) {
    if (!a.all_finite()) {
        throw Error("expm: input has non-finite entries");
    }
    const int n = a.dim();
    const double norm = one_norm(a);
    int squarings = 0;
    if (norm > 1.0) {
        squarings = static_cast<int>(std::ceil(std::log2(norm)));
    }

    Matrix scaled(a);
    scaled *= std::ldexp(1.0, -squarings);

    Matrix result = Matrix::identity(n);
    Matrix term = Matrix::identity(n);
    const double eps = std::numeric_limits<double>::epsilon();
    for (int k = 1; k <= 80; ++k) {
        term = term * scaled;
        term *= 1.0 / k;
        result += term;
        if (one_norm(term) <= eps * one_norm(result)) {
            break;
        }
    }
    for (int i = 0; i < squarings; ++i) {
        result = result * result;
    }
    return result;
}

Matrix matrix_polynomial(const Vector &coeffs, const Matrix &p) {
    if (coeffs.empty()) {
        throw Error("matrix_polynomial: at least one coefficient required");
    }
    const int n = p.dim();
    const int m = static_cast<int>(coeffs.size());
    Matrix result = Matrix::identity(n);
    result *= coeffs[m - 1];
    for (int j = m - 2; j >= 0; --j) {
        result = result * p;
        for (int i = 0; i < n; ++i) {
            result(i, i) += coeffs[j];
        }
    }
    return result;
}

} // namespace revemb
