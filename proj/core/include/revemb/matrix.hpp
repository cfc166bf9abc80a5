// Copyright (c) the revemb authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "revemb/errors.hpp"

namespace revemb {

using Vector = std::vector<double>;

/// Dense square matrix of doubles, row-major.
class Matrix {
  public:
    Matrix() = default;
    explicit Matrix(int n, double value = 0.0);

    static Matrix identity(int n);

    int dim() const { return n_; }

    double &operator()(int i, int j) {
        return data_[static_cast<std::size_t>(i) * n_ + j];
    }
    double operator()(int i, int j) const {
        return data_[static_cast<std::size_t>(i) * n_ + j];
    }

    const std::vector<double> &data() const { return data_; }

    bool all_finite() const;
    double trace() const;
    Matrix transposed() const;

    Matrix &operator+=(const Matrix &other);
    Matrix &operator-=(const Matrix &other);
    Matrix &operator*=(double scalar);

    friend Matrix operator+(Matrix a, const Matrix &b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix &b) { return a -= b; }
    friend Matrix operator*(Matrix a, double s) { return a *= s; }
    friend Matrix operator*(double s, Matrix a) { return a *= s; }
    friend Matrix operator*(const Matrix &a, const Matrix &b);

    friend bool operator==(const Matrix &, const Matrix &) = default;

  private:
    int n_ = 0;
    std::vector<double> data_;
};

/// Row-vector times matrix (as in mu * P).
Vector operator*(const Vector &v, const Matrix &m);
/// Matrix times column vector.
Vector operator*(const Matrix &m, const Vector &v);

double inf_norm(const Matrix &m);   // max absolute row sum
double one_norm(const Matrix &m);   // max absolute column sum
double frobenius_norm(const Matrix &m);
double max_abs(const Matrix &m);
double inf_norm(const Vector &v);
double max_abs_diff(const Matrix &a, const Matrix &b);
bool all_finite(const Vector &v);

struct EigenDecomposition {
    Vector eigenvalues; // sorted descending
    Matrix rotation;    // orthogonal R with R * S * R^T = diag(eigenvalues)
};

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// The input must satisfy max|S_ij - S_ji| <= symmetry_tol * max|S|;
/// the residual asymmetry is averaged away before iterating. Converges
/// when the off-diagonal Frobenius norm drops below 1e-13 * ||S||_F,
/// with a cap of 100 sweeps.
EigenDecomposition symmetric_eigen(const Matrix &s, double symmetry_tol = 1e-8);

struct LinearSolution {
    Vector x;
    double condition_estimate = 0.0; // one-norm condition number estimate
    bool ill_conditioned = false;    // condition_estimate > 1e12
};

/// Solves A x = b by LU with partial pivoting. Throws SingularMatrixError
/// when a pivot falls below 1e-14 * ||A||_inf. The attached condition
/// estimate is a Hager-style one-norm lower bound.
LinearSolution solve_linear(const Matrix &a, const Vector &b);

/// Matrix exponential by scaling and squaring: the input is scaled by
/// 2^-s with s = max(0, ceil(log2 ||A||_1)), the exponential of the
/// scaled matrix is summed as a Taylor series to machine epsilon, and
/// the result is squared s times.
Matrix expm(const Matrix &a);

/// Evaluates sum_j coeffs[j] * P^j by Horner's scheme
/// (coeffs.size() - 1 matrix multiplications).
Matrix matrix_polynomial(const Vector &coeffs, const Matrix &p);

} // namespace revemb
