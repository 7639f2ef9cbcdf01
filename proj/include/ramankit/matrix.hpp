#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ramankit {

/// Dense row-major matrix of doubles.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
    std::span<const double> row(std::size_t i) const {
        return {data.data() + i * cols, cols};
    }
};

/// Column means of an N x p matrix.
std::vector<double> column_means(const Matrix& m);

/// Column standard deviations (ddof = 1). Requires rows >= 2.
std::vector<double> column_stddevs(const Matrix& m, const std::vector<double>& means);

/// Symmetric product A^T A of the column-centered matrix.
Matrix centered_gram(const Matrix& m, const std::vector<double>& means);

/// Eigendecomposition of a real symmetric matrix.
/// Eigenvalues sorted in non-increasing order, eigenvectors as columns of
/// `vectors` (vectors.at(i, k) = i-th component of the k-th eigenvector).
struct SymmetricEigen {
    std::vector<double> values;
    Matrix vectors;
};

/// Householder tridiagonalization followed by implicit-shift QL.
/// `a` must be symmetric; only the full matrix storage is used.
SymmetricEigen symmetric_eigen(const Matrix& a);

/// Solves the square system a * x = b by Gaussian elimination with partial
/// pivoting. `a` is modified in place. Throws on (numerically) singular input.
std::vector<double> solve_linear(Matrix a, std::vector<double> b);

double dot(std::span<const double> a, std::span<const double> b);

}  // namespace ramankit
