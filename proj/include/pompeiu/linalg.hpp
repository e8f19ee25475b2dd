#pragma once

#include <span>
#include <vector>

namespace pompeiu {

/// Dense row-major matrix of doubles. Small-scale workhorse for the
/// boundary-collocation systems; nothing here is tuned for large n.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0.0) {}

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    double& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
    std::span<double> row(int i) { return {data_.data() + static_cast<std::size_t>(i) * cols_, static_cast<std::size_t>(cols_)}; }
    std::span<const double> row(int i) const { return {data_.data() + static_cast<std::size_t>(i) * cols_, static_cast<std::size_t>(cols_)}; }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

struct LeastSquares {
    std::vector<double> solution;
    double residual_norm = 0.0;
};

/// Minimizer of ||Ax - b|| via Householder QR, m >= n. Throws
/// std::runtime_error when the column space is rank deficient
/// (min |R_kk| < 1e-12 max |R_kk|); callers must handle rank collapse.
LeastSquares least_squares_solve(const Matrix& a, std::span<const double> b);

/// Singular values (descending) and right singular vectors (columns of v)
/// by one-sided Jacobi, preceded by a QR compression for tall matrices.
struct SvdSpectrum {
    std::vector<double> singular_values;
    Matrix right_vectors;
};

SvdSpectrum svd_spectrum(const Matrix& a);

struct SmallestSingular {
    double value = 0.0;
    std::vector<double> right_vector;
};

SmallestSingular min_singular_value(const Matrix& a);

/// Lower Cholesky factor of a symmetric positive definite matrix; throws
/// std::runtime_error if a pivot is not strictly positive.
Matrix cholesky_lower(const Matrix& gram);

}  // namespace pompeiu
