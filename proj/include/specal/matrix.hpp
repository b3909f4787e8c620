#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace specal {

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* row(std::size_t i) { return data_.data() + i * cols_; }
    const double* row(std::size_t i) const { return data_.data() + i * cols_; }
    std::span<const double> row_span(std::size_t i) const { return {row(i), cols_}; }
    std::span<double> row_span(std::size_t i) { return {row(i), cols_}; }

    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

    bool operator==(const Matrix& other) const = default;

    /// Rows selected by index, in the given order.
    Matrix take_rows(const std::vector<std::size_t>& idx) const;
    /// Columns selected by index, in the given order.
    Matrix take_cols(const std::vector<std::size_t>& idx) const;

    std::vector<double> col_means() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

/// Dot product with eight independent accumulators; the fixed summation
/// order is part of the function's contract (results are reproducible and
/// the pattern vectorizes without -ffast-math).
double dot(const double* a, const double* b, std::size_t n);
inline double dot(std::span<const double> a, std::span<const double> b) {
    return dot(a.data(), b.data(), a.size());
}

/// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);

double vec_mean(std::span<const double> v);
/// Sample standard deviation (n-1 denominator).
double vec_std(std::span<const double> v);

/// Solves A x = b by Gaussian elimination with partial pivoting.
/// A is consumed. Throws NumericError on a singular system.
std::vector<double> solve_dense(Matrix a, std::vector<double> b);

}  // namespace specal
