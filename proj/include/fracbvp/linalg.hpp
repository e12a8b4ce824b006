#pragma once

#include <span>
#include <vector>

namespace fracbvp {

/// Row-major dense matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, 0.0) {}

    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double norm1() const;
    Matrix transposed_times(const Matrix& other) const;  // A^T * other
    std::vector<double> transposed_times(std::span<const double> v) const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

/// LU factorization with partial pivoting (square matrices).
class LuFactor {
public:
    explicit LuFactor(Matrix a);
    bool singular() const { return singular_; }
    std::vector<double> solve(std::span<const double> b) const;
    std::vector<double> solve_transposed(std::span<const double> b) const;
    /// Hager-style 1-norm condition estimate given ||A||_1.
    double condition_estimate(double a_norm1) const;
    int size() const { return lu_.rows(); }

private:
    Matrix lu_;
    std::vector<int> piv_;
    bool singular_ = false;
};

/// Cholesky success/failure as a positive-definiteness test of the
/// symmetrized matrix (A + A^T)/2.
bool symmetric_part_positive_definite(const Matrix& a);

/// Tridiagonal solve (Thomas): sub, diag, super of length n-1, n, n-1.
std::vector<double> thomas_solve(std::span<const double> sub, std::span<const double> diag,
                                 std::span<const double> super, std::span<const double> rhs);

}  // namespace fracbvp
