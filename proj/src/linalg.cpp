#include "fracbvp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracbvp {

double Matrix::norm1() const {
    double best = 0.0;
    for (int j = 0; j < cols_; ++j) {
        double s = 0.0;
        for (int i = 0; i < rows_; ++i) s += std::fabs((*this)(i, j));
        best = std::max(best, s);
    }
    return best;
}

Matrix Matrix::transposed_times(const Matrix& other) const {
    if (rows_ != other.rows_) throw std::invalid_argument("transposed_times: shape mismatch");
    Matrix r(cols_, other.cols_);
    for (int k = 0; k < rows_; ++k)
        for (int i = 0; i < cols_; ++i) {
            const double aki = (*this)(k, i);
            if (aki == 0.0) continue;
            for (int j = 0; j < other.cols_; ++j) r(i, j) += aki * other(k, j);
        }
    return r;
}

std::vector<double> Matrix::transposed_times(std::span<const double> v) const {
    if (static_cast<int>(v.size()) != rows_)
        throw std::invalid_argument("transposed_times: length mismatch");
    std::vector<double> r(cols_, 0.0);
    for (int k = 0; k < rows_; ++k)
        for (int i = 0; i < cols_; ++i) r[i] += (*this)(k, i) * v[k];
    return r;
}

LuFactor::LuFactor(Matrix a) : lu_(std::move(a)), piv_(lu_.rows()) {
    const int n = lu_.rows();
    if (n != lu_.cols()) throw std::invalid_argument("LuFactor: square matrix required");
    for (int k = 0; k < n; ++k) {
        int p = k;
        double best = std::fabs(lu_(k, k));
        for (int i = k + 1; i < n; ++i)
            if (std::fabs(lu_(i, k)) > best) {
                best = std::fabs(lu_(i, k));
                p = i;
            }
        piv_[k] = p;
        if (best == 0.0) {
            singular_ = true;
            continue;
        }
        if (p != k)
            for (int j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
        const double inv = 1.0 / lu_(k, k);
        for (int i = k + 1; i < n; ++i) {
            const double m = lu_(i, k) * inv;
            lu_(i, k) = m;
            if (m == 0.0) continue;
            for (int j = k + 1; j < n; ++j) lu_(i, j) -= m * lu_(k, j);
        }
    }
}

std::vector<double> LuFactor::solve(std::span<const double> b) const {
    const int n = size();
    if (static_cast<int>(b.size()) != n) throw std::invalid_argument("LuFactor::solve: length");
    std::vector<double> x(b.begin(), b.end());
    for (int k = 0; k < n; ++k) {
        std::swap(x[k], x[piv_[k]]);
        for (int i = k + 1; i < n; ++i) x[i] -= lu_(i, k) * x[k];
    }
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
        x[i] /= lu_(i, i);
    }
    return x;
}

std::vector<double> LuFactor::solve_transposed(std::span<const double> b) const {
    const int n = size();
    std::vector<double> x(b.begin(), b.end());
    // Solve U^T y = b, then L^T z = y, then undo the row permutation.
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < i; ++j) x[i] -= lu_(j, i) * x[j];
        x[i] /= lu_(i, i);
    }
    for (int i = n - 1; i >= 0; --i)
        for (int j = i + 1; j < n; ++j) x[i] -= lu_(j, i) * x[j];
    for (int k = n - 1; k >= 0; --k) std::swap(x[k], x[piv_[k]]);
    return x;
}

double LuFactor::condition_estimate(double a_norm1) const {
    if (singular_) return HUGE_VAL;
    const int n = size();
    // Hager's power method on ||A^{-1}||_1.
    std::vector<double> x(n, 1.0 / n);
    double est = 0.0;
    for (int iter = 0; iter < 5; ++iter) {
        std::vector<double> y = solve(x);
        double y1 = 0.0;
        for (double v : y) y1 += std::fabs(v);
        est = std::max(est, y1);
        std::vector<double> xi(n);
        for (int i = 0; i < n; ++i) xi[i] = (y[i] >= 0.0) ? 1.0 : -1.0;
        std::vector<double> z = solve_transposed(xi);
        int jmax = 0;
        for (int i = 1; i < n; ++i)
            if (std::fabs(z[i]) > std::fabs(z[jmax])) jmax = i;
        if (std::fabs(z[jmax]) <= 1.0 + 1e-15) {
            double dot = 0.0;
            for (int i = 0; i < n; ++i) dot += z[i] * x[i];
            if (std::fabs(z[jmax]) <= std::fabs(dot)) break;
        }
        std::fill(x.begin(), x.end(), 0.0);
        x[jmax] = 1.0;
    }
    return est * a_norm1;
}

bool symmetric_part_positive_definite(const Matrix& a) {
    const int n = a.rows();
    if (n != a.cols()) throw std::invalid_argument("square matrix required");
    Matrix s(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
    // In-place Cholesky; failure of a pivot means an indefinite matrix.
    for (int k = 0; k < n; ++k) {
        double d = s(k, k);
        for (int j = 0; j < k; ++j) d -= s(k, j) * s(k, j);
        if (!(d > 0.0)) return false;
        const double r = std::sqrt(d);
        s(k, k) = r;
        for (int i = k + 1; i < n; ++i) {
            double v = s(i, k);
            for (int j = 0; j < k; ++j) v -= s(i, j) * s(k, j);
            s(i, k) = v / r;
        }
    }
    return true;
}

std::vector<double> thomas_solve(std::span<const double> sub, std::span<const double> diag,
                                 std::span<const double> super, std::span<const double> rhs) {
    const int n = static_cast<int>(diag.size());
    if (static_cast<int>(sub.size()) != n - 1 || static_cast<int>(super.size()) != n - 1 ||
        static_cast<int>(rhs.size()) != n)
        throw std::invalid_argument("thomas_solve: inconsistent lengths");
    std::vector<double> c(n - 1), d(n);
    double m = diag[0];
    if (m == 0.0) throw std::runtime_error("thomas_solve: zero pivot");
    d[0] = rhs[0] / m;
    if (n > 1) c[0] = super[0] / m;
    for (int i = 1; i < n; ++i) {
        m = diag[i] - sub[i - 1] * ((i - 1 < n - 1) ? c[i - 1] : 0.0);
        if (m == 0.0) throw std::runtime_error("thomas_solve: zero pivot");
        if (i < n - 1) c[i] = super[i] / m;
        d[i] = (rhs[i] - sub[i - 1] * d[i - 1]) / m;
    }
    for (int i = n - 2; i >= 0; --i) d[i] -= c[i] * d[i + 1];
    return d;
}

}  // namespace fracbvp
