#pragma once

#include <vector>

#include "fracbvp/power_term.hpp"

namespace fracbvp {

/// Piecewise polynomial on a subdivision 0 = b_0 < ... < b_m = 1.
/// Each piece is stored in the local coordinate xi = x - b_i for
/// conditioning; pieces need not match at interior breakpoints.
class PiecewisePoly {
public:
    PiecewisePoly() = default;
    PiecewisePoly(std::vector<double> breakpoints, std::vector<Polynomial> local_pieces);

    double operator()(double x) const;
    const std::vector<double>& breakpoints() const { return breaks_; }
    int piece_count() const { return static_cast<int>(pieces_.size()); }
    const Polynomial& piece(int i) const { return pieces_[i]; }
    int degree() const;

    PiecewisePoly derivative() const;
    PiecewisePoly reflected() const;
    bool continuous(double tol = 1e-12) const;

    /// Exact re-expression in the truncated power basis anchored on `side`.
    PowerTermSum to_power_sum(Side side = Side::Left) const;

    PiecewisePoly scaled(double c) const;

private:
    std::vector<double> breaks_;
    std::vector<Polynomial> pieces_;
    int cell_of(double x) const;
};

}  // namespace fracbvp
