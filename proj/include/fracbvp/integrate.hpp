#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "fracbvp/power_term.hpp"

namespace fracbvp {

/// Piecewise-smooth scalar weight for quadrature (typically the diffusivity
/// or a product of nodal data with it).
struct PiecewiseFn {
    std::function<double(double)> eval;
    std::vector<double> breaks;  // interior breakpoints in (0,1)
    /// Returns the weight's value when it is constant on (a,b), nullopt otherwise.
    std::function<std::optional<double>(double, double)> cell_constant;

    static PiecewiseFn one();
};

struct QuadOptions {
    int n_smooth = 8;     // Gauss-Legendre nodes for analytic pieces
    int n_singular = 32;  // Gauss-Jacobi nodes when a weight exponent is active
};

/// Integral over [lo, hi] of F(x) * G(x) * W(x); G and W may be null.
/// Cells are split at every anchor and breakpoint, algebraic endpoint
/// factors are absorbed into Gauss-Jacobi weights (exactly when the rest
/// of the integrand is polynomial), and the computation falls back to the
/// exact per-term antiderivative whenever G and W are constant on a cell.
double integrate_product(const PowerTermSum& F, const PowerTermSum* G, const PiecewiseFn* W,
                         double lo, double hi, const QuadOptions& opt = {});

/// L2(0,1) inner product of two term sums.
double l2_inner(const PowerTermSum& a, const PowerTermSum& b, const QuadOptions& opt = {});

/// L2(0,1) norm of a term sum.
double l2_norm(const PowerTermSum& a, const QuadOptions& opt = {});

}  // namespace fracbvp
