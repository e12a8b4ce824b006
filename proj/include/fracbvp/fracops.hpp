#pragma once

#include <functional>
#include <span>

#include "fracbvp/piecewise_poly.hpp"
#include "fracbvp/power_term.hpp"

namespace fracbvp {

/// Order bookkeeping for fractional derivatives: mu = m - sigma with m a
/// positive integer and sigma in (0,1].
struct FracOrder {
    double mu = 0.0;
    int m = 0;
    double sigma = 0.0;

    static FracOrder derivative_order(double mu);
    static FracOrder integral_order(double sigma);
    bool integer() const;
};

/// Closed-form left Riemann-Liouville integral of order sigma in (0,1):
/// each term c (x-a)_+^p maps to c Gamma(p+1)/Gamma(p+1+sigma) (x-a)_+^{p+sigma}.
/// Terms anchored on the wrong side are re-anchored first (integer
/// exponents only; otherwise UnsupportedRepresentation).
PowerTermSum left_frac_integral(const PowerTermSum& w, double sigma);
PowerTermSum right_frac_integral(const PowerTermSum& w, double sigma);
PowerTermSum left_frac_integral(const PiecewisePoly& w, double sigma);
PowerTermSum right_frac_integral(const PiecewisePoly& w, double sigma);

/// Point evaluations with the domain contract 0 <= x <= 1.
double left_frac_integral_at(const PowerTermSum& w, double sigma, double x);
double right_frac_integral_at(const PowerTermSum& w, double sigma, double x);
double left_frac_integral_at(const PiecewisePoly& w, double sigma, double x);
double right_frac_integral_at(const PiecewisePoly& w, double sigma, double x);

/// Two-sided operator: theta * left + (1-theta) * right, beta in (0,1),
/// theta in [0,1]. The unused side is skipped for theta in {0,1}.
PowerTermSum two_sided_integral(const PowerTermSum& w, double beta, double theta);
PowerTermSum two_sided_integral(const PiecewisePoly& w, double beta, double theta);
double two_sided_integral_at(const PowerTermSum& w, double beta, double theta, double x);
double two_sided_integral_at(const PiecewisePoly& w, double beta, double theta, double x);

/// Caputo derivatives: fractional integral of an integer derivative.
PowerTermSum caputo_left(const PowerTermSum& w, double mu);
PowerTermSum caputo_right(const PowerTermSum& w, double mu);

/// D (theta lI^beta + (1-theta) rI^beta) w in closed form. When w vanishes
/// at both endpoints this commutes to the two-sided integral of Dw;
/// otherwise the integral's term sum is differentiated directly.
PowerTermSum rl_derivative_of_integral(const PowerTermSum& w, double beta, double theta);
PowerTermSum rl_derivative_of_integral(const PiecewisePoly& w, double beta, double theta);

/// Composite Gauss-Jacobi reference quadrature for the weakly singular
/// kernel; independent of the closed-form power-rule path. `breaks` lists
/// known non-smooth points of f. Left side integrates over (0,x), right
/// side over (x,1).
double oracle_frac_integral(const std::function<double(double)>& f, double sigma, double x,
                            int n_nodes, Side side = Side::Left,
                            std::span<const double> breaks = {});

}  // namespace fracbvp
