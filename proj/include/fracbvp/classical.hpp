#pragma once

#include <memory>
#include <vector>

#include "fracbvp/integrate.hpp"
#include "fracbvp/power_term.hpp"
#include "fracbvp/spaces.hpp"

namespace fracbvp {

/// The diffusivity coefficient K(x) with verified positive bounds.
class DiffusivityField {
public:
    enum class Kind { Constant, PiecewiseConstant, Polynomial, Tabulated };

    static DiffusivityField constant(double value);
    /// `breaks` are the interior jump locations, strictly increasing in (0,1);
    /// `values` has one more entry than `breaks`.
    static DiffusivityField piecewise_constant(std::vector<double> breaks,
                                               std::vector<double> values);
    static DiffusivityField polynomial(std::vector<double> coeffs);
    /// Tabulated samples; 1/K is interpolated piecewise-linearly between
    /// nodes, which keeps the resistivity integral free of artifacts.
    static DiffusivityField tabulated(std::vector<double> nodes, std::vector<double> values);

    double operator()(double x) const;
    Kind kind() const { return kind_; }
    bool is_constant() const { return kind_ == Kind::Constant; }
    std::pair<double, double> bounds() const { return {k_min_, k_max_}; }
    const std::vector<double>& breakpoints() const { return breaks_; }

    /// d^k/dx^k (1/K) away from breakpoints. Exact for constant and
    /// polynomial kinds; k >= 2 on non-smooth kinds raises
    /// UnsupportedRepresentation.
    double inv_derivative(int k, double x) const;

    const Polynomial& polynomial_coeffs() const;

    PiecewiseFn to_weight() const;          // K itself
    PiecewiseFn to_inverse_weight() const;  // 1/K

private:
    Kind kind_ = Kind::Constant;
    double value_ = 1.0;
    std::vector<double> breaks_;           // interior breakpoints
    std::vector<double> piece_values_;     // piecewise-constant values
    Polynomial poly_;                      // polynomial kind
    std::vector<double> tab_nodes_, tab_inv_values_;  // tabulated 1/K samples
    double k_min_ = 0.0, k_max_ = 0.0;
    mutable std::vector<Polynomial> inv_numerators_;  // P_k with (1/K)^(k) = P_k / K^{k+1}

    void verify_bounds();
    double eval_tabulated_inv(double x) const;
};

/// Resistivity R(x) = int_0^x ds / K(s); increasing, R(0) = 0.
class HarmonicProfile {
public:
    explicit HarmonicProfile(const DiffusivityField& K);
    double operator()(double x) const;
    double total() const { return total_; }

private:
    const DiffusivityField* K_;
    std::vector<double> breaks_;  // 0 ... 1 including K breakpoints
    std::vector<double> cum_;     // R at breaks_
    double total_ = 0.0;
    double partial(double a, double b) const;
};

/// Closed-form boundary-layer solutions of the homogeneous second-order
/// problems: w_l falls 1 -> 0, w_r rises 0 -> 1, K (w')' = 0.
class HarmonicPair {
public:
    explicit HarmonicPair(const DiffusivityField& K);

    double wl(double x) const { return 1.0 - wr(x); }
    double wr(double x) const { return R_(x) / R_.total(); }
    double dwr(double x) const { return 1.0 / (R_.total() * (*K_)(x)); }
    double dwl(double x) const { return -dwr(x); }
    /// k-th derivative for k >= 1 (zero-th is the value itself).
    double dk_wr(int k, double x) const;
    double dk_wl(int k, double x) const { return -dk_wr(k, x); }
    double resistivity_total() const { return R_.total(); }
    const HarmonicProfile& resistivity() const { return R_; }

private:
    const DiffusivityField* K_;
    HarmonicProfile R_;
};

HarmonicPair solve_wl_wr(const DiffusivityField& K);

/// w_f: the zero-boundary solution of (K w')' = -f in weak form, realized
/// by exact double integration: w_f(x) = int_0^x (c - F)/K with F = int f
/// and c chosen so w_f(1) = 0.
class SourceProfile {
public:
    SourceProfile(const DiffusivityField& K, const PowerTermSum& f);

    double operator()(double x) const;
    double dwf(double x) const;
    /// k-th derivative for k >= 1; may raise UnsupportedRepresentation
    /// when f leaves the algebra under differentiation.
    double dk_wf(int k, double x) const;
    double flux_constant() const { return c_; }
    const PowerTermSum& f_antiderivative() const { return F_; }

private:
    const DiffusivityField* K_;
    PowerTermSum f_;
    PowerTermSum F_;
    double c_ = 0.0;
    HarmonicProfile R_;
    std::vector<double> breaks_;
    std::vector<double> cum_;  // int_0^b F/K at breakpoints
    mutable std::vector<PowerTermSum> f_derivs_;
    double partial(double a, double b) const;
};

SourceProfile solve_wf(const DiffusivityField& K, const PowerTermSum& f);

/// Reference discrete path: hat-function FEM for (K w', v') = <f, v>.
GridFunction fem_second_order(const DiffusivityField& K, const PowerTermSum& f,
                              std::shared_ptr<const FemSpace> space);

}  // namespace fracbvp
