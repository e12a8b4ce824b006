#pragma once

#include <cstddef>
#include <vector>

namespace fracbvp {

/// Anchoring side of a truncated power term.
enum class Side { Left, Right };

/// One truncated power term on (0,1):
///   Left:  coeff * (x - anchor)^exponent  for x > anchor, else 0
///   Right: coeff * (anchor - x)^exponent  for x < anchor, else 0
/// Exponents are real and must exceed -1 so every term stays integrable.
/// Exponents in (-1, 0) mark a term singular at its anchor.
struct PowerTerm {
    double coeff;
    Side side;
    double anchor;
    double exponent;
};

/// Dense polynomial c0 + c1 x + c2 x^2 + ...
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs);

    double operator()(double x) const;
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    bool zero() const { return coeffs_.empty(); }

    Polynomial derivative() const;
    /// Q with Q(t) = P(t + a)  (coefficients about x = a when t = x - a).
    Polynomial taylor_shift(double a) const;
    /// Q with Q(t) = P(a - t)  (coefficients in powers of (a - x)).
    Polynomial reflect_shift(double a) const;

    Polynomial operator+(const Polynomial&) const;
    Polynomial operator-(const Polynomial&) const;
    Polynomial operator*(const Polynomial&) const;
    Polynomial scaled(double c) const;

private:
    std::vector<double> coeffs_;
    void trim();
};

/// Finite sum of truncated power terms; the closed-form family that is
/// stable under the operations used throughout: addition, scaling,
/// multiplication by a polynomial, differentiation, antidifferentiation,
/// and one-sided fractional integration (which shifts exponents).
class PowerTermSum {
public:
    PowerTermSum() = default;

    static PowerTermSum constant(double c);
    static PowerTermSum single(double coeff, Side side, double anchor, double exponent);
    /// Polynomial in x, expressed with left anchor 0.
    static PowerTermSum from_polynomial(const Polynomial& p);

    double operator()(double x) const;

    PowerTermSum& operator+=(const PowerTermSum& o);
    PowerTermSum operator+(const PowerTermSum& o) const;
    PowerTermSum operator-(const PowerTermSum& o) const;
    PowerTermSum scaled(double c) const;

    /// Termwise derivative. Interior jump terms (exponent 0 anchored
    /// strictly inside (0,1)) and terms whose derivative would not be
    /// integrable (exponent in (-1,0]) raise UnsupportedRepresentation.
    PowerTermSum derivative() const;

    /// F(x) = integral of this from 0 to x; always representable.
    PowerTermSum antiderivative() const;

    /// Exact integral over [a, b] (terms are clipped to their support).
    double integral_over(double a, double b) const;

    PowerTermSum times_polynomial(const Polynomial& p) const;

    /// Re-anchor every term on the requested side. Only terms with
    /// nonnegative integer exponents can switch sides; a fractional term
    /// already on the requested side passes through unchanged.
    PowerTermSum converted_to(Side target) const;

    /// Mirror image under x -> 1-x.
    PowerTermSum reflected() const;

    /// True when some term has a negative exponent (singular at anchor).
    bool singular_at_anchor() const;

    /// Combine terms whose (side, anchor, exponent) agree within 1e-12
    /// and drop exact zeros.
    void merge();

    /// Anchor coordinates strictly inside (lo, hi), sorted and deduplicated;
    /// the natural quadrature split points.
    std::vector<double> interior_anchors(double lo = 0.0, double hi = 1.0) const;

    const std::vector<PowerTerm>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    void add_term(double coeff, Side side, double anchor, double exponent);

private:
    std::vector<PowerTerm> terms_;
};

/// True if q is a nonnegative integer within merge tolerance.
bool is_nonneg_integer(double q);

}  // namespace fracbvp
