#include "fracbvp/power_term.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fracbvp/errors.hpp"

namespace fracbvp {

namespace {
constexpr double kExpTol = 1e-12;    // exponent/anchor merge tolerance
constexpr double kJumpTol = 1e-12;   // coefficient size that counts as a real jump

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}
}  // namespace

bool is_nonneg_integer(double q) {
    const double r = std::round(q);
    return r >= -0.5 && std::fabs(q - r) <= kExpTol;
}

// ---------------- Polynomial ----------------

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void Polynomial::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Polynomial::operator()(double x) const {
    double acc = 0.0;
    for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return Polynomial{};
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<double>(i);
    return Polynomial(std::move(d));
}

Polynomial Polynomial::taylor_shift(double a) const {
    // Q(t) = P(t + a) by repeated synthetic division.
    std::vector<double> c = coeffs_;
    const int n = static_cast<int>(c.size());
    for (int i = 0; i < n; ++i)
        for (int j = n - 2; j >= i; --j) c[j] += a * c[j + 1];
    return Polynomial(std::move(c));
}

Polynomial Polynomial::reflect_shift(double a) const {
    Polynomial q = taylor_shift(a);
    std::vector<double> c = q.coeffs_;
    for (std::size_t i = 1; i < c.size(); i += 2) c[i] = -c[i];
    return Polynomial(std::move(c));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    std::vector<double> c(std::max(coeffs_.size(), o.coeffs_.size()), 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) c[i] += coeffs_[i];
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) c[i] += o.coeffs_[i];
    return Polynomial(std::move(c));
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    return *this + o.scaled(-1.0);
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (coeffs_.empty() || o.coeffs_.empty()) return Polynomial{};
    std::vector<double> c(coeffs_.size() + o.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < o.coeffs_.size(); ++j) c[i + j] += coeffs_[i] * o.coeffs_[j];
    return Polynomial(std::move(c));
}

Polynomial Polynomial::scaled(double s) const {
    std::vector<double> c = coeffs_;
    for (double& v : c) v *= s;
    return Polynomial(std::move(c));
}

// ---------------- PowerTermSum ----------------

PowerTermSum PowerTermSum::constant(double c) {
    PowerTermSum s;
    if (c != 0.0) s.add_term(c, Side::Left, 0.0, 0.0);
    return s;
}

PowerTermSum PowerTermSum::single(double coeff, Side side, double anchor, double exponent) {
    if (exponent <= -1.0)
        throw UnsupportedRepresentation("power term exponent must exceed -1");
    PowerTermSum s;
    s.add_term(coeff, side, anchor, exponent);
    return s;
}

PowerTermSum PowerTermSum::from_polynomial(const Polynomial& p) {
    PowerTermSum s;
    const auto& c = p.coeffs();
    for (std::size_t k = 0; k < c.size(); ++k)
        if (c[k] != 0.0) s.add_term(c[k], Side::Left, 0.0, static_cast<double>(k));
    return s;
}

void PowerTermSum::add_term(double coeff, Side side, double anchor, double exponent) {
    if (coeff == 0.0) return;
    // Terms that vanish identically on (0,1).
    if (side == Side::Left && anchor >= 1.0 - kExpTol) return;
    if (side == Side::Right && anchor <= kExpTol) return;
    terms_.push_back(PowerTerm{coeff, side, anchor, exponent});
}

double PowerTermSum::operator()(double x) const {
    double acc = 0.0;
    for (const PowerTerm& t : terms_) {
        const double d = (t.side == Side::Left) ? x - t.anchor : t.anchor - x;
        if (d < 0.0) continue;
        if (d == 0.0) {
            if (t.exponent == 0.0) acc += t.coeff;
            else if (t.exponent < 0.0) return t.coeff > 0 ? HUGE_VAL : -HUGE_VAL;
            continue;
        }
        acc += t.coeff * std::pow(d, t.exponent);
    }
    return acc;
}

PowerTermSum& PowerTermSum::operator+=(const PowerTermSum& o) {
    terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
    merge();
    return *this;
}

PowerTermSum PowerTermSum::operator+(const PowerTermSum& o) const {
    PowerTermSum s = *this;
    s += o;
    return s;
}

PowerTermSum PowerTermSum::operator-(const PowerTermSum& o) const {
    PowerTermSum s = *this;
    s += o.scaled(-1.0);
    return s;
}

PowerTermSum PowerTermSum::scaled(double c) const {
    PowerTermSum s = *this;
    if (c == 0.0) {
        s.terms_.clear();
        return s;
    }
    for (PowerTerm& t : s.terms_) t.coeff *= c;
    return s;
}

PowerTermSum PowerTermSum::derivative() const {
    PowerTermSum s;
    for (const PowerTerm& t : terms_) {
        if (std::fabs(t.exponent) <= kExpTol) {
            const bool boundary_const =
                (t.side == Side::Left && t.anchor <= kExpTol) ||
                (t.side == Side::Right && t.anchor >= 1.0 - kExpTol);
            if (boundary_const || std::fabs(t.coeff) <= kJumpTol) continue;
            throw UnsupportedRepresentation(
                "derivative of an interior jump term is not representable");
        }
        if (t.exponent <= kExpTol && t.exponent > 0.0) continue;  // numerically zero power
        const double q = t.exponent - 1.0;
        if (q <= -1.0)
            throw UnsupportedRepresentation(
                "derivative would leave the integrable exponent range");
        const double sign = (t.side == Side::Left) ? 1.0 : -1.0;
        s.add_term(sign * t.coeff * t.exponent, t.side, t.anchor, q);
    }
    s.merge();
    return s;
}

PowerTermSum PowerTermSum::antiderivative() const {
    PowerTermSum s;
    for (const PowerTerm& t : terms_) {
        const double q1 = t.exponent + 1.0;
        if (t.side == Side::Left) {
            s.add_term(t.coeff / q1, Side::Left, t.anchor, q1);
        } else {
            // int_0^x c (p-s)_+^q ds = c p^{q1}/q1 - c (p-x)_+^{q1}/q1
            s.add_term(t.coeff * std::pow(t.anchor, q1) / q1, Side::Left, 0.0, 0.0);
            s.add_term(-t.coeff / q1, Side::Right, t.anchor, q1);
        }
    }
    s.merge();
    return s;
}

namespace {
// hi^q - lo^q for 0 <= lo <= hi, stable when hi is close to lo (thin
// certificate bands shrink the gap to ~1e-11 at O(1) offsets).
double pow_gap(double lo, double hi, double q) {
    if (lo <= 0.0) return std::pow(hi, q);
    const double r = (hi - lo) / lo;
    if (r > 0.25) return std::pow(hi, q) - std::pow(lo, q);
    return std::pow(lo, q) * std::expm1(q * std::log1p(r));
}
}  // namespace

double PowerTermSum::integral_over(double a, double b) const {
    if (!(b > a)) return 0.0;
    double acc = 0.0;
    for (const PowerTerm& t : terms_) {
        const double q1 = t.exponent + 1.0;
        if (t.side == Side::Left) {
            const double lo = std::max(a, t.anchor);
            if (lo >= b) continue;
            acc += t.coeff * pow_gap(lo - t.anchor, b - t.anchor, q1) / q1;
        } else {
            const double hi = std::min(b, t.anchor);
            if (hi <= a) continue;
            acc += t.coeff * pow_gap(t.anchor - hi, t.anchor - a, q1) / q1;
        }
    }
    return acc;
}

PowerTermSum PowerTermSum::times_polynomial(const Polynomial& p) const {
    PowerTermSum s;
    for (const PowerTerm& t : terms_) {
        const Polynomial local =
            (t.side == Side::Left) ? p.taylor_shift(t.anchor) : p.reflect_shift(t.anchor);
        const auto& c = local.coeffs();
        for (std::size_t j = 0; j < c.size(); ++j)
            if (c[j] != 0.0)
                s.add_term(t.coeff * c[j], t.side, t.anchor, t.exponent + static_cast<double>(j));
    }
    s.merge();
    return s;
}

PowerTermSum PowerTermSum::converted_to(Side target) const {
    PowerTermSum s;
    for (const PowerTerm& t : terms_) {
        if (t.side == target) {
            s.add_term(t.coeff, t.side, t.anchor, t.exponent);
            continue;
        }
        if (!is_nonneg_integer(t.exponent))
            throw UnsupportedRepresentation(
                "cannot re-anchor a fractional power term to the other side");
        const int k = static_cast<int>(std::round(t.exponent));
        if (t.side == Side::Left) {
            // (x-a)_+^k = sum_m C(k,m) (1-a)^{k-m} (-1)^m (1-x)^m - (-1)^k (a-x)_+^k
            for (int m = 0; m <= k; ++m) {
                const double c = t.coeff * binomial(k, m) * std::pow(1.0 - t.anchor, k - m) *
                                 ((m % 2) ? -1.0 : 1.0);
                s.add_term(c, Side::Right, 1.0, static_cast<double>(m));
            }
            s.add_term(-t.coeff * ((k % 2) ? -1.0 : 1.0), Side::Right, t.anchor,
                       static_cast<double>(k));
        } else {
            // (b-x)_+^k = sum_m C(k,m) b^{k-m} (-1)^m x^m - (-1)^k (x-b)_+^k
            for (int m = 0; m <= k; ++m) {
                const double c = t.coeff * binomial(k, m) * std::pow(t.anchor, k - m) *
                                 ((m % 2) ? -1.0 : 1.0);
                s.add_term(c, Side::Left, 0.0, static_cast<double>(m));
            }
            s.add_term(-t.coeff * ((k % 2) ? -1.0 : 1.0), Side::Left, t.anchor,
                       static_cast<double>(k));
        }
    }
    s.merge();
    return s;
}

PowerTermSum PowerTermSum::reflected() const {
    PowerTermSum s;
    for (const PowerTerm& t : terms_) {
        const Side side = (t.side == Side::Left) ? Side::Right : Side::Left;
        s.add_term(t.coeff, side, 1.0 - t.anchor, t.exponent);
    }
    return s;
}

bool PowerTermSum::singular_at_anchor() const {
    for (const PowerTerm& t : terms_)
        if (t.exponent < 0.0) return true;
    return false;
}

void PowerTermSum::merge() {
    std::sort(terms_.begin(), terms_.end(), [](const PowerTerm& a, const PowerTerm& b) {
        if (a.side != b.side) return a.side == Side::Left;
        if (std::fabs(a.anchor - b.anchor) > kExpTol) return a.anchor < b.anchor;
        return a.exponent < b.exponent - kExpTol;
    });
    std::vector<PowerTerm> out;
    for (const PowerTerm& t : terms_) {
        if (!out.empty()) {
            PowerTerm& last = out.back();
            if (last.side == t.side && std::fabs(last.anchor - t.anchor) <= kExpTol &&
                std::fabs(last.exponent - t.exponent) <= kExpTol) {
                last.coeff += t.coeff;
                continue;
            }
        }
        out.push_back(t);
    }
    std::erase_if(out, [](const PowerTerm& t) { return t.coeff == 0.0; });
    terms_ = std::move(out);
}

std::vector<double> PowerTermSum::interior_anchors(double lo, double hi) const {
    std::vector<double> pts;
    for (const PowerTerm& t : terms_)
        if (t.anchor > lo + kExpTol && t.anchor < hi - kExpTol) pts.push_back(t.anchor);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](double a, double b) { return std::fabs(a - b) <= kExpTol; }),
              pts.end());
    return pts;
}

}  // namespace fracbvp
