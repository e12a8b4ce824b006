#include "fracbvp/classical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fracbvp/errors.hpp"
#include "fracbvp/linalg.hpp"
#include "fracbvp/quadrature.hpp"

namespace fracbvp {

// ---------------- DiffusivityField ----------------

DiffusivityField DiffusivityField::constant(double value) {
    DiffusivityField k;
    k.kind_ = Kind::Constant;
    k.value_ = value;
    k.poly_ = Polynomial({value});
    k.verify_bounds();
    return k;
}

DiffusivityField DiffusivityField::piecewise_constant(std::vector<double> breaks,
                                                      std::vector<double> values) {
    if (values.size() != breaks.size() + 1)
        throw std::invalid_argument("piecewise_constant: need one more value than breaks");
    for (std::size_t i = 0; i < breaks.size(); ++i) {
        if (breaks[i] <= 0.0 || breaks[i] >= 1.0)
            throw std::invalid_argument("piecewise_constant: breaks must lie inside (0,1)");
        if (i > 0 && breaks[i] <= breaks[i - 1])
            throw std::invalid_argument("piecewise_constant: breaks must be strictly increasing");
    }
    DiffusivityField k;
    k.kind_ = Kind::PiecewiseConstant;
    k.breaks_ = std::move(breaks);
    k.piece_values_ = std::move(values);
    k.verify_bounds();
    return k;
}

DiffusivityField DiffusivityField::polynomial(std::vector<double> coeffs) {
    DiffusivityField k;
    k.kind_ = Kind::Polynomial;
    k.poly_ = Polynomial(std::move(coeffs));
    k.verify_bounds();
    return k;
}

DiffusivityField DiffusivityField::tabulated(std::vector<double> nodes,
                                             std::vector<double> values) {
    if (nodes.size() != values.size() || nodes.size() < 2)
        throw std::invalid_argument("tabulated: need matching nodes/values, at least two");
    if (std::fabs(nodes.front()) > 1e-12 || std::fabs(nodes.back() - 1.0) > 1e-12)
        throw std::invalid_argument("tabulated: nodes must span [0,1]");
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (!(nodes[i] > nodes[i - 1]))
            throw std::invalid_argument("tabulated: nodes must be strictly increasing");
    DiffusivityField k;
    k.kind_ = Kind::Tabulated;
    k.tab_nodes_ = std::move(nodes);
    k.tab_inv_values_.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0)) throw std::domain_error("tabulated: values must be positive");
        k.tab_inv_values_[i] = 1.0 / values[i];
    }
    k.breaks_.assign(k.tab_nodes_.begin() + 1, k.tab_nodes_.end() - 1);
    k.verify_bounds();
    return k;
}

void DiffusivityField::verify_bounds() {
    constexpr int kSamples = 1024;
    double lo = HUGE_VAL, hi = 0.0;
    for (int i = 0; i <= kSamples; ++i) {
        const double x = static_cast<double>(i) / kSamples;
        const double v = (*this)(x);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    // Piecewise kinds attain their bounds on the sample grid only up to
    // placement; include the exact piece values.
    if (kind_ == Kind::PiecewiseConstant)
        for (double v : piece_values_) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (!(lo > 0.0) || !std::isfinite(hi))
        throw std::domain_error("diffusivity must have positive finite bounds");
    k_min_ = lo;
    k_max_ = hi;
}

double DiffusivityField::eval_tabulated_inv(double x) const {
    const auto& n = tab_nodes_;
    if (x <= n.front()) return tab_inv_values_.front();
    if (x >= n.back()) return tab_inv_values_.back();
    const auto it = std::upper_bound(n.begin(), n.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - n.begin()) - 1;
    const double t = (x - n[i]) / (n[i + 1] - n[i]);
    return tab_inv_values_[i] * (1.0 - t) + tab_inv_values_[i + 1] * t;
}

double DiffusivityField::operator()(double x) const {
    switch (kind_) {
        case Kind::Constant:
            return value_;
        case Kind::PiecewiseConstant: {
            const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
            return piece_values_[static_cast<std::size_t>(it - breaks_.begin())];
        }
        case Kind::Polynomial:
            return poly_(x);
        case Kind::Tabulated:
            return 1.0 / eval_tabulated_inv(x);
    }
    return value_;
}

double DiffusivityField::inv_derivative(int k, double x) const {
    if (k < 0) throw std::invalid_argument("inv_derivative: negative order");
    if (k == 0) return 1.0 / (*this)(x);
    switch (kind_) {
        case Kind::Constant:
            return 0.0;
        case Kind::PiecewiseConstant:
            return 0.0;  // away from breakpoints
        case Kind::Tabulated: {
            if (k >= 2)
                throw UnsupportedRepresentation(
                    "tabulated diffusivity has no derivatives beyond the first");
            const auto it = std::upper_bound(tab_nodes_.begin(), tab_nodes_.end(), x);
            std::size_t i = static_cast<std::size_t>(it - tab_nodes_.begin());
            i = (i == 0) ? 0 : i - 1;
            i = std::min(i, tab_nodes_.size() - 2);
            return (tab_inv_values_[i + 1] - tab_inv_values_[i]) /
                   (tab_nodes_[i + 1] - tab_nodes_[i]);
        }
        case Kind::Polynomial: {
            // (1/K)^(k) = P_k / K^{k+1}, P_0 = 1, P_{k+1} = P_k' K - (k+1) P_k K'.
            if (inv_numerators_.empty()) inv_numerators_.push_back(Polynomial({1.0}));
            while (static_cast<int>(inv_numerators_.size()) <= k) {
                const int j = static_cast<int>(inv_numerators_.size()) - 1;
                const Polynomial& pj = inv_numerators_[j];
                inv_numerators_.push_back(pj.derivative() * poly_ -
                                          pj.scaled(static_cast<double>(j + 1)) *
                                              poly_.derivative());
            }
            const double kx = poly_(x);
            return inv_numerators_[k](x) / std::pow(kx, k + 1);
        }
    }
    return 0.0;
}

const Polynomial& DiffusivityField::polynomial_coeffs() const {
    if (kind_ == Kind::Polynomial || kind_ == Kind::Constant) return poly_;
    throw UnsupportedRepresentation("diffusivity is not a polynomial");
}

PiecewiseFn DiffusivityField::to_weight() const {
    PiecewiseFn w;
    w.eval = [this](double x) { return (*this)(x); };
    w.breaks = breaks_;
    if (kind_ == Kind::Constant) {
        const double v = value_;
        w.cell_constant = [v](double, double) { return std::optional<double>(v); };
    } else if (kind_ == Kind::PiecewiseConstant) {
        w.cell_constant = [this](double a, double b) -> std::optional<double> {
            const double mid = 0.5 * (a + b);
            for (double br : breaks_)
                if (br > a + 1e-14 && br < b - 1e-14) return std::nullopt;
            return (*this)(mid);
        };
    }
    return w;
}

PiecewiseFn DiffusivityField::to_inverse_weight() const {
    PiecewiseFn w = to_weight();
    w.eval = [this](double x) { return 1.0 / (*this)(x); };
    if (w.cell_constant) {
        auto base = w.cell_constant;
        w.cell_constant = [base](double a, double b) -> std::optional<double> {
            const auto v = base(a, b);
            if (!v) return std::nullopt;
            return 1.0 / *v;
        };
    }
    return w;
}

// ---------------- HarmonicProfile ----------------

HarmonicProfile::HarmonicProfile(const DiffusivityField& K) : K_(&K) {
    breaks_.push_back(0.0);
    for (double b : K.breakpoints()) breaks_.push_back(b);
    breaks_.push_back(1.0);
    cum_.resize(breaks_.size(), 0.0);
    for (std::size_t i = 1; i < breaks_.size(); ++i)
        cum_[i] = cum_[i - 1] + partial(breaks_[i - 1], breaks_[i]);
    total_ = cum_.back();
}

double HarmonicProfile::partial(double a, double b) const {
    if (!(b > a)) return 0.0;
    switch (K_->kind()) {
        case DiffusivityField::Kind::Constant:
        case DiffusivityField::Kind::PiecewiseConstant:
            return (b - a) / (*K_)(0.5 * (a + b));
        case DiffusivityField::Kind::Tabulated: {
            // 1/K piecewise linear: exact trapezoid between tabulated nodes.
            const double fa = K_->inv_derivative(0, a), fb = K_->inv_derivative(0, b);
            return 0.5 * (fa + fb) * (b - a);
        }
        case DiffusivityField::Kind::Polynomial:
            return weighted_integral(a, b, 0.0, 0.0, 48,
                                     [this](double s) { return 1.0 / (*K_)(s); });
    }
    return 0.0;
}

double HarmonicProfile::operator()(double x) const {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return total_;
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - breaks_.begin()) - 1;
    return cum_[i] + partial(breaks_[i], x);
}

// Tabulated K needs the trapezoid against the actual interpolation nodes,
// not only the outer breakpoints; breaks_ already contains every node.

HarmonicPair::HarmonicPair(const DiffusivityField& K) : K_(&K), R_(K) {}

double HarmonicPair::dk_wr(int k, double x) const {
    if (k <= 0) return wr(x);
    return K_->inv_derivative(k - 1, x) / R_.total();
}

HarmonicPair solve_wl_wr(const DiffusivityField& K) { return HarmonicPair(K); }

// ---------------- SourceProfile ----------------

SourceProfile::SourceProfile(const DiffusivityField& K, const PowerTermSum& f)
    : K_(&K), f_(f), F_(f.antiderivative()), R_(K) {
    breaks_.push_back(0.0);
    std::vector<double> interior = F_.interior_anchors();
    for (double b : K.breakpoints()) interior.push_back(b);
    std::sort(interior.begin(), interior.end());
    for (double b : interior)
        if (breaks_.empty() || b > breaks_.back() + 1e-14) breaks_.push_back(b);
    breaks_.push_back(1.0);
    cum_.resize(breaks_.size(), 0.0);
    for (std::size_t i = 1; i < breaks_.size(); ++i)
        cum_[i] = cum_[i - 1] + partial(breaks_[i - 1], breaks_[i]);
    c_ = cum_.back() / R_.total();
}

double SourceProfile::partial(double a, double b) const {
    const PiecewiseFn w = K_->to_inverse_weight();
    QuadOptions opt;
    opt.n_smooth = 24;
    opt.n_singular = 48;
    return integrate_product(F_, nullptr, &w, a, b, opt);
}

double SourceProfile::operator()(double x) const {
    if (x <= 0.0) return 0.0;
    double intF;
    if (x >= 1.0) {
        intF = cum_.back();
    } else {
        const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - breaks_.begin()) - 1;
        intF = cum_[i] + partial(breaks_[i], x);
    }
    return c_ * R_(x) - intF;
}

double SourceProfile::dwf(double x) const { return (c_ - F_(x)) / (*K_)(x); }

double SourceProfile::dk_wf(int k, double x) const {
    if (k <= 0) return (*this)(x);
    if (k == 1) return dwf(x);
    // d^{k-1} [(c - F) / K] by Leibniz on (c - F) * (1/K).
    const int m = k - 1;
    while (static_cast<int>(f_derivs_.size()) < m) {
        if (f_derivs_.empty())
            f_derivs_.push_back(f_);
        else
            f_derivs_.push_back(f_derivs_.back().derivative());
    }
    auto binom = [](int n, int j) {
        double r = 1.0;
        for (int i = 1; i <= j; ++i) r = r * (n - j + i) / i;
        return r;
    };
    double acc = 0.0;
    for (int j = 0; j <= m; ++j) {
        double dj;  // d^j (c - F)
        if (j == 0)
            dj = c_ - F_(x);
        else
            dj = -f_derivs_[j - 1](x);
        acc += binom(m, j) * dj * K_->inv_derivative(m - j, x);
    }
    return acc;
}

SourceProfile solve_wf(const DiffusivityField& K, const PowerTermSum& f) {
    return SourceProfile(K, f);
}

// ---------------- second-order FEM ----------------

GridFunction fem_second_order(const DiffusivityField& K, const PowerTermSum& f,
                              std::shared_ptr<const FemSpace> space) {
    if (space->boundary() != BoundaryKind::ZeroTrace)
        throw std::invalid_argument("fem_second_order: zero-trace space required");
    const auto& x = space->partition().nodes();
    const int cells = space->partition().cells();
    const PiecewiseFn kw = K.to_weight();

    // Cell averages of K, split at coefficient breakpoints.
    std::vector<double> mass(cells);
    for (int i = 0; i < cells; ++i) {
        std::vector<double> pts{x[i], x[i + 1]};
        for (double b : K.breakpoints())
            if (b > x[i] + 1e-14 && b < x[i + 1] - 1e-14) pts.push_back(b);
        std::sort(pts.begin(), pts.end());
        double acc = 0.0;
        for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
            const auto v = kw.cell_constant ? kw.cell_constant(pts[j], pts[j + 1]) : std::nullopt;
            if (v)
                acc += *v * (pts[j + 1] - pts[j]);
            else
                acc += weighted_integral(pts[j], pts[j + 1], 0.0, 0.0, 24, kw.eval);
        }
        mass[i] = acc;
    }

    const int n = space->dof_count();
    std::vector<double> diag(n), sub(std::max(0, n - 1)), sup(std::max(0, n - 1)), rhs(n);
    for (int i = 0; i < n; ++i) {
        const double hl = x[i + 1] - x[i], hr = x[i + 2] - x[i + 1];
        diag[i] = mass[i] / (hl * hl) + mass[i + 1] / (hr * hr);
        if (i + 1 < n) {
            sub[i] = -mass[i + 1] / (hr * hr);
            sup[i] = sub[i];
        }
        const PowerTermSum hat = space->basis(i).to_power_sum(Side::Left);
        rhs[i] = integrate_product(f, &hat, nullptr, x[i], x[i + 2], QuadOptions{16, 32});
    }
    std::vector<double> u = thomas_solve(sub, diag, sup, rhs);
    return GridFunction(std::move(space), std::move(u));
}

}  // namespace fracbvp
