#include "fracbvp/integrate.hpp"

#include <algorithm>
#include <cmath>

#include "fracbvp/quadrature.hpp"

namespace fracbvp {

PiecewiseFn PiecewiseFn::one() {
    PiecewiseFn w;
    w.eval = [](double) { return 1.0; };
    w.cell_constant = [](double, double) { return std::optional<double>(1.0); };
    return w;
}

namespace {

constexpr double kTol = 1e-12;

// One multiplicative component of a factor on a cell: either a pure
// truncated power singular at a cell endpoint, or the sum of everything
// analytic on the (closed) cell.
struct Component {
    double coeff = 1.0;
    double left_exp = 0.0;   // exponent of (x - a)
    double right_exp = 0.0;  // exponent of (b - x)
    std::vector<const PowerTerm*> smooth;  // evaluated pointwise
    bool pure() const { return smooth.empty(); }

    double eval_smooth(double x) const {
        double acc = 0.0;
        for (const PowerTerm* t : smooth) {
            const double d = (t->side == Side::Left) ? x - t->anchor : t->anchor - x;
            if (d <= 0.0) {
                if (d == 0.0 && t->exponent == 0.0) acc += t->coeff;
                continue;
            }
            acc += t->coeff * std::pow(d, t->exponent);
        }
        return acc;
    }
};

// Split the terms of F active on (a,b) into endpoint-singular pure-power
// components plus one analytic remainder. Cells are already split at every
// anchor, so a non-integer-exponent anchor can only sit at a cell endpoint.
std::vector<Component> decompose(const PowerTermSum& F, double a, double b) {
    std::vector<Component> comps;
    Component smooth;
    for (const PowerTerm& t : F.terms()) {
        if (t.side == Side::Left) {
            if (t.anchor >= b - kTol) continue;  // vanishes on the cell
            if (std::fabs(t.anchor - a) <= kTol && !is_nonneg_integer(t.exponent))
                comps.push_back(Component{t.coeff, t.exponent, 0.0, {}});
            else
                smooth.smooth.push_back(&t);
        } else {
            if (t.anchor <= a + kTol) continue;
            if (std::fabs(t.anchor - b) <= kTol && !is_nonneg_integer(t.exponent))
                comps.push_back(Component{t.coeff, 0.0, t.exponent, {}});
            else
                smooth.smooth.push_back(&t);
        }
    }
    if (!smooth.smooth.empty()) comps.push_back(std::move(smooth));
    return comps;
}

// True when every active term of the decomposition is an exponent-zero
// step, i.e. the factor is constant on the cell; the value is accumulated.
bool constant_value(const std::vector<Component>& comps, double& value) {
    if (comps.empty()) {
        value = 0.0;
        return true;
    }
    if (comps.size() != 1 || comps[0].left_exp != 0.0 || comps[0].right_exp != 0.0) return false;
    double v = 0.0;
    for (const PowerTerm* t : comps[0].smooth) {
        if (t->exponent != 0.0) return false;
        v += t->coeff;
    }
    value = v;
    return true;
}

double cell_product(double a, double b, const std::vector<Component>& FC,
                    const std::vector<Component>& GC, bool has_g, const PiecewiseFn* W,
                    const QuadOptions& opt) {
    static const Component unit;
    std::vector<const Component*> gs;
    if (has_g)
        for (const Component& g : GC) gs.push_back(&g);
    else
        gs.push_back(&unit);

    double acc = 0.0;
    for (const Component& f : FC) {
        for (const Component* g : gs) {
            const double le = f.left_exp + g->left_exp;
            const double re = f.right_exp + g->right_exp;
            const double c = f.coeff * g->coeff;
            if (f.pure() && g->pure() && !W) {
                // Beta integral of the bare weight.
                acc += c * std::pow(b - a, le + re + 1.0) *
                       std::exp(std::lgamma(le + 1.0) + std::lgamma(re + 1.0) -
                                std::lgamma(le + re + 2.0));
                continue;
            }
            const bool singular = le != 0.0 || re != 0.0;
            const int n = singular ? opt.n_singular : opt.n_smooth;
            acc += c * weighted_integral(a, b, re, le, n, [&](double x) {
                double v = 1.0;
                if (!f.pure()) v *= f.eval_smooth(x);
                if (!g->pure()) v *= g->eval_smooth(x);
                if (W) v *= W->eval(x);
                return v;
            });
        }
    }
    return acc;
}

}  // namespace

double integrate_product(const PowerTermSum& F, const PowerTermSum* G, const PiecewiseFn* W,
                         double lo, double hi, const QuadOptions& opt) {
    if (!(hi > lo) || F.empty()) return 0.0;

    std::vector<double> pts{lo, hi};
    for (double p : F.interior_anchors(lo, hi)) pts.push_back(p);
    if (G)
        for (double p : G->interior_anchors(lo, hi)) pts.push_back(p);
    if (W)
        for (double p : W->breaks)
            if (p > lo + kTol && p < hi - kTol) pts.push_back(p);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](double a, double b) { return std::fabs(a - b) <= kTol; }),
              pts.end());

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a = pts[i], b = pts[i + 1];

        double scale = 1.0;
        bool companions_const = true;
        if (W) {
            const auto v = W->cell_constant ? W->cell_constant(a, b) : std::nullopt;
            if (v)
                scale *= *v;
            else
                companions_const = false;
        }
        std::vector<Component> GC;
        if (G) {
            GC = decompose(*G, a, b);
            double gval = 0.0;
            if (companions_const && constant_value(GC, gval))
                scale *= gval;
            else
                companions_const = false;
        }
        if (companions_const) {
            if (scale != 0.0) total += scale * F.integral_over(a, b);
            continue;
        }

        const std::vector<Component> FC = decompose(F, a, b);
        if (FC.empty()) continue;
        total += cell_product(a, b, FC, GC, G != nullptr, W, opt);
    }
    return total;
}

double l2_inner(const PowerTermSum& a, const PowerTermSum& b, const QuadOptions& opt) {
    return integrate_product(a, &b, nullptr, 0.0, 1.0, opt);
}

double l2_norm(const PowerTermSum& a, const QuadOptions& opt) {
    return std::sqrt(std::max(0.0, l2_inner(a, a, opt)));
}

}  // namespace fracbvp
