#include "fracbvp/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "fracbvp/errors.hpp"
#include "fracbvp/fracops.hpp"
#include "fracbvp/quadrature.hpp"
#include "fracbvp/special.hpp"
#include "fracbvp/util.hpp"

namespace fracbvp {

// ---------------- util ----------------

namespace {
int g_threads = 0;
}

void set_thread_count(int n) { g_threads = n < 0 ? 0 : n; }

int thread_count() {
    if (g_threads > 0) return g_threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int n, const std::function<void(int)>& fn) {
    const int workers = std::min(thread_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const int chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int lo = w * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (int i = lo; i < hi; ++i) fn(i);
        });
    }
    for (std::thread& t : pool) t.join();
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

// ---------------- Partition ----------------

Partition Partition::uniform(int n) {
    if (n < 2) throw std::invalid_argument("Partition: need at least 2 cells");
    Partition p;
    p.nodes_.resize(n + 1);
    for (int i = 0; i <= n; ++i) p.nodes_[i] = static_cast<double>(i) / n;
    p.nodes_.front() = 0.0;
    p.nodes_.back() = 1.0;
    p.grading_ = Grading::Uniform;
    return p;
}

Partition Partition::graded(int n, double exponent, Grading side) {
    if (n < 2) throw std::invalid_argument("Partition: need at least 2 cells");
    if (!(exponent >= 1.0)) throw std::invalid_argument("Partition: grading exponent must be >= 1");
    Partition p;
    p.nodes_.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double t = std::pow(static_cast<double>(i) / n, exponent);
        p.nodes_[i] = (side == Grading::GradedLeft) ? t : 1.0 - t;
    }
    if (side == Grading::GradedRight) std::reverse(p.nodes_.begin(), p.nodes_.end());
    p.nodes_.front() = 0.0;
    p.nodes_.back() = 1.0;
    p.grading_ = side;
    return p;
}

Partition Partition::from_nodes(std::vector<double> nodes) {
    if (nodes.size() < 3) throw std::invalid_argument("Partition: need at least 2 cells");
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end(),
                            [](double a, double b) { return std::fabs(a - b) <= 1e-14; }),
                nodes.end());
    if (std::fabs(nodes.front()) > 1e-14 || std::fabs(nodes.back() - 1.0) > 1e-14)
        throw std::invalid_argument("Partition: nodes must span [0,1]");
    nodes.front() = 0.0;
    nodes.back() = 1.0;
    Partition p;
    p.nodes_ = std::move(nodes);
    p.grading_ = Grading::Uniform;
    return p;
}

double Partition::h_max() const {
    double m = 0.0;
    for (int i = 0; i < cells(); ++i) m = std::max(m, h(i));
    return m;
}

double Partition::h_min() const {
    double m = HUGE_VAL;
    for (int i = 0; i < cells(); ++i) m = std::min(m, h(i));
    return m;
}

// ---------------- FemSpace ----------------

FemSpace::FemSpace(Partition partition, int degree, BoundaryKind boundary)
    : partition_(std::move(partition)), degree_(degree), boundary_(boundary) {
    if (degree_ != 1)
        throw std::invalid_argument("FemSpace: only degree-1 (hat) spaces are available");
}

int FemSpace::dof_count() const {
    const int n = partition_.cells();
    return boundary_ == BoundaryKind::ZeroTrace ? n - 1 : n + 1;
}

double FemSpace::node_of_dof(int i) const {
    const int off = boundary_ == BoundaryKind::ZeroTrace ? 1 : 0;
    return partition_.nodes()[i + off];
}

PiecewisePoly FemSpace::basis(int i) const {
    if (i < 0 || i >= dof_count()) throw std::out_of_range("FemSpace::basis");
    const auto& x = partition_.nodes();
    const int off = boundary_ == BoundaryKind::ZeroTrace ? 1 : 0;
    const int node = i + off;  // peak node index
    std::vector<double> breaks;
    std::vector<Polynomial> pieces;
    breaks.push_back(0.0);
    if (node > 0) {
        if (x[node - 1] > 0.0) {
            breaks.push_back(x[node - 1]);
            pieces.emplace_back();  // zero left of the support
        }
        const double h = x[node] - x[node - 1];
        pieces.push_back(Polynomial({0.0, 1.0 / h}));
        breaks.push_back(x[node]);
    }
    if (node < static_cast<int>(x.size()) - 1) {
        const double h = x[node + 1] - x[node];
        pieces.push_back(Polynomial({1.0, -1.0 / h}));
        breaks.push_back(x[node + 1]);
    }
    if (breaks.back() < 1.0) {
        pieces.emplace_back();
        breaks.push_back(1.0);
    }
    return PiecewisePoly(std::move(breaks), std::move(pieces));
}

std::vector<PiecewisePoly> hat_basis(const FemSpace& space) {
    std::vector<PiecewisePoly> out;
    out.reserve(space.dof_count());
    for (int i = 0; i < space.dof_count(); ++i) out.push_back(space.basis(i));
    return out;
}

// ---------------- GridFunction ----------------

GridFunction::GridFunction(std::shared_ptr<const FemSpace> space, std::vector<double> coefficients)
    : space_(std::move(space)), coef_(std::move(coefficients)) {
    if (static_cast<int>(coef_.size()) != space_->dof_count())
        throw std::invalid_argument("GridFunction: coefficient count mismatch");
    const auto& nodes = space_->partition().nodes();
    node_values_.assign(nodes.size(), 0.0);
    const int off = space_->boundary() == BoundaryKind::ZeroTrace ? 1 : 0;
    for (std::size_t i = 0; i < coef_.size(); ++i) node_values_[i + off] = coef_[i];
}

double GridFunction::operator()(double x) const {
    const auto& nodes = space_->partition().nodes();
    if (x <= 0.0) return node_values_.front();
    if (x >= 1.0) return node_values_.back();
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - nodes.begin()) - 1;
    const double t = (x - nodes[i]) / (nodes[i + 1] - nodes[i]);
    return node_values_[i] * (1.0 - t) + node_values_[i + 1] * t;
}

PiecewisePoly GridFunction::to_piecewise_poly() const {
    const auto& nodes = space_->partition().nodes();
    std::vector<Polynomial> pieces;
    pieces.reserve(nodes.size() - 1);
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const double h = nodes[i + 1] - nodes[i];
        pieces.push_back(
            Polynomial({node_values_[i], (node_values_[i + 1] - node_values_[i]) / h}));
    }
    return PiecewisePoly(nodes, std::move(pieces));
}

PowerTermSum GridFunction::to_power_sum(Side side) const {
    return to_piecewise_poly().to_power_sum(side);
}

GridFunction GridFunction::operator-(const GridFunction& other) const {
    if (space_ != other.space_ && space_->partition().nodes() != other.space_->partition().nodes())
        throw std::invalid_argument("GridFunction: mismatched spaces");
    std::vector<double> c(coef_);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= other.coef_[i];
    return GridFunction(space_, std::move(c));
}

GridFunction GridFunction::operator+(const GridFunction& other) const {
    std::vector<double> c(coef_);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += other.coef_[i];
    return GridFunction(space_, std::move(c));
}

double GridFunction::l2_norm() const {
    // Exact: per-cell quadratic integrated by Simpson.
    const auto& nodes = space_->partition().nodes();
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const double a = node_values_[i], b = node_values_[i + 1];
        const double m = 0.5 * (a + b);
        acc += (nodes[i + 1] - nodes[i]) * (a * a + 4.0 * m * m + b * b) / 6.0;
    }
    return std::sqrt(std::max(0.0, acc));
}

GridFunction GridFunction::interpolate(std::shared_ptr<const FemSpace> space,
                                       const std::function<double(double)>& f) {
    std::vector<double> c(space->dof_count());
    for (int i = 0; i < space->dof_count(); ++i) c[i] = f(space->node_of_dof(i));
    return GridFunction(std::move(space), std::move(c));
}

GridFunction GridFunction::zero(std::shared_ptr<const FemSpace> space) {
    std::vector<double> c(space->dof_count(), 0.0);
    return GridFunction(std::move(space), std::move(c));
}

// ---------------- norms ----------------

namespace {

void require_zero_trace(double w0, double w1) {
    if (std::fabs(w0) > 1e-9 || std::fabs(w1) > 1e-9)
        throw UnsupportedRepresentation(
            "j_seminorm needs zero boundary values for the derivative representation");
}

double side_seminorm_sq(const PowerTermSum& w, double mu, JSide side, const JNormOptions& opt) {
    if (!(mu > 0.0 && mu < 1.0))
        throw std::domain_error("j_seminorm: order must lie in (0,1)");
    require_zero_trace(w(0.0), w(1.0));
    const double sigma = 1.0 - mu;
    const PowerTermSum dw = w.derivative();
    PowerTermSum g;
    double tail = 0.0;
    if (side == JSide::Left) {
        const PowerTermSum dwl = dw.converted_to(Side::Left);
        g = left_frac_integral(dwl, sigma);
        if (opt.extended) tail = left_extension_tail_sq(dwl, sigma);
    } else {
        const PowerTermSum dwr = dw.converted_to(Side::Right);
        g = right_frac_integral(dwr, sigma).scaled(-1.0);  // (-D)^1 convention
        if (opt.extended) tail = right_extension_tail_sq(dwr, sigma);
    }
    return integrate_product(g, &g, nullptr, 0.0, 1.0, opt.quad) + tail;
}

}  // namespace

double j_seminorm(const PowerTermSum& w, double mu, JSide side, const JNormOptions& opt) {
    return std::sqrt(std::max(0.0, side_seminorm_sq(w, mu, side, opt)));
}

double j_seminorm(const PiecewisePoly& w, double mu, JSide side, const JNormOptions& opt) {
    return j_seminorm(w.to_power_sum(Side::Left), mu, side, opt);
}

double j_seminorm_two_sided(const PowerTermSum& w, double mu, double theta,
                            const JNormOptions& opt) {
    if (!(theta >= 0.0 && theta <= 1.0)) throw std::domain_error("theta must lie in [0,1]");
    const double l = (theta > 0.0) ? side_seminorm_sq(w, mu, JSide::Left, opt) : 0.0;
    const double r = (theta < 1.0) ? side_seminorm_sq(w, mu, JSide::Right, opt) : 0.0;
    return std::sqrt(std::max(0.0, theta * theta * l + (1.0 - theta) * (1.0 - theta) * r));
}

double energy_error(const GridFunction& w_h, const PowerTermSum& w_exact, double mu) {
    const PowerTermSum diff = w_h.to_power_sum(Side::Left) - w_exact;
    return j_seminorm(diff, mu, JSide::Left);
}

double l2_inner(const PiecewisePoly& a, const PiecewisePoly& b, int quad_order) {
    // Per-cell Gauss-Legendre on the union of breakpoints; exact for
    // polynomial pieces of total degree < 2*quad_order.
    std::vector<double> pts;
    pts.insert(pts.end(), a.breakpoints().begin(), a.breakpoints().end());
    pts.insert(pts.end(), b.breakpoints().begin(), b.breakpoints().end());
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](double x, double y) { return std::fabs(x - y) <= 1e-14; }),
              pts.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        acc += weighted_integral(pts[i], pts[i + 1], 0.0, 0.0, quad_order,
                                 [&](double x) { return a(x) * b(x); });
    return acc;
}

// ---------------- zero-extension tails ----------------

namespace {

// g(x) for x > 1 where g = lI^sigma [dw restricted to (0,1)], evaluated
// straight from the kernel integral: the kernel is analytic on (0,1) for
// x > 1, with derivative growth near s = 1 resolved by geometric panels.
double tail_value(const PowerTermSum& dw, double sigma, double x) {
    std::vector<double> pts{0.0, 1.0};
    for (double a : dw.interior_anchors()) pts.push_back(a);
    // resolve the kernel boundary layer of width (x-1) at s = 1
    double step = 0.5;
    for (int l = 0; l < 28; ++l) {
        pts.push_back(1.0 - step);
        step *= 0.5;
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        acc += weighted_integral(pts[i], pts[i + 1], 0.0, 0.0, 16, [&](double s) {
            return dw(s) * std::pow(x - s, sigma - 1.0);
        });
    return acc / gamma_fn(sigma);
}

}  // namespace

double left_extension_tail_sq(const PowerTermSum& dw, double sigma) {
    for (const PowerTerm& t : dw.terms())
        if (t.side != Side::Left)
            throw UnsupportedRepresentation("extension tail expects the left-anchored basis");
    // int_1^inf g^2 dx = int_0^1 g(1/u)^2 u^{-2} du. The integrand carries a
    // (1-u)^sigma cusp at u = 1 and an algebraic decay toward u = 0, so the
    // panels refine geometrically into both endpoints.
    std::vector<double> pts{0.0, 1.0};
    double step = 0.35;
    for (int l = 0; l < 16; ++l) {
        pts.push_back(step);
        pts.push_back(1.0 - step);
        step *= 0.5;
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        acc += weighted_integral(pts[i], pts[i + 1], 0.0, 0.0, 24, [&](double u) {
            if (u <= 0.0) return 0.0;
            const double x = 1.0 / u;
            const double g = tail_value(dw, sigma, x);
            return g * g / (u * u);
        });
    return acc;
}

double right_extension_tail_sq(const PowerTermSum& dw, double sigma) {
    // Mirror symmetry: reflect onto the left problem.
    return left_extension_tail_sq(dw.reflected().converted_to(Side::Left), sigma);
}

}  // namespace fracbvp
