#include "fracbvp/piecewise_poly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracbvp {

PiecewisePoly::PiecewisePoly(std::vector<double> breakpoints, std::vector<Polynomial> local_pieces)
    : breaks_(std::move(breakpoints)), pieces_(std::move(local_pieces)) {
    if (breaks_.size() < 2 || pieces_.size() + 1 != breaks_.size())
        throw std::invalid_argument("PiecewisePoly: breakpoint/piece count mismatch");
    if (std::fabs(breaks_.front()) > 1e-14 || std::fabs(breaks_.back() - 1.0) > 1e-14)
        throw std::invalid_argument("PiecewisePoly: breakpoints must span [0, 1]");
    for (std::size_t i = 1; i < breaks_.size(); ++i)
        if (!(breaks_[i] > breaks_[i - 1]))
            throw std::invalid_argument("PiecewisePoly: breakpoints must be strictly increasing");
}

int PiecewisePoly::cell_of(double x) const {
    if (x <= breaks_.front()) return 0;
    if (x >= breaks_.back()) return piece_count() - 1;
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    return static_cast<int>(it - breaks_.begin()) - 1;
}

double PiecewisePoly::operator()(double x) const {
    const int i = cell_of(x);
    return pieces_[i](x - breaks_[i]);
}

int PiecewisePoly::degree() const {
    int d = 0;
    for (const Polynomial& p : pieces_) d = std::max(d, p.degree());
    return d;
}

PiecewisePoly PiecewisePoly::derivative() const {
    std::vector<Polynomial> d;
    d.reserve(pieces_.size());
    for (const Polynomial& p : pieces_) d.push_back(p.derivative());
    return PiecewisePoly(breaks_, std::move(d));
}

PiecewisePoly PiecewisePoly::reflected() const {
    const int m = piece_count();
    std::vector<double> rb(breaks_.size());
    for (std::size_t i = 0; i < breaks_.size(); ++i) rb[i] = 1.0 - breaks_[breaks_.size() - 1 - i];
    std::vector<Polynomial> rp(m);
    for (int i = 0; i < m; ++i) {
        const double h = breaks_[i + 1] - breaks_[i];
        // new local poly on reflected cell: q(t) = p(h - t)
        rp[m - 1 - i] = pieces_[i].reflect_shift(h);
    }
    return PiecewisePoly(std::move(rb), std::move(rp));
}

bool PiecewisePoly::continuous(double tol) const {
    for (int i = 0; i + 1 < piece_count(); ++i) {
        const double h = breaks_[i + 1] - breaks_[i];
        if (std::fabs(pieces_[i](h) - pieces_[i + 1](0.0)) > tol) return false;
    }
    return true;
}

PowerTermSum PiecewisePoly::to_power_sum(Side side) const {
    if (side == Side::Right) return reflected().to_power_sum(Side::Left).reflected();
    PowerTermSum s;
    Polynomial running;  // accumulated expression about the current breakpoint
    for (int i = 0; i < piece_count(); ++i) {
        const Polynomial diff = pieces_[i] - running;
        const auto& c = diff.coeffs();
        for (std::size_t j = 0; j < c.size(); ++j)
            if (c[j] != 0.0) s.add_term(c[j], Side::Left, breaks_[i], static_cast<double>(j));
        const double h = breaks_[i + 1] - breaks_[i];
        running = pieces_[i].taylor_shift(h);
    }
    s.merge();
    return s;
}

PiecewisePoly PiecewisePoly::scaled(double c) const {
    std::vector<Polynomial> p;
    p.reserve(pieces_.size());
    for (const Polynomial& q : pieces_) p.push_back(q.scaled(c));
    return PiecewisePoly(breaks_, std::move(p));
}

}  // namespace fracbvp
