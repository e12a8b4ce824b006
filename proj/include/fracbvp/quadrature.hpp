#pragma once

#include <cmath>
#include <vector>

namespace fracbvp {

/// Nodes and weights on the reference interval [-1, 1].
struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    int size() const { return static_cast<int>(nodes.size()); }
};

/// Gauss-Jacobi rule for the weight (1-t)^alpha (1+t)^beta on [-1, 1],
/// alpha, beta > -1. alpha = beta = 0 is Gauss-Legendre. Rules are cached;
/// the returned reference stays valid for the process lifetime.
const QuadRule& gauss_jacobi(int n, double alpha, double beta);

inline const QuadRule& gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

/// Integral over [a, b] of (b-x)^alpha (x-a)^beta f(x) using the mapped
/// Gauss-Jacobi rule; exact when f is a polynomial of degree < 2n.
/// Nodes are clamped strictly inside (a, b): on ulp-wide panels the mapped
/// node can round onto an endpoint, where a piecewise f would be evaluated
/// on the wrong side of its jump.
template <typename F>
double weighted_integral(double a, double b, double alpha, double beta, int n, F&& f) {
    const QuadRule& rule = gauss_jacobi(n, alpha, beta);
    const double half = 0.5 * (b - a);
    if (half <= 0.0) return 0.0;
    double acc = 0.0;
    for (int i = 0; i < rule.size(); ++i) {
        double x = a + half * (rule.nodes[i] + 1.0);
        // keep nodes out of [b, inf): piecewise integrands are evaluated
        // right-continuously, so the a-side needs no guard
        if (x >= b) x = std::max(a, std::nextafter(b, a));
        acc += rule.weights[i] * f(x);
    }
    double scale = half;
    if (alpha != 0.0 || beta != 0.0) scale = std::pow(half, alpha + beta + 1.0);
    return scale * acc;
}

}  // namespace fracbvp
