#include "fracbvp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "fracbvp/special.hpp"

namespace fracbvp {

namespace {

// Eigenvalues of a symmetric tridiagonal matrix by the implicit QL method,
// tracking only the first row of the eigenvector matrix (Golub-Welsch).
// d: diagonal, e: subdiagonal (e[0] unused), z: first-row components,
// initialized to (1, 0, ..., 0).
void tridiag_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z) {
    const int n = static_cast<int>(d.size());
    if (n == 1) return;
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= 1e-300 || std::fabs(e[m]) <= 2.3e-16 * dd) break;
            }
            if (m != l) {
                if (++iter == 50)
                    throw std::runtime_error("tridiag_ql: too many iterations");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
                if (r == 0.0 && m - 1 >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }

    // Sort ascending, carrying z along.
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return d[a] < d[b]; });
    std::vector<double> ds(n), zs(n);
    for (int i = 0; i < n; ++i) {
        ds[i] = d[idx[i]];
        zs[i] = z[idx[i]];
    }
    d = std::move(ds);
    z = std::move(zs);
}

QuadRule build_jacobi(int n, double alpha, double beta) {
    if (n < 1) throw std::invalid_argument("gauss_jacobi: need at least one node");
    if (alpha <= -1.0 || beta <= -1.0)
        throw std::invalid_argument("gauss_jacobi: weight exponents must exceed -1");

    const double ab = alpha + beta;
    std::vector<double> diag(n), sub(n, 0.0);
    diag[0] = (beta - alpha) / (ab + 2.0);
    for (int k = 1; k < n; ++k) {
        const double den = (2.0 * k + ab) * (2.0 * k + ab + 2.0);
        diag[k] = (beta * beta - alpha * alpha) / den;
        double bk;
        if (k == 1) {
            bk = 4.0 * (1.0 + alpha) * (1.0 + beta) /
                 ((ab + 2.0) * (ab + 2.0) * (ab + 3.0));
        } else {
            const double t = 2.0 * k + ab;
            bk = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) /
                 (t * t * (t + 1.0) * (t - 1.0));
        }
        sub[k] = std::sqrt(bk);
    }

    std::vector<double> z(n, 0.0);
    z[0] = 1.0;
    tridiag_ql(diag, sub, z);

    const double mu0 = std::pow(2.0, ab + 1.0) * beta_fn(alpha + 1.0, beta + 1.0);
    QuadRule rule;
    rule.nodes = diag;
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) rule.weights[i] = mu0 * z[i] * z[i];
    return rule;
}

struct RuleKey {
    int n;
    std::uint64_t a_bits, b_bits;
    bool operator<(const RuleKey& o) const {
        return std::tie(n, a_bits, b_bits) < std::tie(o.n, o.a_bits, o.b_bits);
    }
};

std::uint64_t bits_of(double x) {
    std::uint64_t u;
    std::memcpy(&u, &x, sizeof u);
    return u;
}

}  // namespace

const QuadRule& gauss_jacobi(int n, double alpha, double beta) {
    static std::map<RuleKey, QuadRule> cache;
    static std::mutex mutex;
    const RuleKey key{n, bits_of(alpha), bits_of(beta)};
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, build_jacobi(n, alpha, beta)).first;
    return it->second;
}

}  // namespace fracbvp
