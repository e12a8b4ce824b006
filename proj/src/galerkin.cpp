#include "fracbvp/galerkin.hpp"

#include <algorithm>
#include <cmath>

#include "fracbvp/errors.hpp"
#include "fracbvp/fracops.hpp"
#include "fracbvp/special.hpp"
#include "fracbvp/util.hpp"

namespace fracbvp {

double bilinear_B(const PiecewisePoly& w, const PiecewisePoly& v, const DiffusivityField& K,
                  double beta, double theta, const QuadOptions& opt) {
    if (!(beta > 0.0 && beta < 1.0)) throw std::domain_error("bilinear_B: beta must be in (0,1)");
    const PiecewisePoly dw = w.derivative();
    const PowerTermSum profile = two_sided_integral(dw, beta, theta);
    const PowerTermSum dv = v.derivative().to_power_sum(Side::Left);
    const PiecewiseFn kw = K.to_weight();
    return integrate_product(profile, &dv, &kw, 0.0, 1.0, opt);
}

PiecewisePoly coercivity_witness() {
    std::vector<double> breaks{0.0, 0.25, 0.75, 1.0};
    std::vector<Polynomial> pieces;
    pieces.push_back(Polynomial({0.0, 4.0}));    // 4x
    pieces.push_back(Polynomial({1.0, -4.0}));   // 4(1/2 - x) = 1 - 4 xi at xi = x - 1/4
    pieces.push_back(Polynomial({-1.0, 4.0}));   // -4(1-x) = -1 + 4 xi at xi = x - 3/4
    return PiecewisePoly(std::move(breaks), std::move(pieces));
}

std::pair<PowerTermSum, PowerTermSum> coercivity_witness_profiles(double beta) {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::domain_error("coercivity_witness_profiles: beta must be in (0,1)");
    const double c = 4.0 / gamma_fn(beta + 1.0);
    PowerTermSum left;
    left.add_term(c, Side::Left, 0.0, beta);
    left.add_term(-2.0 * c, Side::Left, 0.25, beta);
    left.add_term(2.0 * c, Side::Left, 0.75, beta);
    PowerTermSum right;
    right.add_term(c, Side::Right, 1.0, beta);
    right.add_term(-2.0 * c, Side::Right, 0.75, beta);
    right.add_term(2.0 * c, Side::Right, 0.25, beta);
    return {left, right};
}

double lambda_beta(double beta) {
    if (!(beta >= 0.0 && beta <= 1.0))
        throw std::domain_error("lambda_beta: beta must be in [0,1]");
    return std::pow(2.0, 1.0 + beta) - 1.0 - std::pow(3.0, beta);
}

namespace {

// Two-sided profile of coercivity_witness as a single term sum.
PowerTermSum witness_two_sided(double beta, double theta) {
    auto [l, r] = coercivity_witness_profiles(beta);
    if (theta == 1.0) return l;
    if (theta == 0.0) return r;
    PowerTermSum s = l.scaled(theta);
    s += r.scaled(1.0 - theta);
    return s;
}

double eval_B_against_witness(const DiffusivityField& K, const PowerTermSum& profile) {
    // Dw is piecewise constant: +4, -4, +4.
    PowerTermSum dw;
    dw.add_term(4.0, Side::Left, 0.0, 0.0);
    dw.add_term(-8.0, Side::Left, 0.25, 0.0);
    dw.add_term(8.0, Side::Left, 0.75, 0.0);
    const PiecewiseFn kw = K.to_weight();
    return integrate_product(profile, &dw, &kw, 0.0, 1.0, QuadOptions{16, 48});
}

}  // namespace

CoercivityCertificate find_coercivity_violation(double beta, double theta) {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::domain_error("find_coercivity_violation: beta must be in (0,1)");
    if (!(theta >= 0.0 && theta <= 1.0))
        throw std::domain_error("find_coercivity_violation: theta must be in [0,1]");

    const double lam = lambda_beta(beta);
    const double scale = std::pow(4.0, 1.0 - beta) / gamma_fn(beta + 1.0);
    const double band_bound = scale * lam / 4.0;  // profile must stay <= -band_bound
    const PowerTermSum profile = witness_two_sided(beta, theta);

    // Active corner: x = 1/4 for theta <= 1/2, mirrored at 3/4 otherwise.
    const bool left_branch = theta <= 0.5;
    const double corner = left_branch ? 0.25 : 0.75;
    const double corner_value = profile(corner);

    // Scan outward from the corner for the first point where the profile
    // rises above -band_bound, then bisect the crossing.
    const int kScan = 512;
    double delta = 0.25;
    double prev = corner;
    bool found_cross = false;
    for (int i = 1; i <= kScan; ++i) {
        const double x = left_branch ? corner - 0.25 * i / kScan : corner + 0.25 * i / kScan;
        if (profile(x) > -band_bound) {
            double good = prev, bad = x;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (good + bad);
                if (profile(mid) <= -band_bound)
                    good = mid;
                else
                    bad = mid;
            }
            delta = std::fabs(good - corner);
            found_cross = true;
            break;
        }
        prev = x;
    }
    if (!found_cross) delta = 0.25;
    if (!(delta > 0.0)) throw SearchFailure("coercivity search: empty band at the corner");
    // Snap down to a power of two: any smaller band still satisfies the
    // profile bound, and corner +- delta then stays exactly representable,
    // which keeps the certificate reproducible by independent quadrature
    // even for bands as thin as 1e-11.
    delta = std::exp2(std::floor(std::log2(delta)));

    // Three-piece coefficient: unit band against the corner, small outside.
    auto make_K = [&](double kl, double kr) {
        if (left_branch)
            return DiffusivityField::piecewise_constant({corner - delta, corner}, {kl, 1.0, kr});
        return DiffusivityField::piecewise_constant({corner, corner + delta}, {kl, 1.0, kr});
    };

    double kside = 1.0;
    for (int step = 0; step <= 60; ++step) {
        const DiffusivityField K = make_K(kside, kside);
        const double value = eval_B_against_witness(K, profile);
        if (value < 0.0) {
            CoercivityCertificate cert{beta,  theta, delta, kside,       kside,
                                       value, corner_value, step, K, coercivity_witness()};
            return cert;
        }
        kside *= 0.5;
    }
    throw SearchFailure("find_coercivity_violation: no negative value after 60 shrink steps");
}

GalerkinSystem assemble_galerkin(std::shared_ptr<const FemSpace> space, const DiffusivityField& K,
                                 double beta, double theta, const PowerTermSum& f,
                                 const QuadOptions& opt) {
    if (space->boundary() != BoundaryKind::ZeroTrace)
        throw std::invalid_argument("assemble_galerkin: zero-trace space required");
    if (!(beta > 0.0 && beta < 1.0)) throw std::domain_error("assemble_galerkin: beta in (0,1)");

    const int n = space->dof_count();
    const auto& x = space->partition().nodes();
    Matrix A(n, n);
    std::vector<double> rhs(n);
    const PiecewiseFn kw = K.to_weight();

    // Profiles (theta lI^beta + (1-theta) rI^beta) D phi_j, one per column.
    std::vector<PowerTermSum> profiles(n);
    for (int j = 0; j < n; ++j)
        profiles[j] = two_sided_integral(space->basis(j).derivative(), beta, theta);

    parallel_for(n, [&](int i) {
        // Test function phi_i: Dphi_i is constant on its two support cells.
        const double hl = x[i + 1] - x[i], hr = x[i + 2] - x[i + 1];
        PowerTermSum dphi;
        dphi.add_term(1.0 / hl, Side::Left, x[i], 0.0);
        dphi.add_term(-1.0 / hl - 1.0 / hr, Side::Left, x[i + 1], 0.0);
        dphi.add_term(1.0 / hr, Side::Left, x[i + 2], 0.0);
        for (int j = 0; j < n; ++j)
            A(i, j) = integrate_product(profiles[j], &dphi, &kw, x[i], x[i + 2], opt);
        const PowerTermSum hat = space->basis(i).to_power_sum(Side::Left);
        rhs[i] = integrate_product(f, &hat, nullptr, x[i], x[i + 2], QuadOptions{16, 48});
    });

    return GalerkinSystem{std::move(A), std::move(rhs), std::move(space), beta, theta, K};
}

SolveInfo galerkin_solve(const GalerkinSystem& system) {
    const double anorm = system.matrix.norm1();
    LuFactor lu(system.matrix);
    if (lu.singular()) throw SolverError("galerkin_solve: singular matrix", HUGE_VAL);
    const double cond = lu.condition_estimate(anorm);
    if (cond > 1e14)
        throw SolverError("galerkin_solve: matrix too ill-conditioned to trust", cond);
    std::vector<double> u = lu.solve(system.rhs);

    double rnorm = 0.0, bnorm = 0.0;
    const int n = system.matrix.rows();
    for (int i = 0; i < n; ++i) {
        double r = -system.rhs[i];
        for (int j = 0; j < n; ++j) r += system.matrix(i, j) * u[j];
        rnorm += r * r;
        bnorm += system.rhs[i] * system.rhs[i];
    }
    const double rel = (bnorm > 0.0) ? std::sqrt(rnorm / bnorm) : std::sqrt(rnorm);
    return SolveInfo{GridFunction(system.space, std::move(u)), cond, rel};
}

}  // namespace fracbvp
