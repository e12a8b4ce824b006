#include "fracbvp/petrov.hpp"

#include <algorithm>
#include <cmath>

#include "fracbvp/errors.hpp"
#include "fracbvp/fracops.hpp"
#include "fracbvp/quadrature.hpp"
#include "fracbvp/special.hpp"
#include "fracbvp/util.hpp"

namespace fracbvp {

namespace {

void check_pg_beta(double beta) {
    if (!(beta > 0.0 && beta < 0.5))
        throw std::invalid_argument(
            "Petrov-Galerkin path requires the two-sided order beta in (0, 1/2)");
}

// Step representation of the derivative of hat i on the given nodes.
PowerTermSum hat_derivative_steps(const std::vector<double>& x, int dof) {
    const double hl = x[dof + 1] - x[dof], hr = x[dof + 2] - x[dof + 1];
    PowerTermSum d;
    d.add_term(1.0 / hl, Side::Left, x[dof], 0.0);
    d.add_term(-1.0 / hl - 1.0 / hr, Side::Left, x[dof + 1], 0.0);
    d.add_term(1.0 / hr, Side::Left, x[dof + 2], 0.0);
    return d;
}

// (g, D psi_i) for a nodal-value based g: exact telescoping sums.
// values[k] = G(x_k) where G is an antiderivative of g.
double telescoped_rhs(const std::vector<double>& x, int dof, const std::vector<double>& G) {
    const double hl = x[dof + 1] - x[dof], hr = x[dof + 2] - x[dof + 1];
    return (G[dof + 1] - G[dof]) / hl - (G[dof + 2] - G[dof + 1]) / hr;
}

}  // namespace

double bilinear_A(const PiecewisePoly& w, const PiecewisePoly& v, const DiffusivityField& K,
                  double beta, double theta, const QuadOptions& opt) {
    check_pg_beta(beta);
    const PowerTermSum profile = rl_derivative_of_integral(w, beta, theta);
    const PowerTermSum dv = v.derivative().to_power_sum(Side::Left);
    const PiecewiseFn kw = K.to_weight();
    return integrate_product(profile, &dv, &kw, 0.0, 1.0, opt);
}

PGSystem assemble_pg(std::shared_ptr<const FemSpace> trial, std::shared_ptr<const FemSpace> test,
                     const DiffusivityField& K, double beta, double theta, const PowerTermSum* f,
                     const QuadOptions& opt) {
    check_pg_beta(beta);
    if (trial->boundary() != BoundaryKind::ZeroTrace || test->boundary() != BoundaryKind::ZeroTrace)
        throw std::invalid_argument("assemble_pg: zero-trace spaces required");

    const int n = trial->dof_count();
    const int m = test->dof_count();
    const auto& xt = test->partition().nodes();
    Matrix A(m, n);
    std::vector<double> rhs(m, 0.0);
    const PiecewiseFn kw = K.to_weight();

    std::vector<PowerTermSum> profiles(n);
    for (int j = 0; j < n; ++j)
        profiles[j] = two_sided_integral(trial->basis(j).derivative(), beta, theta);

    parallel_for(m, [&](int i) {
        const PowerTermSum dpsi = hat_derivative_steps(xt, i);
        for (int j = 0; j < n; ++j)
            A(i, j) = integrate_product(profiles[j], &dpsi, &kw, xt[i], xt[i + 2], opt);
        if (f) {
            const PowerTermSum hat = test->basis(i).to_power_sum(Side::Left);
            rhs[i] = integrate_product(*f, &hat, nullptr, xt[i], xt[i + 2], QuadOptions{16, 48});
        }
    });

    return PGSystem{std::move(A), std::move(rhs), std::move(trial), std::move(test),
                    beta,          theta,          K};
}

SolveInfo pg_solve(const PGSystem& system) {
    const Matrix& A = system.matrix;
    if (!system.least_squares()) {
        const double anorm = A.norm1();
        LuFactor lu(A);
        if (lu.singular())
            throw SolverError(
                "pg_solve: singular system; check the wellposedness condition first", HUGE_VAL);
        const double cond = lu.condition_estimate(anorm);
        if (cond > 1e14)
            throw SolverError("pg_solve: condition estimate exceeds 1e14; "
                              "check the wellposedness condition",
                              cond);
        std::vector<double> u = lu.solve(system.rhs);
        double rnorm = 0.0, bnorm = 0.0;
        for (int i = 0; i < A.rows(); ++i) {
            double r = -system.rhs[i];
            for (int j = 0; j < A.cols(); ++j) r += A(i, j) * u[j];
            rnorm += r * r;
            bnorm += system.rhs[i] * system.rhs[i];
        }
        const double rel = (bnorm > 0.0) ? std::sqrt(rnorm / bnorm) : std::sqrt(rnorm);
        return SolveInfo{GridFunction(system.trial, std::move(u)), cond, rel};
    }
    // Refined test space: minimize the residual functional in the discrete
    // dual norm, i.e. normal equations A^T G^{-1} A u = A^T G^{-1} b with
    // G the H1 Gram matrix of the test hats. A plain Euclidean least
    // squares is not a convergent discretization here.
    const int m = A.rows(), n = A.cols();
    const auto& xt = system.test->partition().nodes();
    std::vector<double> sub(std::max(0, m - 1)), diag(m), sup(std::max(0, m - 1));
    for (int i = 0; i < m; ++i) {
        const double hl = xt[i + 1] - xt[i], hr = xt[i + 2] - xt[i + 1];
        diag[i] = 1.0 / hl + 1.0 / hr;
        if (i + 1 < m) {
            sub[i] = -1.0 / hr;
            sup[i] = sub[i];
        }
    }
    Matrix ginv_a(m, n);
    std::vector<double> col(m);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < m; ++i) col[i] = A(i, j);
        const std::vector<double> z = thomas_solve(sub, diag, sup, col);
        for (int i = 0; i < m; ++i) ginv_a(i, j) = z[i];
    }
    const std::vector<double> ginv_b = thomas_solve(sub, diag, sup, system.rhs);

    Matrix ata = A.transposed_times(ginv_a);
    std::vector<double> atb = A.transposed_times(std::span<const double>(ginv_b));
    const double anorm = ata.norm1();
    LuFactor lu(std::move(ata));
    if (lu.singular()) throw SolverError("pg_solve: singular normal equations", HUGE_VAL);
    const double cond = lu.condition_estimate(anorm);
    if (cond > 1e14) throw SolverError("pg_solve: normal equations too ill-conditioned", cond);
    std::vector<double> u = lu.solve(atb);
    double rnorm = 0.0, bnorm = 0.0;
    for (int i = 0; i < A.rows(); ++i) {
        double r = -system.rhs[i];
        for (int j = 0; j < A.cols(); ++j) r += A(i, j) * u[j];
        rnorm += r * r;
        bnorm += system.rhs[i] * system.rhs[i];
    }
    const double rel = (bnorm > 0.0) ? std::sqrt(rnorm / bnorm) : std::sqrt(rnorm);
    return SolveInfo{GridFunction(system.trial, std::move(u)), cond, rel};
}

double left_boundary_functional(const GridFunction& v, double beta) {
    return left_frac_integral(v.to_power_sum(Side::Left), beta)(1.0);
}

double right_boundary_functional(const GridFunction& v, double beta) {
    return right_frac_integral(v.to_power_sum(Side::Right), beta)(0.0);
}

std::pair<GridFunction, GridFunction> solve_ul_ur(const DiffusivityField& K, double beta,
                                                  double theta,
                                                  std::shared_ptr<const FemSpace> space) {
    check_pg_beta(beta);
    // Constant-unit operator on the left; K enters only through w_l, w_r.
    const DiffusivityField unit = DiffusivityField::constant(1.0);
    PGSystem sys = assemble_pg(space, space, unit, beta, theta, nullptr);

    const auto& x = space->partition().nodes();
    const HarmonicPair pair = solve_wl_wr(K);
    const int n = space->dof_count();
    std::vector<double> Wl(x.size()), Wr(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        Wl[k] = pair.wl(x[k]);
        Wr[k] = pair.wr(x[k]);
    }
    std::vector<double> rhs_l(n), rhs_r(n);
    for (int i = 0; i < n; ++i) {
        rhs_l[i] = telescoped_rhs(x, i, Wl);
        rhs_r[i] = telescoped_rhs(x, i, Wr);
    }

    const double anorm = sys.matrix.norm1();
    LuFactor lu(sys.matrix);
    if (lu.singular() || lu.condition_estimate(anorm) > 1e14)
        throw SolverError("solve_ul_ur: constant-coefficient system is untrustworthy",
                          lu.singular() ? HUGE_VAL : lu.condition_estimate(anorm));
    GridFunction ul(space, lu.solve(rhs_l));
    GridFunction ur(space, lu.solve(rhs_r));
    return {std::move(ul), std::move(ur)};
}

WellposednessReport wellposedness_indicator(const DiffusivityField& K, double beta, double theta,
                                            std::shared_ptr<const FemSpace> space, double tol,
                                            double tol_inconclusive) {
    check_pg_beta(beta);
    auto [ul, ur] = solve_ul_ur(K, beta, theta, space);

    WellposednessReport rep;
    rep.tol = tol;
    rep.tol_inconclusive = tol_inconclusive;
    const double l_ul = left_boundary_functional(ul, beta);
    const double r_ul = right_boundary_functional(ul, beta);
    const double l_ur = left_boundary_functional(ur, beta);
    const double r_ur = right_boundary_functional(ur, beta);

    rep.xi = 1.0 + theta * l_ul - (1.0 - theta) * r_ul;
    // The u_r-based alternative carries no theta on its left term;
    // computed verbatim and reported, never reconciled.
    rep.xi_alt = 1.0 - l_ur + (1.0 - theta) * r_ur;
    rep.discrepancy = std::fabs(rep.xi - rep.xi_alt);

    const JNormOptions jopt;
    rep.u_l_norm = j_seminorm(ul.to_power_sum(Side::Left), 1.0 - beta, JSide::Left, jopt);
    rep.u_r_norm = j_seminorm(ur.to_power_sum(Side::Left), 1.0 - beta, JSide::Left, jopt);
    rep.perturbation_residual = perturbation_check(K);

    const double a = std::fabs(rep.xi);
    if (a >= tol)
        rep.verdict = WellposednessVerdict::Wellposed;
    else if (a <= tol_inconclusive)
        rep.verdict = WellposednessVerdict::Violated;
    else
        rep.verdict = WellposednessVerdict::Inconclusive;
    return rep;
}

double one_sided_xi_closed_form(const DiffusivityField& K, double beta, int theta01) {
    if (theta01 != 0 && theta01 != 1)
        throw std::invalid_argument("one_sided_xi_closed_form: theta must be 0 or 1");
    const HarmonicProfile R(K);
    std::vector<double> pts{0.0, 1.0};
    for (double b : K.breakpoints()) pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a = pts[i], b = pts[i + 1];
        if (theta01 == 1) {
            // weight (1-s)^{-beta}: singular only on the last cell
            const double alpha = (i + 2 == pts.size()) ? -beta : 0.0;
            if (alpha != 0.0)
                acc += weighted_integral(a, b, -beta, 0.0, 48,
                                         [&](double s) { return 1.0 / K(s); });
            else
                acc += weighted_integral(a, b, 0.0, 0.0, 48, [&](double s) {
                    return std::pow(1.0 - s, -beta) / K(s);
                });
        } else {
            const double al = (i == 0) ? -beta : 0.0;
            if (al != 0.0)
                acc += weighted_integral(a, b, 0.0, -beta, 48,
                                         [&](double s) { return 1.0 / K(s); });
            else
                acc += weighted_integral(a, b, 0.0, 0.0, 48,
                                         [&](double s) { return std::pow(s, -beta) / K(s); });
        }
    }
    return (1.0 - beta) * acc / R.total();
}

double perturbation_check(const DiffusivityField& K) {
    const HarmonicProfile R(K);
    const double inv_total = 1.0 / R.total();
    std::vector<double> pts{0.0, 1.0};
    for (double b : K.breakpoints()) pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        acc += weighted_integral(pts[i], pts[i + 1], 0.0, 0.0, 48, [&](double s) {
            const double d = inv_total / K(s) - 1.0;
            return d * d;
        });
    return std::sqrt(std::max(0.0, acc));
}

CharacterizationSolve solve_via_characterization(const DiffusivityField& K, double beta,
                                                 double theta, const PowerTermSum& f,
                                                 std::shared_ptr<const FemSpace> space) {
    check_pg_beta(beta);
    const int n = space->dof_count();
    const auto& x = space->partition().nodes();

    // Constant-unit PG block (D I^beta_theta phi_j, D psi_i).
    const DiffusivityField unit = DiffusivityField::constant(1.0);
    PGSystem block = assemble_pg(space, space, unit, beta, theta, nullptr);

    const HarmonicPair pair = solve_wl_wr(K);
    const SourceProfile wf = solve_wf(K, f);
    std::vector<double> Wl(x.size()), Wr(x.size()), Wf(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        Wl[k] = pair.wl(x[k]);
        Wr[k] = pair.wr(x[k]);
        Wf[k] = wf(x[k]);
    }

    // Bordered system: rows test the differentiated integral equation,
    // the last two equations couple the scalar functionals
    //   g_l = (1-theta) (rI u)(0),  g_r = theta (lI u)(1).
    Matrix B(n + 2, n + 2);
    std::vector<double> rhs(n + 2, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) B(i, j) = block.matrix(i, j);
        B(i, n) = -telescoped_rhs(x, i, Wl);
        B(i, n + 1) = -telescoped_rhs(x, i, Wr);
        rhs[i] = telescoped_rhs(x, i, Wf);
    }
    for (int j = 0; j < n; ++j) {
        const PowerTermSum hat_l = space->basis(j).to_power_sum(Side::Left);
        const PowerTermSum hat_r = space->basis(j).to_power_sum(Side::Right);
        const double Ll = left_frac_integral(hat_l, beta)(1.0);
        const double Rr = right_frac_integral(hat_r, beta)(0.0);
        B(n, j) = -(1.0 - theta) * Rr;
        B(n + 1, j) = -theta * Ll;
    }
    B(n, n) = 1.0;
    B(n + 1, n + 1) = 1.0;

    const double anorm = B.norm1();
    LuFactor lu(std::move(B));
    if (lu.singular())
        throw WellposednessViolation("characterization system is singular");
    const double cond = lu.condition_estimate(anorm);
    if (cond > 1e14)
        throw WellposednessViolation("characterization system is numerically singular");
    std::vector<double> sol = lu.solve(rhs);

    std::vector<double> coeffs(sol.begin(), sol.begin() + n);
    GridFunction u(space, std::move(coeffs));
    const double c_l = sol[n], c_r = sol[n + 1];

    // Defect of the (undifferentiated) integral equation on a sample grid.
    const PowerTermSum iu = two_sided_integral(u.to_piecewise_poly(), beta, theta);
    double sup = 0.0;
    for (int k = 0; k <= 200; ++k) {
        const double s = static_cast<double>(k) / 200.0;
        const double defect = iu(s) - c_l * pair.wl(s) - c_r * pair.wr(s) - wf(s);
        sup = std::max(sup, std::fabs(defect));
    }
    return CharacterizationSolve{std::move(u), c_l, c_r, sup};
}

std::vector<std::pair<int, double>> regularity_report(const GridFunction& u,
                                                      const DiffusivityField& K,
                                                      const PowerTermSum& f, double beta,
                                                      double theta, int k_max) {
    check_pg_beta(beta);
    if (K.kind() != DiffusivityField::Kind::Constant &&
        K.kind() != DiffusivityField::Kind::Polynomial)
        throw UnsupportedRepresentation(
            "regularity_report needs a differentiable (constant or polynomial) diffusivity");

    const double g_l = (1.0 - theta) * right_boundary_functional(u, beta);
    const double g_r = theta * left_boundary_functional(u, beta);
    const HarmonicPair pair = solve_wl_wr(K);
    const SourceProfile wf = solve_wf(K, f);

    std::vector<std::pair<int, double>> out;
    const PowerTermSum iu = two_sided_integral(u.to_piecewise_poly(), beta, theta);
    for (int k = 0; k <= k_max; ++k) {
        double norm;
        if (k == 0) {
            // ||I^beta_theta u|| straight from the discrete solution.
            norm = l2_norm(iu);
        } else {
            auto value = [&](double s) {
                return g_l * pair.dk_wl(k, s) + g_r * pair.dk_wr(k, s) + wf.dk_wf(k, s);
            };
            std::vector<double> pts{0.0, 1.0};
            for (double b : K.breakpoints()) pts.push_back(b);
            for (double b : f.interior_anchors()) pts.push_back(b);
            std::sort(pts.begin(), pts.end());
            double acc = 0.0;
            for (std::size_t i = 0; i + 1 < pts.size(); ++i)
                acc += weighted_integral(pts[i], pts[i + 1], 0.0, 0.0, 48, [&](double s) {
                    const double v = value(s);
                    return v * v;
                });
            norm = std::sqrt(std::max(0.0, acc));
        }
        out.emplace_back(k, norm);
    }
    return out;
}

}  // namespace fracbvp
