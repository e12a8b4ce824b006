#include <doctest.h>

#include <cmath>
#include <memory>

#include "fracbvp/fracops.hpp"
#include "fracbvp/galerkin.hpp"
#include "fracbvp/harness.hpp"
#include "fracbvp/special.hpp"

using namespace fracbvp;

TEST_CASE("coercivity witness function hits the documented values") {
    const PiecewisePoly w = coercivity_witness();
    CHECK(w(0.25) == doctest::Approx(1.0));
    CHECK(w(0.5) == doctest::Approx(0.0));
    CHECK(w(0.75) == doctest::Approx(-1.0));
    CHECK(w(0.0) == doctest::Approx(0.0));
    CHECK(w(1.0) == doctest::Approx(0.0));
    CHECK(w.continuous(1e-12));
}

TEST_CASE("closed-form profiles equal the generic fractional integral") {
    for (double beta : {0.2, 0.5, 0.8}) {
        const auto [left, right] = coercivity_witness_profiles(beta);
        const PiecewisePoly dw = coercivity_witness().derivative();
        const PowerTermSum gl = left_frac_integral(dw, beta);
        const PowerTermSum gr = right_frac_integral(dw, beta);
        for (int k = 0; k <= 100; ++k) {
            const double x = k / 100.0;
            CHECK(left(x) == doctest::Approx(gl(x)).epsilon(1e-12));
            CHECK(right(x) == doctest::Approx(gr(x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("first branch of the left profile is a pure power") {
    const double beta = 0.37;
    const auto [left, right] = coercivity_witness_profiles(beta);
    const double c = 4.0 / gamma_fn(beta + 1.0);
    for (double x : {0.05, 0.15, 0.25}) {
        CHECK(left(x) == doctest::Approx(c * std::pow(x, beta)).epsilon(1e-13));
    }
    // mirrored branch on [3/4, 1]
    for (double x : {0.75, 0.9, 1.0}) {
        CHECK(right(x) == doctest::Approx(c * std::pow(1.0 - x, beta)).epsilon(1e-13));
    }
}

TEST_CASE("corner value of the combined profile") {
    // theta = 0, beta = 1/2: scale * [(2 theta - 1) + (1-theta)(1 + 3^b - 2^{1+b})]
    const double beta = 0.5;
    const auto [left, right] = coercivity_witness_profiles(beta);
    const double v = right(0.25);  // theta = 0 keeps only the right part
    CHECK(v == doctest::Approx(-2.47425639119956347).epsilon(1e-12));

    const double scale = std::pow(4.0, 1.0 - beta) / gamma_fn(beta + 1.0);
    for (double theta : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const double combined = theta * left(0.25) + (1.0 - theta) * right(0.25);
        const double formula =
            scale * ((2.0 * theta - 1.0) +
                     (1.0 - theta) * (1.0 + std::pow(3.0, beta) - std::pow(2.0, 1.0 + beta)));
        CHECK(combined == doctest::Approx(formula).epsilon(1e-12));
    }
}

TEST_CASE("lambda is zero at the ends and positive inside") {
    CHECK(std::fabs(lambda_beta(0.0)) <= 1e-12);
    CHECK(std::fabs(lambda_beta(1.0)) <= 1e-12);
    CHECK(lambda_beta(0.5) == doctest::Approx(0.0963763171773128).epsilon(1e-10));
    CHECK(lambda_beta(0.2) == doctest::Approx(0.0516657703785527).epsilon(1e-10));
    CHECK(lambda_beta(0.8) == doctest::Approx(0.0739775679038045).epsilon(1e-10));
    for (int i = 1; i <= 9; ++i) CHECK(lambda_beta(i / 10.0) > 0.0);
}

TEST_CASE("coercivity violation certificates") {
    for (auto [beta, theta] : {std::pair{0.5, 0.25}, std::pair{0.5, 0.75}, std::pair{0.2, 0.0}}) {
        const CoercivityCertificate cert = find_coercivity_violation(beta, theta);
        CHECK(cert.value < 0.0);
        CHECK(cert.delta > 0.0);
        CHECK(cert.K_l > 0.0);
        CHECK(cert.K.bounds().first > 0.0);
        // the witness value is reproduced by the assembled form
        const double direct = bilinear_B(cert.w, cert.w, cert.K, beta, theta);
        CHECK(direct == doctest::Approx(cert.value).epsilon(1e-10));
    }
}

TEST_CASE("certificate survives the independent oracle quadrature") {
    const CoercivityCertificate cert = find_coercivity_violation(0.5, 0.25);
    const double oracle = oracle_bilinear(cert.w, cert.w, cert.K, 0.5, 0.25, FormKind::B, 1e-7);
    CHECK(oracle < 0.0);
    CHECK(oracle == doctest::Approx(cert.value).epsilon(1e-6));
}

TEST_CASE("constant-coefficient form is positive on a test battery") {
    const auto k1 = DiffusivityField::constant(1.0);
    std::vector<PiecewisePoly> battery;
    battery.push_back(PiecewisePoly({0.0, 0.5, 1.0},
                                    {Polynomial({0.0, 1.0}), Polynomial({0.5, -1.0})}));
    battery.push_back(coercivity_witness());
    battery.push_back(PiecewisePoly({0.0, 1.0}, {Polynomial({0.0, 1.0, -1.0})}));
    for (double beta : {0.2, 0.5, 0.8}) {
        for (double theta : {0.0, 0.5, 1.0}) {
            for (const auto& w : battery) {
                CHECK(bilinear_B(w, w, k1, beta, theta) > 0.0);
            }
        }
    }
}

TEST_CASE("bilinear form matches the oracle on a smooth pair") {
    const auto k = DiffusivityField::polynomial({1.0, 0.5});
    const PiecewisePoly w({0.0, 1.0}, {Polynomial({0.0, 1.0, -1.0})});
    const PiecewisePoly v({0.0, 0.5, 1.0}, {Polynomial({0.0, 1.0}), Polynomial({0.5, -1.0})});
    const double direct = bilinear_B(w, v, k, 0.4, 0.3);
    const double oracle = oracle_bilinear(w, v, k, 0.4, 0.3, FormKind::B, 1e-7);
    CHECK(direct == doctest::Approx(oracle).epsilon(1e-6));
    CHECK(bilinear_B(PiecewisePoly({0.0, 1.0}, {Polynomial{}}), v, k, 0.4, 0.3) == 0.0);
}

TEST_CASE("assembled matrix: zero source, symmetric-part definiteness") {
    const auto k1 = DiffusivityField::constant(1.0);
    auto space = std::make_shared<const FemSpace>(Partition::uniform(16));
    const GalerkinSystem sys = assemble_galerkin(space, k1, 0.5, 0.4, PowerTermSum{});
    for (double r : sys.rhs) CHECK(r == 0.0);
    CHECK(symmetric_part_positive_definite(sys.matrix));
}

TEST_CASE("constant-K symmetric part stays positive definite across orders") {
    const auto k1 = DiffusivityField::constant(1.0);
    for (double beta : {0.2, 0.5, 0.8}) {
        for (int n : {8, 16, 32, 64}) {
            auto space = std::make_shared<const FemSpace>(Partition::uniform(n));
            const GalerkinSystem sys =
                assemble_galerkin(space, k1, beta, 0.5, PowerTermSum::constant(1.0));
            CHECK(symmetric_part_positive_definite(sys.matrix));
        }
    }
}

TEST_CASE("certificate coefficient makes the discrete quadratic form negative") {
    const CoercivityCertificate cert = find_coercivity_violation(0.5, 0.25);
    // mesh containing 1/4, 3/4 and the band edge
    std::vector<double> nodes;
    for (int i = 0; i <= 64; ++i) nodes.push_back(i / 64.0);
    nodes.push_back(0.25 - cert.delta);
    nodes.push_back(0.25);
    nodes.push_back(0.75);
    auto space = std::make_shared<const FemSpace>(Partition::from_nodes(nodes));
    const GalerkinSystem sys =
        assemble_galerkin(space, cert.K, cert.beta, cert.theta, PowerTermSum{});
    // interpolant of the witness in the discrete space
    std::vector<double> w(space->dof_count());
    const PiecewisePoly witness = coercivity_witness();
    for (int i = 0; i < space->dof_count(); ++i) w[i] = witness(space->node_of_dof(i));
    double quad = 0.0;
    for (int i = 0; i < sys.matrix.rows(); ++i)
        for (int j = 0; j < sys.matrix.cols(); ++j) quad += w[i] * sys.matrix(i, j) * w[j];
    CHECK(quad < 0.0);
    CHECK(!symmetric_part_positive_definite(sys.matrix));
}

TEST_CASE("galerkin solve: manufactured solution errors fall under refinement") {
    const auto k1 = DiffusivityField::constant(1.0);
    const ManufacturedCase mc = manufacture(
        PowerTermSum::from_polynomial(Polynomial({0.0, 1.0, -1.0})), k1, 0.5, 0.5);
    double prev = HUGE_VAL;
    for (int n : {8, 16, 32}) {
        auto space = std::make_shared<const FemSpace>(Partition::uniform(n));
        const SolveInfo info = galerkin_solve(assemble_galerkin(space, k1, 0.5, 0.5, mc.f));
        CHECK(info.residual <= 1e-10);
        const PowerTermSum diff = info.u.to_power_sum(Side::Left) - mc.u_exact;
        const double err = l2_norm(diff);
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev <= 2e-3);

    auto space = std::make_shared<const FemSpace>(Partition::uniform(8));
    const SolveInfo zero = galerkin_solve(assemble_galerkin(space, k1, 0.5, 0.5, PowerTermSum{}));
    for (double c : zero.u.coefficients()) CHECK(std::fabs(c) <= 1e-14);
}
