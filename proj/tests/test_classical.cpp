#include <doctest.h>

#include <cmath>
#include <memory>

#include "fracbvp/classical.hpp"
#include "fracbvp/errors.hpp"

using namespace fracbvp;

namespace {
PowerTermSum poly(std::initializer_list<double> c) {
    return PowerTermSum::from_polynomial(Polynomial(std::vector<double>(c)));
}
}  // namespace

TEST_CASE("diffusivity bounds are verified") {
    const auto k = DiffusivityField::polynomial({1.0, 1.0});
    CHECK(k.bounds().first == doctest::Approx(1.0));
    CHECK(k.bounds().second == doctest::Approx(2.0));
    CHECK_THROWS_AS(DiffusivityField::polynomial({0.0, 1.0}), std::domain_error);
    CHECK_THROWS_AS(DiffusivityField::piecewise_constant({0.5}, {1.0, -2.0}), std::domain_error);
    CHECK_THROWS_AS(DiffusivityField::piecewise_constant({0.5, 0.25}, {1.0, 2.0, 3.0}),
                    std::invalid_argument);
}

TEST_CASE("tabulated diffusivity interpolates the reciprocal") {
    const auto k = DiffusivityField::tabulated({0.0, 0.5, 1.0}, {1.0, 2.0, 1.0});
    CHECK(k(0.0) == doctest::Approx(1.0));
    CHECK(k(0.5) == doctest::Approx(2.0));
    // midpoint: 1/K is the average of 1 and 0.5
    CHECK(k(0.25) == doctest::Approx(1.0 / 0.75));
}

TEST_CASE("closed-form harmonic profiles for constant coefficients") {
    const auto k1 = DiffusivityField::constant(1.0);
    const HarmonicPair p1 = solve_wl_wr(k1);
    const auto k5 = DiffusivityField::constant(5.0);
    const HarmonicPair p5 = solve_wl_wr(k5);
    for (int i = 0; i <= 20; ++i) {
        const double x = i / 20.0;
        CHECK(p1.wl(x) == doctest::Approx(1.0 - x).epsilon(1e-14));
        CHECK(p1.wr(x) == doctest::Approx(x).epsilon(1e-14));
        // scale invariance
        CHECK(p5.wl(x) == doctest::Approx(p1.wl(x)).epsilon(1e-14));
        CHECK(p5.wr(x) == doctest::Approx(p1.wr(x)).epsilon(1e-14));
    }
}

TEST_CASE("piecewise-constant coefficient: exact resistivity") {
    const auto k = DiffusivityField::piecewise_constant({0.5}, {1.0, 2.0});
    const HarmonicPair p = solve_wl_wr(k);
    CHECK(p.wr(0.5) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(p.wl(0.0) == doctest::Approx(1.0));
    CHECK(p.wl(1.0) == doctest::Approx(0.0));
    CHECK(p.wr(0.0) == doctest::Approx(0.0));
    CHECK(p.wr(1.0) == doctest::Approx(1.0));
}

TEST_CASE("wl + wr is one and both stay inside [0,1]") {
    const auto k = DiffusivityField::polynomial({1.0, 0.5, 0.25});
    const HarmonicPair p = solve_wl_wr(k);
    for (int i = 0; i <= 1000; ++i) {
        const double x = i / 1000.0;
        const double wl = p.wl(x), wr = p.wr(x);
        CHECK(std::fabs(wl + wr - 1.0) <= 1e-12);
        CHECK(wl >= -1e-12);
        CHECK(wl <= 1.0 + 1e-12);
        CHECK(wr >= -1e-12);
        CHECK(wr <= 1.0 + 1e-12);
    }
}

TEST_CASE("harmonic profile annihilates every interior test hat") {
    const auto k = DiffusivityField::polynomial({1.0, 1.0});
    const HarmonicPair p = solve_wl_wr(k);
    auto space = std::make_shared<const FemSpace>(Partition::uniform(16));
    const auto& x = space->partition().nodes();
    // (K Dw_l, Dphi_i) telescopes to differences of -R-normalized values;
    // evaluate by high-order quadrature per cell instead.
    for (int i = 0; i < space->dof_count(); ++i) {
        double acc = 0.0;
        const double hl = x[i + 1] - x[i], hr = x[i + 2] - x[i + 1];
        for (int q = 0; q < 64; ++q) {
            const double t = (q + 0.5) / 64.0;
            const double xl = x[i] + hl * t;
            const double xr = x[i + 1] + hr * t;
            acc += k(xl) * p.dwl(xl) * (1.0 / hl) * hl / 64.0;
            acc += k(xr) * p.dwl(xr) * (-1.0 / hr) * hr / 64.0;
        }
        CHECK(std::fabs(acc) <= 1e-8);
    }
}

TEST_CASE("source profiles in closed form") {
    const auto k1 = DiffusivityField::constant(1.0);
    const SourceProfile wf = solve_wf(k1, PowerTermSum::constant(2.0));
    for (int i = 0; i <= 20; ++i) {
        const double x = i / 20.0;
        CHECK(wf(x) == doctest::Approx(x * (1.0 - x)).epsilon(1e-12));
    }
    const SourceProfile zero = solve_wf(k1, PowerTermSum{});
    CHECK(zero(0.37) == doctest::Approx(0.0));

    const auto k2 = DiffusivityField::constant(2.0);
    const SourceProfile wf2 = solve_wf(k2, PowerTermSum::constant(2.0));
    for (int i = 0; i <= 20; ++i) {
        const double x = i / 20.0;
        CHECK(wf2(x) == doctest::Approx(0.5 * x * (1.0 - x)).epsilon(1e-12));
    }
}

TEST_CASE("source profile satisfies the weak form against hats") {
    const auto k = DiffusivityField::polynomial({1.0, 0.5});
    const PowerTermSum f = poly({1.0, 2.0});
    const SourceProfile wf = solve_wf(k, f);
    CHECK(std::fabs(wf(1.0)) <= 1e-12);
    auto space = std::make_shared<const FemSpace>(Partition::uniform(12));
    const auto& x = space->partition().nodes();
    for (int i = 0; i < space->dof_count(); ++i) {
        // (K w_f', phi_i') - <f, phi_i> via fine quadrature
        double acc = 0.0;
        const double hl = x[i + 1] - x[i], hr = x[i + 2] - x[i + 1];
        const int m = 200;
        for (int q = 0; q < m; ++q) {
            const double t = (q + 0.5) / m;
            const double xl = x[i] + hl * t;
            const double xr = x[i + 1] + hr * t;
            acc += (k(xl) * wf.dwf(xl) / hl - f(xl) * (xl - x[i]) / hl) * hl / m;
            acc += (-k(xr) * wf.dwf(xr) / hr - f(xr) * (x[i + 2] - xr) / hr) * hr / m;
        }
        CHECK(std::fabs(acc) <= 1e-6);  // midpoint-rule-limited check
    }
}

TEST_CASE("hat FEM reproduces closed forms at the nodes") {
    const auto k1 = DiffusivityField::constant(1.0);
    auto space = std::make_shared<const FemSpace>(Partition::uniform(8));
    const GridFunction u = fem_second_order(k1, PowerTermSum::constant(2.0), space);
    const SourceProfile wf = solve_wf(k1, PowerTermSum::constant(2.0));
    for (int i = 0; i < space->dof_count(); ++i) {
        const double xi = space->node_of_dof(i);
        CHECK(u.coefficients()[i] == doctest::Approx(wf(xi)).epsilon(1e-10));
    }

    const GridFunction uz = fem_second_order(k1, PowerTermSum{}, space);
    for (double c : uz.coefficients()) CHECK(c == 0.0);

    // piecewise-constant K with a break on a mesh node: nodal exactness
    const auto kpw = DiffusivityField::piecewise_constant({0.5}, {1.0, 3.0});
    const GridFunction upw = fem_second_order(kpw, PowerTermSum::constant(1.0), space);
    const SourceProfile wfpw = solve_wf(kpw, PowerTermSum::constant(1.0));
    for (int i = 0; i < space->dof_count(); ++i) {
        const double xi = space->node_of_dof(i);
        CHECK(upw.coefficients()[i] == doctest::Approx(wfpw(xi)).epsilon(1e-10));
    }
}

TEST_CASE("reciprocal derivatives of a polynomial coefficient") {
    const auto k = DiffusivityField::polynomial({1.0, 1.0});  // K = 1 + x
    // d/dx (1/K) = -1/(1+x)^2 ; d2 = 2/(1+x)^3
    for (double x : {0.0, 0.3, 0.9}) {
        CHECK(k.inv_derivative(1, x) == doctest::Approx(-1.0 / std::pow(1 + x, 2)).epsilon(1e-12));
        CHECK(k.inv_derivative(2, x) == doctest::Approx(2.0 / std::pow(1 + x, 3)).epsilon(1e-12));
        CHECK(k.inv_derivative(3, x) == doctest::Approx(-6.0 / std::pow(1 + x, 4)).epsilon(1e-12));
    }
    const auto kc = DiffusivityField::constant(4.0);
    CHECK(kc.inv_derivative(1, 0.5) == 0.0);
    const auto kt = DiffusivityField::tabulated({0.0, 1.0}, {1.0, 2.0});
    CHECK_THROWS_AS(kt.inv_derivative(2, 0.5), UnsupportedRepresentation);
}
