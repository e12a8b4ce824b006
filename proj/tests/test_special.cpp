#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fracbvp/special.hpp"

using namespace fracbvp;

namespace {
// Reference values to 20 digits (independent high-precision evaluation).
struct Ref {
    double x, gamma;
};
constexpr Ref kRefs[] = {
    {1.0, 1.0},
    {1.5, 0.88622692545275801365},
    {4.0, 6.0},
    {0.5, 1.7724538509055160273},
    {2.5, 1.3293403881791370205},
    {3.25, 2.5492569667185292818},
    {0.25, 3.6256099082219083119},
    {1.25, 0.90640247705547707798},
    {2.25, 1.1330030963193463475},
    {0.1, 9.5135076986687312858},
    {7.5, 1871.2543057977883465},
};
}  // namespace

TEST_CASE("gamma matches reference values to 1e-13") {
    for (const Ref& r : kRefs) {
        CHECK(std::fabs(gamma_fn(r.x) - r.gamma) <= 1e-13 * r.gamma);
    }
}

TEST_CASE("gamma recurrence and integer factorials") {
    CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(gamma_fn(4.0) == doctest::Approx(6.0).epsilon(1e-14));
    for (double x : {0.3, 1.7, 3.2, 9.9}) {
        CHECK(gamma_fn(x + 1.0) == doctest::Approx(x * gamma_fn(x)).epsilon(1e-13));
    }
}

TEST_CASE("gamma rejects nonpositive arguments") {
    CHECK_THROWS_AS(gamma_fn(0.0), std::domain_error);
    CHECK_THROWS_AS(gamma_fn(-1.5), std::domain_error);
    CHECK_THROWS_AS(log_gamma(-0.1), std::domain_error);
}

TEST_CASE("log_gamma and gamma_ratio agree with gamma") {
    for (double x : {0.2, 1.0, 2.5, 20.0, 100.0}) {
        CHECK(std::exp(log_gamma(x)) == doctest::Approx(gamma_fn(x)).epsilon(1e-12));
    }
    CHECK(gamma_ratio(3.0, 3.25) == doctest::Approx(2.0 / 2.5492569667185292818).epsilon(1e-13));
    CHECK(gamma_ratio(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("beta function") {
    CHECK(beta_fn(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(beta_fn(2.0, 3.0) == doctest::Approx(1.0 / 12.0).epsilon(1e-13));
    CHECK(beta_fn(0.5, 0.5) == doctest::Approx(M_PI).epsilon(1e-13));
}
