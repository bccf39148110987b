#include <cmath>

#include "doctest.h"
#include "gfnbp/errors.hpp"
#include "gfnbp/quadrature.hpp"

using namespace gfnbp;

TEST_CASE("polynomials and smooth integrands are nailed by the nested rule") {
    CHECK(quad::adaptive([](double x) { return x * x; }, 0.0, 1.0) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(quad::adaptive([](double x) { return std::sin(x); }, 0.0,
                         3.14159265358979323846) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(quad::adaptive([](double x) { return std::exp(-x); }, 0.0, 30.0) ==
          doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("degenerate and reversed-width intervals") {
    CHECK(quad::adaptive([](double x) { return x; }, 2.0, 2.0) == 0.0);
}

TEST_CASE("integrable endpoint singularities converge under refinement") {
    CHECK(quad::adaptive([](double x) { return 1.0 / std::sqrt(x); }, 1e-16,
                         1.0) == doctest::Approx(2.0).epsilon(1e-5));
    CHECK(quad::adaptive([](double x) { return std::log(x); }, 1e-16, 1.0) ==
          doctest::Approx(-1.0).epsilon(1e-5));
}

TEST_CASE("interior kinks are handled, and seeded splits make them exact") {
    double unseeded =
        quad::adaptive([](double x) { return std::abs(x); }, -1.0, 1.0);
    CHECK(unseeded == doctest::Approx(1.0).epsilon(1e-9));
    double seeded = quad::adaptive([](double x) { return std::abs(x); }, -1.0,
                                   1.0, {}, {0.0});
    CHECK(seeded == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("oscillatory integrand with an exhausted panel budget fails loudly") {
    quad::QuadOptions opt;
    opt.abs_tol = 1e-15;
    opt.rel_tol = 1e-15;
    opt.max_panels = 2;
    CHECK_THROWS_AS(quad::adaptive([](double x) { return std::sin(50.0 * x); },
                                   0.0, 10.0, opt),
                    QuadratureFail);
}

TEST_CASE("panel budget large enough resolves the same oscillatory integral") {
    double v =
        quad::adaptive([](double x) { return std::sin(50.0 * x); }, 0.0, 10.0);
    CHECK(v == doctest::Approx((1.0 - std::cos(500.0)) / 50.0).epsilon(1e-8));
}
