#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "doctest.h"
#include "gfnbp/errors.hpp"
#include "gfnbp/kernels/kernels.hpp"
#include "gfnbp/rng.hpp"

using namespace gfnbp;
using namespace gfnbp::kern;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t stream,
                               double lo = 0.0, double hi = 1.0) {
    rng::Philox g(0xBEEF, stream);
    std::vector<double> v(n);
    for (auto& x : v) x = lo + (hi - lo) * g.u01();
    return v;
}

struct BackendGuard {
    Backend saved;
    BackendGuard() : saved(active_backend()) {}
    ~BackendGuard() { force_backend(saved); }
};

}  // namespace

TEST_CASE("scalar reductions match straightforward references") {
    BackendGuard guard;
    force_backend(Backend::scalar);
    auto v = random_vec(1001, 1, -2.0, 3.0);
    long double ref = 0.0L;
    for (double x : v) ref += x;
    CHECK(sum(v.data(), v.size()) ==
          doctest::Approx((double)ref).epsilon(1e-14));

    auto w = random_vec(1001, 2, -1.0, 1.0);
    long double refdot = 0.0L;
    for (std::size_t i = 0; i < v.size(); ++i) refdot += v[i] * w[i];
    CHECK(dot(v.data(), w.data(), v.size()) ==
          doctest::Approx((double)refdot).epsilon(1e-13));

    double m = 0.0, var = 0.0;
    mean_var(v.data(), v.size(), &m, &var);
    long double mr = ref / (long double)v.size(), s2 = 0.0L;
    for (double x : v) s2 += (x - mr) * (x - mr);
    CHECK(m == doctest::Approx((double)mr).epsilon(1e-14));
    CHECK(var ==
          doctest::Approx((double)(s2 / (long double)v.size())).epsilon(1e-13));
}

TEST_CASE("compensated summation survives cancellation the naive loop loses") {
    BackendGuard guard;
    std::vector<double> v = {1e16, 1.0, -1e16, 1.0};
    for (Backend b : {Backend::scalar, Backend::avx2}) {
        if (!backend_supported(b)) continue;
        force_backend(b);
        CHECK(sum(v.data(), v.size()) == 2.0);
    }
}

TEST_CASE("empty and single-element inputs") {
    BackendGuard guard;
    for (Backend b : {Backend::scalar, Backend::avx2}) {
        if (!backend_supported(b)) continue;
        force_backend(b);
        CHECK(sum(nullptr, 0) == 0.0);
        double m = -1.0, var = -1.0;
        mean_var(nullptr, 0, &m, &var);
        CHECK(m == 0.0);
        CHECK(var == 0.0);
        double one = 4.2;
        CHECK(sum(&one, 1) == 4.2);
        mean_var(&one, 1, &m, &var);
        CHECK(m == 4.2);
        CHECK(var == 0.0);
    }
}

TEST_CASE("vector backend agrees with scalar on every reduction") {
    if (!backend_supported(Backend::avx2)) return;
    BackendGuard guard;
    for (std::size_t n : {std::size_t(1), std::size_t(3), std::size_t(8),
                          std::size_t(61), std::size_t(1000), std::size_t(4096),
                          std::size_t(10007)}) {
        auto v = random_vec(n, 100 + n, 0.0, 5.0);
        auto w = random_vec(n, 200 + n, -1.0, 2.0);

        force_backend(Backend::scalar);
        double s0 = sum(v.data(), n);
        double d0 = dot(v.data(), w.data(), n);
        double m0, var0, p0a, p0b, e0a, e0b;
        mean_var(w.data(), n, &m0, &var0);
        pow_sum(v.data(), n, 0.37, &p0a, &p0b);
        exp_neg_sum(v.data(), n, 1.3, &e0a, &e0b);

        force_backend(Backend::avx2);
        CHECK(sum(v.data(), n) == doctest::Approx(s0).epsilon(1e-13));
        CHECK(dot(v.data(), w.data(), n) == doctest::Approx(d0).epsilon(1e-13));
        double m1, var1, p1a, p1b, e1a, e1b;
        mean_var(w.data(), n, &m1, &var1);
        CHECK(m1 == doctest::Approx(m0).epsilon(1e-13));
        CHECK(var1 == doctest::Approx(var0).scale(1.0).epsilon(1e-12));
        pow_sum(v.data(), n, 0.37, &p1a, &p1b);
        CHECK(p1a == doctest::Approx(p0a).epsilon(1e-12));
        CHECK(p1b == doctest::Approx(p0b).epsilon(1e-12));
        exp_neg_sum(v.data(), n, 1.3, &e1a, &e1b);
        CHECK(e1a == doctest::Approx(e0a).epsilon(1e-12));
        CHECK(e1b == doctest::Approx(e0b).epsilon(1e-12));
    }
}

TEST_CASE("transcendental kernels track libm closely across magnitudes") {
    BackendGuard guard;
    auto v = random_vec(2048, 9, 0.0, 1.0);
    // spread values over several decades, keep zeros in play
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = (i % 97 == 0) ? 0.0 : v[i] * std::pow(10.0, (double)(i % 7) - 3);
    }
    for (double p : {0.1, 0.5, 2.0}) {
        long double r1 = 0.0L, r2 = 0.0L;
        for (double x : v) {
            double t = x > 0.0 ? std::pow(x, p) : 0.0;
            r1 += t;
            r2 += t * t;
        }
        for (Backend b : {Backend::scalar, Backend::avx2}) {
            if (!backend_supported(b)) continue;
            force_backend(b);
            double g1, g2;
            pow_sum(v.data(), v.size(), p, &g1, &g2);
            CHECK(g1 == doctest::Approx((double)r1).epsilon(1e-12));
            CHECK(g2 == doctest::Approx((double)r2).epsilon(1e-12));
        }
    }
    for (double u : {0.25, 1.0, 4.0}) {
        long double r1 = 0.0L, r2 = 0.0L;
        for (double x : v) {
            r1 += std::exp(-u * x);
            r2 += std::exp(-2.0 * u * x);
        }
        for (Backend b : {Backend::scalar, Backend::avx2}) {
            if (!backend_supported(b)) continue;
            force_backend(b);
            double g1, g2;
            exp_neg_sum(v.data(), v.size(), u, &g1, &g2);
            CHECK(g1 == doctest::Approx((double)r1).epsilon(1e-12));
            CHECK(g2 == doctest::Approx((double)r2).epsilon(1e-12));
        }
    }
}

TEST_CASE("huge exponents underflow cleanly instead of denormal noise") {
    BackendGuard guard;
    std::vector<double> v = {800.0, 1000.0, 5000.0, 0.5};
    for (Backend b : {Backend::scalar, Backend::avx2}) {
        if (!backend_supported(b)) continue;
        force_backend(b);
        double g1, g2;
        exp_neg_sum(v.data(), v.size(), 1.0, &g1, &g2);
        CHECK(g1 == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
        CHECK(g2 == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    }
}

TEST_CASE("backend forcing is observable and rejects unsupported targets") {
    BackendGuard guard;
    force_backend(Backend::scalar);
    CHECK(active_backend() == Backend::scalar);
    CHECK(std::string(backend_name(Backend::scalar)) == "scalar");
    CHECK(std::string(backend_name(Backend::avx2)) == "avx2");
    if (backend_supported(Backend::avx2)) {
        force_backend(Backend::avx2);
        CHECK(active_backend() == Backend::avx2);
    } else {
        CHECK_THROWS_AS(force_backend(Backend::avx2), DomainError);
    }
}
