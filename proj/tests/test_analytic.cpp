#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "gfnbp/analytic.hpp"
#include "gfnbp/errors.hpp"
#include "gfnbp/params.hpp"
#include "gfnbp/quadrature.hpp"
#include "gfnbp/specfun.hpp"
#include "gfnbp/stats.hpp"

using namespace gfnbp;
using namespace gfnbp::analytic;

namespace {

GfnbpParams gp(double alpha, double beta, double rho, double mu,
               double lambda) {
    GfnbpParams p;
    p.alpha = alpha;
    p.beta = beta;
    p.rho = rho;
    p.mu = mu;
    p.lambda = lambda;
    return p;
}

SpaceTimeParams stp(const GfnbpParams& base, double ap, double bp, double c) {
    SpaceTimeParams sp;
    sp.base = base;
    sp.alpha_prime = ap;
    sp.beta_prime = bp;
    sp.rate_c = c;
    return sp;
}

PmfTable frozen_table(double t, std::vector<double> probs, double tail) {
    PmfTable tab;
    tab.t = t;
    tab.probs = std::move(probs);
    tab.tail_bound = tail;
    tab.method = PmfMethod::empirical;
    return tab;
}

// 1e6-path reference histograms; the MC settings live with the generator
// binary, the numbers are frozen here.
const std::vector<double> kGfnbpHist0905 = {
    0.50044900000000003, 0.24007000000000001, 0.12015000000000001,
    0.061912, 0.032894, 0.018051, 0.00976, 0.005723, 0.003381, 0.002041,
    0.001329, 0.000871, 0.000619, 0.000471, 0.000341, 0.00028, 0.000203,
    0.00017, 0.000121, 0.000127, 9.6e-05, 7.9e-05, 6.2e-05, 6.9e-05,
    5.3e-05, 6.4e-05, 4.0e-05, 4.8e-05, 3.7e-05, 2.8e-05, 1.9e-05, 2.1e-05,
    2.1e-05, 2.5e-05, 2.0e-05, 2.6e-05, 2.1e-05, 2.6e-05, 1.3e-05, 1.2e-05};
const double kGfnbpTail0905 = 0.00025700000000000001;

const std::vector<double> kSfppHist06 = {
    0.367293, 0.220726, 0.11046,  0.060705, 0.037246, 0.025748, 0.018762,
    0.01417,  0.011242, 0.009294, 0.007715, 0.006623, 0.005724, 0.005027,
    0.004297, 0.003895, 0.003526, 0.003098, 0.002849, 0.002608, 0.002468,
    0.002272, 0.002066, 0.001962, 0.00175,  0.001638, 0.001598, 0.001518,
    0.001366, 0.001345, 0.001275, 0.001214, 0.001112, 0.001082, 0.001105,
    0.001004, 0.000864, 0.000936, 0.000858, 0.000769, 0.000808, 0.000754,
    0.000705, 0.000717, 0.000677, 0.000696, 0.000579, 0.000589, 0.000542,
    0.000563, 0.000498, 0.000533, 0.000516, 0.000513, 0.000484, 0.000423,
    0.000442, 0.00047,  0.000417, 0.000416, 0.000378};
const double kSfppTail06 = 0.039070000000000001;

const std::vector<double> kNhHist = {
    0.50081200000000003,   0.196821,              0.098254999999999995,
    0.055329999999999997,  0.034175999999999998,  0.022287000000000001,
    0.015313999999999999,  0.011110999999999999,  0.0083940000000000004,
    0.0063330000000000001, 0.0050860000000000002, 0.0040670000000000003,
    0.00347,               0.0028419999999999999, 0.0023779999999999999,
    0.0021900000000000001, 0.001804,              0.0016360000000000001,
    0.001433,              0.0012470000000000001, 0.0011050000000000001,
    0.0010039999999999999, 0.00092400000000000002, 0.00082299999999999995,
    0.00081800000000000004, 0.00074399999999999998, 0.00068999999999999997,
    0.00062600000000000004, 0.00055900000000000004, 0.00056999999999999998,
    0.00054500000000000002};
const double kNhTail = 0.016605999999999999;

}  // namespace

TEST_CASE("fractional counting pmf: Poisson reduction and t = 0") {
    CHECK(fpp_pmf(0, 1.0, gp(1, 1, 1, 1, 1)) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(fpp_pmf(2, 1.0, gp(1, 1, 1, 1, 2)) ==
          doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-12));
    CHECK(fpp_pmf(0, 0.0, gp(1, 0.7, 1, 1, 1)) == 1.0);
    CHECK(fpp_pmf(3, 0.0, gp(1, 0.7, 1, 1, 1)) == 0.0);
    CHECK_THROWS_AS(fpp_pmf(-1, 1.0, gp(1, 1, 1, 1, 1)), DomainError);
    CHECK_THROWS_AS(fpp_pmf(0, -1.0, gp(1, 1, 1, 1, 1)), DomainError);
}

TEST_CASE("fractional counting pmf: survival anchor via Mittag-Leffler") {
    // P[N(1) = 0] = E_{1/2}(-1) = e * erfc(1)
    double p0 = fpp_pmf(0, 1.0, gp(1, 0.5, 1, 1, 1));
    CHECK(p0 == doctest::Approx(0.427583576155807).epsilon(1e-10));
    CHECK(p0 ==
          doctest::Approx(specfun::ml3(1.0, 0.5, 1.0, -1.0)).epsilon(1e-10));
}

TEST_CASE("fractional counting pmf: series route matches the time-change "
          "integral") {
    for (int n = 0; n <= 8; ++n) {
        double s = fpp_pmf(n, 2.0, gp(1, 0.7, 1, 1, 1));
        double i = detail::fpp_pmf_integral(n, 2.0, 0.7, 1.0);
        CHECK(s == doctest::Approx(i).epsilon(1e-9));
    }
}

TEST_CASE("fractional counting pmf table: mass accounting and mean") {
    auto tab = fpp_pmf_table(2.0, gp(1, 0.6, 1, 1, 1));
    double sum = 0.0, mean = 0.0;
    for (std::size_t n = 0; n < tab.probs.size(); ++n) {
        CHECK(tab.probs[n] >= 0.0);
        sum += tab.probs[n];
        mean += static_cast<double>(n) * tab.probs[n];
    }
    CHECK(sum + tab.tail_bound == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(tab.tail_bound <= 1.2e-4);
    // E[N(t)] = lambda t^beta / Gamma(1 + beta); the table loses only the
    // truncated-tail contribution
    CHECK(mean == doctest::Approx(1.696352018707598).epsilon(2e-3));
    CHECK(tab.t == 2.0);
}

TEST_CASE("subordinator pdf: gamma closed form at alpha = 1") {
    // shape rho t = 3, rate mu = 2: f(x) = 4 x^2 e^{-2x}
    auto p = gp(1, 1, 1.5, 2, 1);
    for (double x : {0.3, 1.0, 2.5}) {
        CHECK(ml_levy_pdf(x, 2.0, p) ==
              doctest::Approx(4.0 * x * x * std::exp(-2.0 * x))
                  .epsilon(1e-12));
    }
    CHECK_THROWS_AS(ml_levy_pdf(0.0, 1.0, p), DomainError);
    CHECK_THROWS_AS(ml_levy_pdf(1.0, 0.0, p), DomainError);
}

TEST_CASE("subordinator pdf: half-stable anchor and route agreement") {
    CHECK(ml_levy_pdf(1.0, 1.0, gp(0.5, 1, 1, 1, 1)) ==
          doctest::Approx(0.13660600739194928).epsilon(1e-9));
    auto p = gp(0.7, 1, 1, 1, 1);
    // the mixture certifies ~1e-7 relative (stable-density noise floor)
    for (double x : {0.3, 1.0, 3.0, 8.0}) {
        double s = detail::ml_levy_pdf_series(x, 1.0, p);
        double m = detail::ml_levy_pdf_mixture(x, 1.0, p);
        CHECK(s == doctest::Approx(m).epsilon(5e-7));
    }
    bool ok = false;
    double a = detail::ml_levy_pdf_asymptotic(100.0, 1.0, p, &ok);
    CHECK(ok);
    CHECK(a ==
          doctest::Approx(detail::ml_levy_pdf_mixture(100.0, 1.0, p))
              .epsilon(5e-7));
    for (double x : {0.5, 5.0, 50.0}) {
        CHECK(detail::ml_levy_pdf_robust(x, 1.0, p) ==
              doctest::Approx(detail::ml_levy_pdf_mixture(x, 1.0, p))
                  .epsilon(1e-6));
    }
    // the public pdf refuses values its defining series cannot certify
    CHECK_THROWS_AS(ml_levy_pdf(100.0, 1.0, p), CancellationLoss);
}

TEST_CASE("subordinator pdf: normalization and Laplace consistency") {
    auto p = gp(0.7, 1, 1, 1, 1);
    // panel tolerance sits above the ~1e-7 noise of the routed integrand
    quad::QuadOptions opt;
    opt.abs_tol = 1e-9;
    opt.rel_tol = 1e-6;
    std::vector<double> splits = {0.01, 0.1, 1.0, 10.0, 100.0};
    auto pdf = [&](double x) { return detail::ml_levy_pdf_robust(x, 1.0, p); };
    const double X = 1000.0;
    double mass = quad::adaptive(pdf, 1e-9, X, opt, splits);
    // mass beyond X estimated from the regularly varying tail
    double tail = p.rho * 1.0 * std::pow(X, -p.alpha) /
                  (p.mu * std::tgamma(1.0 - p.alpha));
    CHECK(mass + tail == doctest::Approx(1.0).epsilon(2e-4));
    for (double u : {0.5, 1.0, 2.0}) {
        double num = quad::adaptive(
            [&](double x) { return std::exp(-u * x) * pdf(x); }, 1e-9, X, opt,
            splits);
        CHECK(num ==
              doctest::Approx(ml_levy_laplace(u, 1.0, p)).epsilon(2e-6));
    }
}

TEST_CASE("subordinator fractional moments: anchors and validity window") {
    // alpha = 1 gives the plain gamma moment Gamma(rho t + l) / Gamma(rho t)
    CHECK(ml_levy_moment(0.5, 2.0, gp(1, 1, 1, 1, 1)) ==
          doctest::Approx(1.329340388179137).epsilon(1e-12));
    double m = ml_levy_moment(0.3, 1.0, gp(0.7, 1, 1, 1, 1));
    CHECK(m == doctest::Approx(1.0639160908983099).epsilon(1e-10));
    // 1e5-path reference draw, standard error 0.00122
    CHECK(std::abs(m - 1.0623262539120344) <= 3.5 * 0.00122);

    CHECK(ml_levy_moment(0.0, 1.0, gp(0.7, 1, 1, 1, 1)) == 1.0);
    CHECK_THROWS_AS(ml_levy_moment(0.7, 1.0, gp(0.7, 1, 1, 1, 1)),
                    MomentDiverges);
    CHECK_THROWS_AS(ml_levy_moment(0.9, 1.0, gp(0.7, 1, 1, 1, 1)),
                    MomentDiverges);
    CHECK_THROWS_AS(ml_levy_moment(1.0, 1.0, gp(1, 1, 1, 1, 1)),
                    MomentDiverges);
    CHECK_THROWS_AS(ml_levy_moment(-0.1, 1.0, gp(0.7, 1, 1, 1, 1)),
                    DomainError);
    CHECK_THROWS_AS(ml_levy_moment(0.3, 0.0, gp(0.7, 1, 1, 1, 1)),
                    DomainError);

    // Cauchy-Schwarz between orders, and growth in t
    auto p = gp(0.7, 1, 1, 1, 1);
    for (double l : {0.1, 0.2, 0.3}) {
        double a = ml_levy_moment(l, 1.0, p);
        double b = ml_levy_moment(2.0 * l, 1.0, p);
        CHECK(a * a <= b * (1.0 + 1e-12));
    }
    double prev = 0.0;
    for (double t : {0.5, 1.0, 2.0, 4.0}) {
        double v = ml_levy_moment(0.3, t, p);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("subordinator Laplace transform closed form") {
    CHECK(ml_levy_laplace(1.0, 1.0, gp(0.5, 1, 1, 1, 1)) ==
          doctest::Approx(0.5).epsilon(1e-14));
    CHECK(ml_levy_laplace(1.0, 2.0, gp(0.7, 1, 1, 2, 1)) ==
          doctest::Approx(4.0 / 9.0).epsilon(1e-14));
    CHECK(ml_levy_laplace(0.0, 3.0, gp(0.7, 1, 1, 1, 1)) == 1.0);
    CHECK(ml_levy_laplace(2.0, 0.0, gp(0.7, 1, 1, 1, 1)) == 1.0);
    CHECK_THROWS_AS(ml_levy_laplace(-0.5, 1.0, gp(0.7, 1, 1, 1, 1)),
                    DomainError);
}

TEST_CASE("subordinator Levy density: gamma limit, small-x law, exponent "
          "identity") {
    auto p1 = gp(1, 1, 1.3, 1.5, 1);
    for (double x : {0.5, 1.0, 3.0}) {
        CHECK(ml_levy_levy_density(x, p1) ==
              doctest::Approx(1.3 * std::exp(-1.5 * x) / x).epsilon(1e-12));
    }
    CHECK_THROWS_AS(ml_levy_levy_density(0.0, p1), DomainError);

    // x nu(x) -> alpha rho as x -> 0
    auto p2 = gp(0.6, 1, 1.3, 1.5, 1);
    CHECK(1e-8 * ml_levy_levy_density(1e-8, p2) ==
          doctest::Approx(0.6 * 1.3).epsilon(1e-3));

    // integral of (1 - e^{-ux}) nu(dx) must reproduce the Laplace exponent;
    // the density evaluation carries ~1e-9 relative noise at large x, so the
    // panel tolerance stays above that
    quad::QuadOptions opt;
    opt.abs_tol = 1e-10;
    opt.rel_tol = 1e-8;
    std::vector<double> splits = {1e-8, 1e-4, 0.01, 1.0, 100.0, 1e4};
    const double X = 1e6;
    for (double alpha : {0.6, 0.9}) {
        auto p = gp(alpha, 1, 1.3, 1.5, 1);
        double tail = p.rho * std::pow(X, -alpha) /
                      (p.mu * std::tgamma(1.0 - alpha));
        for (double u : {0.5, 2.0}) {
            double lhs = quad::adaptive(
                [&](double x) {
                    return -std::expm1(-u * x) * ml_levy_levy_density(x, p);
                },
                1e-12, X, opt, splits);
            double rhs = p.rho * std::log1p(std::pow(u, alpha) / p.mu);
            CHECK(lhs + tail == doctest::Approx(rhs).epsilon(1e-6));
        }
    }
}

TEST_CASE("composed pmf: negative binomial reduction") {
    auto p = gp(1, 1, 1, 1, 1);
    for (int n : {0, 1, 2, 5, 10}) {
        double exact = std::pow(0.5, n + 1);
        CHECK(gfnbp_pmf(n, 1.0, p, PmfMethod::quadrature) ==
              doctest::Approx(exact).epsilon(1e-5));
        CHECK(gfnbp_pmf(n, 1.0, p, PmfMethod::exact_reduction) ==
              doctest::Approx(exact).epsilon(1e-12));
    }
    auto p2 = gp(1, 1, 1, 1, 0.5);
    for (int n : {0, 1, 3}) {
        double exact = (2.0 / 3.0) * std::pow(1.0 / 3.0, n);
        CHECK(gfnbp_pmf(n, 1.0, p2, PmfMethod::exact_reduction) ==
              doctest::Approx(exact).epsilon(1e-10));
        CHECK(gfnbp_pmf(n, 1.0, p2, PmfMethod::quadrature) ==
              doctest::Approx(exact).epsilon(1e-5));
    }
    CHECK(gfnbp_pmf(0, 0.0, p) == 1.0);
    CHECK(gfnbp_pmf(3, 0.0, p) == 0.0);
    CHECK_THROWS_AS(gfnbp_pmf(0, 1.0, gp(0.9, 0.5, 1, 1, 1),
                              PmfMethod::exact_reduction),
                    DomainError);
    CHECK_THROWS_AS(gfnbp_pmf(0, 1.0, gp(1, 0.6, 1, 1, 1),
                              PmfMethod::exact_reduction),
                    NonConvergent);
    CHECK_THROWS_AS(gfnbp_pmf(0, 1.0, p, PmfMethod::empirical), DomainError);
    CHECK_THROWS_AS(gfnbp_pmf(-1, 1.0, p), DomainError);
}

TEST_CASE("composed pmf: windowed moment expansion vs quadrature") {
    auto p = gp(0.9, 0.5, 1, 1, 1);
    SeriesInfo info;
    double s0 = gfnbp_pmf(0, 1.0, p, PmfMethod::series, &info);
    CHECK(info.discarded_from == 2);
    CHECK(info.error_estimate > 0.0);
    double q0 = gfnbp_pmf(0, 1.0, p, PmfMethod::quadrature);
    CHECK(std::abs(s0 - q0) <= 1.2 * info.error_estimate);

    double s1 = gfnbp_pmf(1, 1.0, p, PmfMethod::series, &info);
    CHECK(info.discarded_from == 1);
    double q1 = gfnbp_pmf(1, 1.0, p, PmfMethod::quadrature);
    CHECK(std::abs(s1 - q1) <= 1.2 * info.error_estimate);

    CHECK_THROWS_AS(gfnbp_pmf(2, 1.0, p, PmfMethod::series),
                    SeriesWindowEmpty);

    // alpha = 1 lifts the window: the series is exact and keeps every term
    auto p1 = gp(1, 0.6, 1, 1, 0.5);
    for (int n : {0, 1, 3, 6}) {
        double s = gfnbp_pmf(n, 1.0, p1, PmfMethod::series, &info);
        CHECK(info.discarded_from == -1);
        CHECK(s == doctest::Approx(gfnbp_pmf(n, 1.0, p1,
                                             PmfMethod::quadrature))
                       .epsilon(1e-8));
    }
}

TEST_CASE("composed pmf table: stopping rule, tail law, reference "
          "histogram") {
    auto p = gp(0.9, 0.5, 1, 1, 1);
    auto tab = gfnbp_pmf_table(1.0, p);
    CHECK(tab.probs.size() >= 50);
    CHECK(tab.probs.size() <= 90);
    CHECK(tab.tail_bound <= 1.2e-4);
    double sum = 0.0;
    for (double v : tab.probs) {
        CHECK(v >= 0.0);
        sum += v;
    }
    CHECK(sum + tab.tail_bound == doctest::Approx(1.0).epsilon(1e-3));

    // truncated mass obeys the regularly varying count tail
    double N = static_cast<double>(tab.probs.size());
    double law = p.rho * 1.0 * std::pow(N / p.q(), -p.alpha / p.beta) /
                 (p.mu * std::tgamma(1.0 - p.alpha));
    CHECK(tab.tail_bound / law > 1.0 / 3.0);
    CHECK(tab.tail_bound / law < 3.0);

    auto frozen = frozen_table(1.0, kGfnbpHist0905, kGfnbpTail0905);
    CHECK(stats::tv_distance(tab, frozen) < 0.01);
}

TEST_CASE("composed transforms: Laplace anchor, pgf identities") {
    auto p = gp(0.9, 0.5, 1, 1, 1);
    double lap = gfnbp_laplace(1.0, 1.0, p);
    // 1e6-path reference value, standard error 0.000406
    CHECK(std::abs(lap - 0.60886374756037076) <= 0.0015);
    CHECK(gfnbp_laplace(0.0, 1.0, p) == 1.0);
    CHECK(gfnbp_laplace(1.0, 0.0, p) == 1.0);
    CHECK_THROWS_AS(gfnbp_laplace(-1.0, 1.0, p), DomainError);

    // alpha = beta = 1: G(u) = 1 / (2 - u) at lambda = mu = 1
    auto nb = gp(1, 1, 1, 1, 1);
    for (double u : {0.3, 0.7}) {
        CHECK(gfnbp_pgf(u, 1.0, nb) ==
              doctest::Approx(1.0 / (2.0 - u)).epsilon(1e-10));
    }
    CHECK(gfnbp_pgf(1.0, 1.0, nb) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(gfnbp_pgf(-0.1, 1.0, nb), DomainError);
    CHECK_THROWS_AS(gfnbp_pgf(1.1, 1.0, nb), DomainError);

    // G(e^{-u}) and the Laplace functional are the same object
    auto p1 = gp(1, 0.6, 1, 1, 0.5);
    CHECK(gfnbp_pgf(std::exp(-1.0), 1.0, p1) ==
          doctest::Approx(gfnbp_laplace(1.0, 1.0, p1)).epsilon(1e-12));

    // transform series vs explicit weighted table sum
    auto tab = gfnbp_pmf_table(1.0, p1, PmfMethod::series);
    double direct = 0.0;
    for (std::size_t n = 0; n < tab.probs.size(); ++n)
        direct += std::exp(-1.0 * static_cast<double>(n)) * tab.probs[n];
    CHECK(gfnbp_laplace(1.0, 1.0, p1) ==
          doctest::Approx(direct).epsilon(1e-5));
}

TEST_CASE("composed moments: closed forms, reference draws, dispersion") {
    auto p = gp(0.9, 0.4, 1, 1, 1);
    double m1 = gfnbp_mean(1.0, p);
    CHECK(m1 == doctest::Approx(1.0730312178371642).epsilon(1e-10));
    // 1e5-path reference draws with standard errors 0.00178 / 0.00439
    CHECK(std::abs(m1 - 1.0699609999999999) <= 3.5 * 0.00178);
    double m10 = gfnbp_mean(10.0, p);
    CHECK(m10 == doctest::Approx(3.329552382669128).epsilon(1e-10));
    CHECK(std::abs(m10 - 3.3284370000000001) <= 3.5 * 0.00439);

    CHECK(gfnbp_variance(1.0, p) ==
          doctest::Approx(3.74067768339229).epsilon(1e-10));
    CHECK(gfnbp_mean(0.0, p) == 0.0);
    CHECK(gfnbp_variance(0.0, p) == 0.0);

    auto p2 = gp(0.95, 0.15, 1, 1, 1);
    double m2 = gfnbp_mean(1.0, p2);
    double v2 = gfnbp_variance(1.0, p2);
    CHECK(m2 == doctest::Approx(1.0040704993014202).epsilon(1e-10));
    CHECK(v2 == doctest::Approx(2.0303872168286032).epsilon(1e-10));
    CHECK(std::abs(m2 - 1.0046090000000001) <= 3.5 * 0.00143);
    CHECK(std::abs(v2 - 2.0335277906467861) <= 3.5 * 0.00609);

    // moment formulas hit the fractional-moment wall with the composition
    CHECK_THROWS_AS(gfnbp_mean(1.0, gp(1, 1, 1, 1, 1)), MomentDiverges);
    CHECK_THROWS_AS(gfnbp_variance(1.0, gp(0.9, 0.5, 1, 1, 1)),
                    MomentDiverges);

    // overdispersed at every horizon
    for (double t : {1.0, 5.0, 10.0}) {
        CHECK(gfnbp_variance(t, p) > gfnbp_mean(t, p));
    }

    // correlation decay: cov_asym(s, t) is flat in t while Var(t) grows like
    // t^{2 beta / alpha}, so the closed-form correlation slope matches the
    // advertised exponent
    double cfix = gfnbp_cov_asymptotic(1.0, 1e6, p);
    auto corr = [&](double t) {
        return cfix / std::sqrt(gfnbp_variance(1.0, p) * gfnbp_variance(t, p));
    };
    double slope = std::log(corr(1e8) / corr(1e6)) / std::log(1e8 / 1e6);
    CHECK(slope == doctest::Approx(lrd_exponent(p)).epsilon(0.01));
}

TEST_CASE("covariance asymptote: anchor, t-independence, domain") {
    auto p = gp(0.9, 0.3, 1, 1, 1);
    double c = gfnbp_cov_asymptotic(1.0, 10.0, p);
    CHECK(c == doctest::Approx(2.2581753670642493).epsilon(1e-10));
    // 1e4-path coupled reference, standard error 0.118
    CHECK(std::abs(c - 2.3185936593659369) <= 3.5 * 0.118);
    CHECK(gfnbp_cov_asymptotic(1.0, 500.0, p) ==
          doctest::Approx(c).epsilon(1e-14));
    CHECK_THROWS_AS(gfnbp_cov_asymptotic(0.0, 1.0, p), DomainError);
    CHECK_THROWS_AS(gfnbp_cov_asymptotic(2.0, 1.0, p), DomainError);
}

TEST_CASE("long-range dependence exponent") {
    CHECK(lrd_exponent(gp(0.8, 0.4, 1, 1, 1)) ==
          doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(lrd_exponent(gp(0.9, 0.3, 1, 1, 1)) ==
          doctest::Approx(-0.3 / 0.9).epsilon(1e-14));
}

TEST_CASE("space-fractional counting pmf: anchors and reference histogram") {
    auto sp = stp(gp(1, 1, 1, 1, 1.3), 0.6, 1, 1);
    CHECK(sfpp_pmf(0, 0.7, sp) ==
          doctest::Approx(std::exp(-std::pow(1.3, 0.6) * 0.7))
              .epsilon(1e-12));
    CHECK(sfpp_pmf(0, 0.0, sp) == 1.0);
    CHECK(sfpp_pmf(2, 0.0, sp) == 0.0);
    CHECK_THROWS_AS(sfpp_pmf(-1, 1.0, sp), DomainError);
    CHECK_THROWS_AS(sfpp_pmf(0, -1.0, sp), DomainError);

    // alpha' = 1 is plain Poisson
    auto sp1 = stp(gp(1, 1, 1, 1, 2), 1.0, 1, 1);
    for (int n : {0, 1, 4}) {
        double pois = std::exp(-2.0 + n * std::log(2.0) - std::lgamma(n + 1.0));
        CHECK(sfpp_pmf(n, 1.0, sp1) == doctest::Approx(pois).epsilon(1e-12));
    }

    auto sp06 = stp(gp(1, 1, 1, 1, 1), 0.6, 1, 1);
    double sum60 = 0.0;
    std::vector<double> head(61);
    for (int n = 0; n <= 60; ++n) {
        head[n] = sfpp_pmf(n, 1.0, sp06);
        sum60 += head[n];
    }
    // 1e6-path reference mass over n <= 60
    CHECK(std::abs(sum60 - 0.96093000000000051) <= 0.0022);
    auto analytic_tab = frozen_table(1.0, head, 1.0 - sum60);
    analytic_tab.method = PmfMethod::series;
    auto frozen = frozen_table(1.0, kSfppHist06, kSfppTail06);
    CHECK(stats::tv_distance(analytic_tab, frozen) < 0.012);

    auto built = sfpp_pmf_table(1.0, sp06, 61);
    CHECK(built.probs.size() == 61);
    for (int n = 0; n <= 60; ++n)
        CHECK(built.probs[n] == doctest::Approx(head[n]).epsilon(1e-12));
}

TEST_CASE("space-fractional composed Laplace functional") {
    auto sp = stp(gp(0.8, 1, 1, 1, 1), 0.7, 1, 1);
    double lap = sfgnbp_laplace(1.0, 1.0, sp);
    CHECK(lap == doctest::Approx(0.56386378237522028).epsilon(1e-10));
    // 1e6-path reference value, standard error 0.00142
    CHECK(std::abs(lap - 0.56414033146540365) <= 0.005);
    CHECK(sfgnbp_laplace(0.0, 1.0, sp) == 1.0);
    CHECK(sfgnbp_laplace(1.0, 0.0, sp) == 1.0);

    // alpha' = alpha = 1 collapses to the negative binomial functional
    auto sp1 = stp(gp(1, 1, 0.8, 1.5, 1.2), 1.0, 1, 1);
    for (double u : {0.5, 1.7}) {
        double exact = std::pow(
            1.5 / (1.5 + 1.2 * (-std::expm1(-u))), 0.8 * 2.0);
        CHECK(sfgnbp_laplace(u, 2.0, sp1) ==
              doctest::Approx(exact).epsilon(1e-14));
    }
}

TEST_CASE("space-fractional composed Levy measure on the integers") {
    auto sp = stp(gp(0.9, 1, 1.3, 1.5, 1), 0.6, 1, 1);
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 8; ++k) {
        double nu = sfgnbp_levy_density(k, sp);
        CHECK(nu > 0.0);
        CHECK(nu < prev);
        prev = nu;
    }
    // total jump measure against the Laplace exponent at u = 1
    const double u = 1.0;
    const int K = 40;
    double lhs = 0.0, nu_k = 0.0;
    for (int k = 1; k <= K; ++k) {
        nu_k = sfgnbp_levy_density(k, sp);
        lhs += nu_k * (1.0 - std::exp(-u * k));
    }
    double tail = nu_k * K / sp.alpha_prime;
    double inner =
        std::pow(sp.base.lambda * (-std::expm1(-u)), sp.alpha_prime);
    double rhs = sp.base.rho *
                 std::log1p(std::pow(inner, sp.base.alpha) / sp.base.mu);
    CHECK(std::abs(rhs - lhs) <= 3.0 * tail + 1e-6);

    CHECK_THROWS_AS(sfgnbp_levy_density(1, stp(gp(0.6, 1, 1, 1, 1), 0.9, 1, 1)),
                    DivergentSeries);
    CHECK_THROWS_AS(sfgnbp_levy_density(1, stp(gp(0.6, 1, 1, 1, 1), 0.6, 1, 1)),
                    DivergentSeries);
    CHECK_THROWS_AS(sfgnbp_levy_density(0, sp), DomainError);
}

TEST_CASE("nested composition pmf: reductions and guard rails") {
    auto nb = stp(gp(1, 1, 1, 1, 1), 1.0, 1.0, 0.5);
    for (int n : {0, 1, 2, 5}) {
        double exact = (2.0 / 3.0) * std::pow(1.0 / 3.0, n);
        CHECK(nh_stfnbp_pmf(n, 1.0, nb) ==
              doctest::Approx(exact).epsilon(1e-10));
    }
    auto sp = stp(gp(0.9, 1, 1, 1, 1), 0.8, 0.3, 1.0);
    CHECK(nh_stfnbp_pmf(0, 0.0, sp) == 1.0);
    CHECK(nh_stfnbp_pmf(3, 0.0, sp) == 0.0);
    CHECK_THROWS_AS(nh_stfnbp_pmf(-1, 1.0, sp), DomainError);
    CHECK_THROWS_AS(
        nh_stfnbp_pmf(0, 1.0, stp(gp(0.6, 1, 1, 1, 1), 0.8, 0.7, 0.5)),
        SeriesWindowEmpty);
    CHECK_THROWS_AS(
        nh_stfnbp_pmf(0, 1.0, stp(gp(1, 1, 1, 1, 1), 0.8, 0.6, 1.0)),
        NonConvergent);
}

TEST_CASE("nested composition pmf: reference histogram and truncation "
          "report") {
    auto sp = stp(gp(0.9, 1, 1, 1, 1), 0.8, 0.3, 1.0);
    SeriesInfo info;
    double p0 = nh_stfnbp_pmf(0, 1.0, sp, &info);
    // 1e6-path reference histogram, p0 standard error 0.0005
    CHECK(std::abs(p0 - 0.50081200000000003) <= 3.5 * 0.0005);
    CHECK(info.discarded_from == 3);
    CHECK(info.error_estimate > 0.0);
    CHECK(info.error_estimate <= 1e-4);
    double p1 = nh_stfnbp_pmf(1, 1.0, sp);
    CHECK(std::abs(p1 - 0.196821) <= 0.0014);

    auto tab = nh_stfnbp_pmf_table(1.0, sp, 31);
    CHECK(tab.probs.size() == 31);
    for (std::size_t n = 2; n < tab.probs.size(); ++n)
        CHECK(tab.probs[n] < tab.probs[n - 1]);
    auto frozen = frozen_table(1.0, kNhHist, kNhTail);
    CHECK(stats::tv_distance(tab, frozen) < 0.005);
    CHECK(std::abs(tab.tail_bound - kNhTail) <= 4.5e-4);

    // rate c -> 0 freezes the count at zero
    auto slow = stp(gp(0.9, 1, 1, 1, 1), 0.8, 0.3, 1e-12);
    CHECK(nh_stfnbp_pmf(0, 1.0, slow) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("conditional count pmf at fixed operational time") {
    // survival identity: p(0 | q) is the order-bp Mittag-Leffler survival,
    // which the counting-component pmf evaluates without cancellation
    for (double q : {0.5, 5.0, 25.0, 31.5, 100.0, 1000.0}) {
        CHECK(detail::stfpp_cond_pmf(0, q, 0.8, 0.3) ==
              doctest::Approx(fpp_pmf(0, q, gp(1, 0.3, 1, 1, 1)))
                  .epsilon(1e-9));
    }
    double sum = 0.0;
    for (int n = 0; n <= 400; ++n)
        sum += detail::stfpp_cond_pmf(n, 5.0, 0.8, 0.3);
    CHECK(sum > 0.985);
    CHECK(sum <= 1.0 + 1e-9);
}

TEST_CASE("nested composition pmf: integral route vs lifted series at "
          "alpha = 1") {
    auto sp = stp(gp(1, 1, 1, 1, 1), 0.8, 0.3, 0.5);
    for (int n : {0, 1, 2, 5}) {
        double s = nh_stfnbp_pmf(n, 1.0, sp);
        double i = detail::nh_stfnbp_pmf_integral(n, 1.0, sp);
        CHECK(s == doctest::Approx(i).epsilon(1e-6));
    }
}
