#pragma once

#include <cmath>
#include <vector>

namespace gfnbp::specfun {

// Truncation policy shared by all series evaluators. A series stops once the
// running term magnitude has dropped below abs_tol with three consecutive
// nonincreasing (nonzero) terms; exceeding max_terms raises NonConvergent and
// any term above overflow_guard raises Overflow.
struct SeriesControl {
    int max_terms = 2000;
    double abs_tol = 1e-12;
    double overflow_guard = 1e300;
};

// log(Gamma(x)) for x > 0. DomainError otherwise.
double log_gamma(double x);

// Digamma for x > 0. Recurrence below 6, Bernoulli asymptotic above.
double digamma(double x);

// Euler beta B(r, s), r > 0, s > 0.
double beta_fn(double r, double s);

// Non-regularized incomplete beta: integral of u^(r-1)(1-u)^(s-1) over [0, x].
// Continued fraction (modified Lentz) on the regularized form.
double inc_beta(double r, double s, double x);

// Three-parameter Mittag-Leffler series
//   sum_k z^k Gamma(a+k) / (k! Gamma(a) Gamma(g + b k)),
// a, b, g > 0, z real. Compensated summation; no cancellation rescue here,
// callers needing large negative z route around it.
double ml3(double a, double b, double g, double z, SeriesControl ctl = {});

// One block Gamma(a + b*k) of a generalized Wright series.
struct WrightBlock {
    double a;
    double b;
};

// Generalized Wright series sum_k z^k/k! * prod Gamma(upper)/prod Gamma(lower).
// Admissible when delta = sum(lower b) - sum(upper b) > -1; at delta == -1 the
// radius rule |z| < prod |b_i|^(-b_i) * prod |d_j|^(d_j) applies, otherwise
// DivergentSeries. A pole in an upper gamma raises NumeratorPole; a pole in a
// lower gamma zeroes that term.
double gen_wright(const std::vector<WrightBlock>& upper,
                  const std::vector<WrightBlock>& lower, double z,
                  SeriesControl ctl = {});

// M-Wright density function, series form
//   sum_k (-z)^k / (k! Gamma(1 - a - a k)),  0 < a < 1.
double m_wright(double a, double z, SeriesControl ctl = {});

// Density and CDF of the unit one-sided a-stable law (Laplace exp(-u^a)),
// 0 < a < 1. Convergent series at large x, Kanter-form integral elsewhere.
double stable_pdf(double x, double a);
double stable_cdf(double x, double a);

namespace detail {

// log|Gamma(x)| with the sign of Gamma(x); sign 0 flags a pole.
struct SignedLogGamma {
    double log_abs;
    int sign;
};
SignedLogGamma lgamma_signed(double x);

bool is_nonpositive_integer(double x, double tol = 1e-9);

// |sin(pi x)| and the sign of sin(pi x), computed from the fractional part so
// large arguments keep full precision.
struct SinPi {
    double abs;
    int sign;
};
SinPi sinpi_signed(double x);

// Series evaluation bookkeeping for cancellation-aware callers.
struct SeriesResult {
    double value = 0.0;
    double max_abs_term = 0.0;
    int terms_used = 0;
};

SeriesResult ml3_tracked(double a, double b, double g, double z,
                         SeriesControl ctl);
SeriesResult m_wright_tracked(double a, double z, SeriesControl ctl);

// M-Wright for z >= 0 with automatic routing: series while numerically safe,
// otherwise through the stable-density bridge
//   M_a(z) = (1/a) z^(-1-1/a) g_a(z^(-1/a)).
double m_wright_any(double a, double z);

// log of the Kanter integrand factor
//   a(phi) = sin(a phi)^(a/(1-a)) sin((1-a) phi) / sin(phi)^(1/(1-a)).
double log_kanter_a(double phi, double a);

// Compensated (Neumaier) accumulator.
struct KahanSum {
    double s = 0.0;
    double c = 0.0;
    void add(double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double get() const { return s + c; }
};

}  // namespace detail

}  // namespace gfnbp::specfun
