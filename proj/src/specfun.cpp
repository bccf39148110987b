#include "gfnbp/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gfnbp/errors.hpp"
#include "gfnbp/quadrature.hpp"

namespace gfnbp::specfun {

namespace detail {

bool is_nonpositive_integer(double x, double tol) {
    return x < 0.5 && std::abs(x - std::nearbyint(x)) < tol;
}

SinPi sinpi_signed(double x) {
    double fl = std::floor(x);
    double r = x - fl;  // [0, 1)
    double s = std::sin(std::numbers::pi * r);
    if (s <= 0.0) return {0.0, 0};
    bool even = std::fmod(fl, 2.0) == 0.0;
    return {s, even ? 1 : -1};
}

SignedLogGamma lgamma_signed(double x) {
    if (x > 0.0) return {std::lgamma(x), 1};
    if (is_nonpositive_integer(x, 1e-12 * std::max(1.0, std::abs(x))))
        return {std::numeric_limits<double>::infinity(), 0};
    auto sp = sinpi_signed(x);
    if (sp.sign == 0) return {std::numeric_limits<double>::infinity(), 0};
    double la =
        std::log(std::numbers::pi) - std::log(sp.abs) - std::lgamma(1.0 - x);
    return {la, sp.sign};
}

namespace {

// Truncation rule: a nonzero term below abs_tol, nonincreasing three times in
// a row, ends the series. Exact-zero terms (denominator poles) do not count
// as evidence; a long run of them ends the series on their own.
struct StopRule {
    double tol;
    double prev = std::numeric_limits<double>::infinity();
    int streak = 0;
    int zero_run = 0;
    bool done(double abs_term) {
        if (abs_term == 0.0) return ++zero_run >= 64;
        zero_run = 0;
        if (abs_term < tol && abs_term <= prev)
            ++streak;
        else
            streak = 0;
        prev = abs_term;
        return streak >= 3;
    }
};

}  // namespace

SeriesResult ml3_tracked(double a, double b, double g, double z,
                         SeriesControl ctl) {
    if (!(a > 0.0) || !(b > 0.0) || !(g > 0.0) || !std::isfinite(z))
        throw DomainError("ml3: requires a > 0, b > 0, g > 0, finite z");
    SeriesResult out;
    if (z == 0.0) {
        out.value = std::exp(-std::lgamma(g));
        out.max_abs_term = out.value;
        out.terms_used = 1;
        return out;
    }
    const double ln_guard = std::log(ctl.overflow_guard);
    const double ln_az = std::log(std::abs(z));
    const bool neg = z < 0.0;
    KahanSum sum;
    StopRule stop{ctl.abs_tol};
    double ln_poch = 0.0;  // lgamma(a+k) - lgamma(a) - lgamma(k+1)
    double ln_zk = 0.0;
    for (int k = 0; k < ctl.max_terms; ++k) {
        double ln_term = ln_poch + ln_zk - std::lgamma(g + b * k);
        if (ln_term > ln_guard) throw Overflow("ml3: term exceeds guard");
        double term = std::exp(ln_term);
        if (neg && (k & 1)) term = -term;
        sum.add(term);
        out.max_abs_term = std::max(out.max_abs_term, std::abs(term));
        out.terms_used = k + 1;
        if (stop.done(std::abs(term))) {
            out.value = sum.get();
            return out;
        }
        ln_poch += std::log((a + k) / (k + 1.0));
        ln_zk += ln_az;
    }
    throw NonConvergent("ml3: no convergence within max_terms");
}

SeriesResult m_wright_tracked(double a, double z, SeriesControl ctl) {
    if (!(a > 0.0) || !(a < 1.0) || !std::isfinite(z))
        throw DomainError("m_wright: requires 0 < a < 1 and finite z");
    SeriesResult out;
    const double ln_guard = std::log(ctl.overflow_guard);
    KahanSum sum;
    StopRule stop{ctl.abs_tol};
    double ln_zk = 0.0;
    const double ln_az = (z == 0.0) ? 0.0 : std::log(std::abs(z));
    for (int k = 0; k < ctl.max_terms; ++k) {
        double term = 0.0;
        double x = 1.0 - a * (k + 1.0);
        if (!is_nonpositive_integer(x)) {
            auto lg = lgamma_signed(x);
            double ln_term = ln_zk - std::lgamma(k + 1.0) - lg.log_abs;
            if (ln_term > ln_guard)
                throw Overflow("m_wright: term exceeds guard");
            term = lg.sign * std::exp(ln_term);
            if (z < 0.0 ? !(k & 1) : (k & 1)) term = -term;  // (-z)^k
            if (z == 0.0 && k > 0) term = 0.0;
        }
        sum.add(term);
        out.max_abs_term = std::max(out.max_abs_term, std::abs(term));
        out.terms_used = k + 1;
        if (stop.done(std::abs(term))) {
            out.value = sum.get();
            return out;
        }
        ln_zk += ln_az;
        if (z == 0.0) ln_zk = -std::numeric_limits<double>::infinity();
    }
    throw NonConvergent("m_wright: no convergence within max_terms");
}

double log_kanter_a(double phi, double a) {
    double s1 = std::sin(a * phi);
    double s2 = std::sin((1.0 - a) * phi);
    double s0 = std::sin(phi);
    return (a * std::log(s1) + (1.0 - a) * std::log(s2) - std::log(s0)) /
           (1.0 - a);
}

namespace {

// ln a(0+): limit of log_kanter_a at the left endpoint.
double log_kanter_a0(double a) {
    return (a * std::log(a) + (1.0 - a) * std::log1p(-a)) / (1.0 - a);
}

// Predicted log of the largest M-Wright series term at argument z >= 0;
// the series noise floor is ~1e-16 * exp of this.
double m_wright_ln_max_term(double a, double z) {
    if (z <= 0.0) return 0.0;
    return (1.0 - a) * std::pow(z * std::pow(a, a), 1.0 / (1.0 - a));
}

// phi where ln a(phi) crosses the given level (a(phi) is increasing).
double kanter_crossing(double a, double level) {
    double lo = 1e-12, hi = std::numbers::pi - 1e-12;
    if (log_kanter_a(lo, a) >= level) return lo;
    if (log_kanter_a(hi, a) <= level) return hi;
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        (log_kanter_a(mid, a) < level ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double stable_pdf_integral(double x, double a) {
    const double pi = std::numbers::pi;
    const double ln_eps = -a / (1.0 - a) * std::log(x);
    const double ln_a0 = log_kanter_a0(a);
    double peak;
    if (ln_eps + ln_a0 >= 0.0)
        peak = ln_a0 - std::exp(std::min(ln_eps + ln_a0, 700.0));
    else
        peak = -ln_eps - 1.0;
    double ln_pref = std::log(a / (pi * (1.0 - a))) - std::log(x) / (1.0 - a);
    if (ln_pref + peak < -720.0 || !std::isfinite(peak)) return 0.0;
    auto h = [&](double phi) {
        double la = log_kanter_a(phi, a);
        double e = ln_eps + la;
        double expo = la - peak - ((e > 700.0) ? std::numeric_limits<double>::infinity() : std::exp(e));
        return (expo < -740.0) ? 0.0 : std::exp(expo);
    };
    std::vector<double> splits;
    if (ln_eps + ln_a0 < 0.0) {
        double p = kanter_crossing(a, -ln_eps);
        splits = {0.5 * p, p, std::min(2.0 * p, 0.5 * (p + pi))};
    }
    quad::QuadOptions opt;
    opt.abs_tol = 1e-13;
    opt.rel_tol = 1e-11;
    opt.max_panels = 6000;
    double I = quad::adaptive(h, 0.0, pi, opt, splits);
    if (I <= 0.0) return 0.0;
    double ln_out = ln_pref + peak + std::log(I);
    return (ln_out < -740.0) ? 0.0 : std::exp(ln_out);
}

}  // namespace

double m_wright_any(double a, double z) {
    if (z < 0.0) throw DomainError("m_wright_any: requires z >= 0");
    if (m_wright_ln_max_term(a, z) < 34.0) {
        SeriesControl c;
        c.max_terms = 4000;
        c.abs_tol = 1e-18;
        auto r = m_wright_tracked(a, z, c);
        if (r.value > 0.0 && 1e-16 * r.max_abs_term < 1e-9 * r.value)
            return r.value;
        if (r.value <= 0.0 && r.max_abs_term * 1e-16 < 1e-300) return 0.0;
    }
    double x = std::pow(z, -1.0 / a);
    double g = stable_pdf_integral(x, a);
    if (g == 0.0) return 0.0;
    double ln_m = std::log(g) - std::log(a) - (1.0 + 1.0 / a) * std::log(z);
    return (ln_m < -740.0) ? 0.0 : std::exp(ln_m);
}

}  // namespace detail

double log_gamma(double x) {
    if (!(x > 0.0)) throw DomainError("log_gamma: requires x > 0");
    return std::lgamma(x);
}

double digamma(double x) {
    if (!(x > 0.0)) throw DomainError("digamma: requires x > 0");
    double r = 0.0;
    while (x < 6.0) {
        r -= 1.0 / x;
        x += 1.0;
    }
    double f = 1.0 / (x * x);
    double tail =
        f * (1.0 / 12 -
             f * (1.0 / 120 -
                  f * (1.0 / 252 -
                       f * (1.0 / 240 -
                            f * (1.0 / 132 -
                                 f * (691.0 / 32760 - f * (1.0 / 12)))))));
    return r + std::log(x) - 0.5 / x - tail;
}

double beta_fn(double r, double s) {
    if (!(r > 0.0) || !(s > 0.0)) throw DomainError("beta_fn: requires r, s > 0");
    return std::exp(std::lgamma(r) + std::lgamma(s) - std::lgamma(r + s));
}

namespace {

// Continued fraction for the regularized incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
    const double tiny = 1e-300;
    const double eps = 3e-16;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 400; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) return h;
    }
    throw NonConvergent("inc_beta: continued fraction stalled");
}

}  // namespace

double inc_beta(double r, double s, double x) {
    if (!(r > 0.0) || !(s > 0.0))
        throw DomainError("inc_beta: requires r, s > 0");
    if (!(x >= 0.0) || !(x <= 1.0))
        throw DomainError("inc_beta: requires 0 <= x <= 1");
    double B = beta_fn(r, s);
    if (x == 0.0) return 0.0;
    if (x == 1.0) return B;
    double ln_front = r * std::log(x) + s * std::log1p(-x) -
                      (std::lgamma(r) + std::lgamma(s) - std::lgamma(r + s));
    double reg;
    if (x < (r + 1.0) / (r + s + 2.0))
        reg = std::exp(ln_front) * beta_cf(r, s, x) / r;
    else
        reg = 1.0 - std::exp(ln_front) * beta_cf(s, r, 1.0 - x) / s;
    return std::clamp(reg, 0.0, 1.0) * B;
}

double ml3(double a, double b, double g, double z, SeriesControl ctl) {
    return detail::ml3_tracked(a, b, g, z, ctl).value;
}

double gen_wright(const std::vector<WrightBlock>& upper,
                  const std::vector<WrightBlock>& lower, double z,
                  SeriesControl ctl) {
    for (const auto& blk : upper)
        if (!std::isfinite(blk.a) || !std::isfinite(blk.b))
            throw DomainError("gen_wright: non-finite block");
    for (const auto& blk : lower)
        if (!std::isfinite(blk.a) || !std::isfinite(blk.b))
            throw DomainError("gen_wright: non-finite block");
    double sum_up = 0.0, sum_lo = 0.0;
    for (const auto& blk : upper) sum_up += blk.b;
    for (const auto& blk : lower) sum_lo += blk.b;
    double delta = sum_lo - sum_up;
    if (delta < -1.0 - 1e-12)
        throw DivergentSeries("gen_wright: convergence index below -1");
    if (z != 0.0 && delta <= -1.0 + 1e-12) {
        double ln_radius = 0.0;
        for (const auto& blk : upper)
            if (blk.b != 0.0) ln_radius -= blk.b * std::log(std::abs(blk.b));
        for (const auto& blk : lower)
            if (blk.b != 0.0) ln_radius += blk.b * std::log(std::abs(blk.b));
        if (std::log(std::abs(z)) >= ln_radius - 1e-9)
            throw DivergentSeries(
                "gen_wright: |z| at or beyond the index -1 radius");
    }

    const double ln_guard = std::log(ctl.overflow_guard);
    detail::KahanSum sum;
    detail::StopRule stop{ctl.abs_tol};
    const double ln_az = (z == 0.0) ? 0.0 : std::log(std::abs(z));
    double ln_zk = 0.0;
    for (int k = 0; k < ctl.max_terms; ++k) {
        double ln_term = ln_zk - std::lgamma(k + 1.0);
        int sign = (z < 0.0 && (k & 1)) ? -1 : 1;
        bool zero = false;
        for (const auto& blk : upper) {
            double arg = blk.a + blk.b * k;
            if (detail::is_nonpositive_integer(arg))
                throw NumeratorPole("gen_wright: upper gamma pole at k=" +
                                    std::to_string(k));
            auto lg = detail::lgamma_signed(arg);
            ln_term += lg.log_abs;
            sign *= lg.sign;
        }
        for (const auto& blk : lower) {
            double arg = blk.a + blk.b * k;
            if (detail::is_nonpositive_integer(arg)) {
                zero = true;
                break;
            }
            auto lg = detail::lgamma_signed(arg);
            ln_term -= lg.log_abs;
            sign *= lg.sign;
        }
        double term = 0.0;
        if (!zero) {
            if (ln_term > ln_guard)
                throw Overflow("gen_wright: term exceeds guard");
            term = sign * std::exp(ln_term);
        }
        sum.add(term);
        if (stop.done(std::abs(term))) return sum.get();
        if (z == 0.0) return sum.get();  // only k = 0 contributes
        ln_zk += ln_az;
    }
    throw NonConvergent("gen_wright: no convergence within max_terms");
}

double m_wright(double a, double z, SeriesControl ctl) {
    return detail::m_wright_tracked(a, z, ctl).value;
}

double stable_pdf(double x, double a) {
    if (!(a > 0.0) || !(a < 1.0))
        throw DomainError("stable_pdf: requires 0 < a < 1");
    if (!(x > 0.0)) return 0.0;
    double z = std::pow(x, -a);
    if (detail::m_wright_ln_max_term(a, z) < 34.0) {
        SeriesControl c;
        c.max_terms = 4000;
        c.abs_tol = 1e-18;
        auto r = detail::m_wright_tracked(a, z, c);
        if (r.value > 0.0 && 1e-16 * r.max_abs_term < 1e-9 * r.value) {
            double ln_g =
                std::log(a) - (a + 1.0) * std::log(x) + std::log(r.value);
            return (ln_g < -740.0) ? 0.0 : std::exp(ln_g);
        }
    }
    return detail::stable_pdf_integral(x, a);
}

double stable_cdf(double x, double a) {
    if (!(a > 0.0) || !(a < 1.0))
        throw DomainError("stable_cdf: requires 0 < a < 1");
    if (!(x > 0.0)) return 0.0;
    const double pi = std::numbers::pi;
    const double ln_eps = -a / (1.0 - a) * std::log(x);
    auto h = [&](double phi) {
        double e = ln_eps + detail::log_kanter_a(phi, a);
        return (e > 700.0) ? 0.0 : std::exp(-std::exp(e));
    };
    std::vector<double> splits;
    if (ln_eps + detail::log_kanter_a0(a) < 0.0) {
        double p = detail::kanter_crossing(a, -ln_eps);
        splits = {0.5 * p, p, std::min(2.0 * p, 0.5 * (p + pi))};
    }
    quad::QuadOptions opt;
    opt.abs_tol = 1e-13;
    opt.rel_tol = 1e-11;
    opt.max_panels = 6000;
    double I = quad::adaptive(h, 0.0, pi, opt, splits);
    return std::clamp(I / pi, 0.0, 1.0);
}

}  // namespace gfnbp::specfun
