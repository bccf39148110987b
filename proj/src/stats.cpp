#include "gfnbp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "gfnbp/errors.hpp"
#include "gfnbp/kernels/kernels.hpp"

namespace gfnbp::stats {

namespace {

double cell(const std::vector<double>& v, std::size_t i) {
    return i < v.size() ? v[i] : 0.0;
}

}  // namespace

namespace detail {

std::size_t grid_index(const sim::Ensemble& e, double t) {
    if (e.paths.empty()) throw DomainError("ensemble: no paths");
    const auto& grid = e.paths.front().grid;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (std::fabs(grid[i] - t) <= 1e-9 * std::max(1.0, std::fabs(t)))
            return i;
    }
    throw GridMiss("requested time is not on the ensemble grid");
}

std::vector<double> values_at(const sim::Ensemble& e, std::size_t idx) {
    std::vector<double> out(e.paths.size());
    for (std::size_t i = 0; i < e.paths.size(); ++i)
        out[i] = e.paths[i].values.at(idx);
    return out;
}

LrdFit fit_loglog(const std::vector<double>& t_points,
                  const std::vector<double>& corr, double s_fixed) {
    std::vector<double> lx, ly, kept;
    for (std::size_t i = 0; i < t_points.size(); ++i) {
        if (corr[i] > 0.0) {
            lx.push_back(std::log(t_points[i]));
            ly.push_back(std::log(corr[i]));
            kept.push_back(t_points[i]);
        }
    }
    std::size_t m = lx.size();
    if (m < 4)
        throw DegenerateCorrelation(
            "lrd fit: fewer than 4 points with positive correlation");
    double mx = kern::sum(lx.data(), m) / m;
    double my = kern::sum(ly.data(), m) / m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double dx = lx[i] - mx;
        double dy = ly[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw DomainError("lrd fit: t_points must be distinct");
    LrdFit fit;
    fit.slope = sxy / sxx;
    double ssr = std::max(0.0, syy - fit.slope * sxy);
    fit.slope_stderr = std::sqrt(ssr / (static_cast<double>(m) - 2.0) / sxx);
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
    fit.t_points = std::move(kept);
    fit.s_fixed = s_fixed;
    return fit;
}

}  // namespace detail

PmfTable empirical_pmf(const sim::Ensemble& e, double t) {
    // heavy-tailed clocks produce astronomically large counts; the support
    // is capped and the excess reported exactly as tail mass
    constexpr long long kSupportCap = 100000;
    std::size_t idx = detail::grid_index(e, t);
    auto vals = detail::values_at(e, idx);
    long long n_max = 0;
    for (double v : vals) {
        long long k = std::llround(v);
        if (k < 0 || std::fabs(v - static_cast<double>(k)) > 1e-6)
            throw DomainError(
                "empirical_pmf: path values must be nonnegative integers");
        n_max = std::max(n_max, std::min(k, kSupportCap));
    }
    PmfTable tab;
    tab.t = e.paths.front().grid[idx];
    tab.method = PmfMethod::empirical;
    tab.tail_bound = 0.0;
    tab.probs.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
    double w = 1.0 / static_cast<double>(vals.size());
    for (double v : vals) {
        long long k = std::llround(v);
        if (k > kSupportCap)
            tab.tail_bound += w;
        else
            tab.probs[static_cast<std::size_t>(k)] += w;
    }
    return tab;
}

double tv_distance(const PmfTable& a, const PmfTable& b) {
    std::size_t m = std::max(a.probs.size(), b.probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        acc += std::fabs(cell(a.probs, i) - cell(b.probs, i));
    acc += std::fabs(a.tail_bound - b.tail_bound);
    return 0.5 * acc;
}

Estimate empirical_moment(const sim::Ensemble& e, double t, double order) {
    if (!(order > 0.0))
        throw DomainError("empirical_moment: order must be > 0");
    auto vals = detail::values_at(e, detail::grid_index(e, t));
    double n = static_cast<double>(vals.size());
    double s1 = 0.0, s2 = 0.0;
    kern::pow_sum(vals.data(), vals.size(), order, &s1, &s2);
    Estimate est;
    est.value = s1 / n;
    double var = std::max(0.0, s2 / n - est.value * est.value);
    est.std_error = std::sqrt(var / n);
    return est;
}

Estimate empirical_laplace(const sim::Ensemble& e, double t, double u) {
    if (!(u >= 0.0)) throw DomainError("empirical_laplace: u must be >= 0");
    auto vals = detail::values_at(e, detail::grid_index(e, t));
    double n = static_cast<double>(vals.size());
    double s1 = 0.0, s2 = 0.0;
    kern::exp_neg_sum(vals.data(), vals.size(), u, &s1, &s2);
    Estimate est;
    est.value = s1 / n;
    double var = std::max(0.0, s2 / n - est.value * est.value);
    est.std_error = std::sqrt(var / n);
    return est;
}

Estimate empirical_cov(const sim::Ensemble& e, double s, double t) {
    std::size_t is = detail::grid_index(e, s);
    std::size_t it = detail::grid_index(e, t);
    if (is > it) throw DomainError("empirical_cov: requires s <= t");
    auto xs = detail::values_at(e, is);
    auto ys = detail::values_at(e, it);
    std::size_t n = xs.size();
    if (n < 2) throw DomainError("empirical_cov: needs at least 2 paths");
    double mx = kern::sum(xs.data(), n) / static_cast<double>(n);
    double my = kern::sum(ys.data(), n) / static_cast<double>(n);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = (xs[i] - mx) * (ys[i] - my);
    double wm = 0.0, wv = 0.0;
    kern::mean_var(w.data(), n, &wm, &wv);
    Estimate est;
    est.value = wm * static_cast<double>(n) / (static_cast<double>(n) - 1.0);
    est.std_error = std::sqrt(wv / static_cast<double>(n));
    return est;
}

Estimate dispersion_index(const sim::Ensemble& e, double t) {
    auto vals = detail::values_at(e, detail::grid_index(e, t));
    std::size_t n = vals.size();
    if (n < 2) throw DomainError("dispersion_index: needs at least 2 paths");
    double m = 0.0, v = 0.0;
    kern::mean_var(vals.data(), n, &m, &v);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) {
        double c = vals[i] - m;
        w[i] = c * c - c;
    }
    double wm = 0.0, wv = 0.0;
    kern::mean_var(w.data(), n, &wm, &wv);
    Estimate est;
    est.value = v * static_cast<double>(n) / (static_cast<double>(n) - 1.0) - m;
    est.std_error = std::sqrt(wv / static_cast<double>(n));
    return est;
}

LrdFit lrd_fit(const sim::Ensemble& e, double s_fixed,
               const std::vector<double>& t_points) {
    if (t_points.size() < 4)
        throw DomainError("lrd_fit: needs at least 4 t_points");
    double t_lo = *std::min_element(t_points.begin(), t_points.end());
    double t_hi = *std::max_element(t_points.begin(), t_points.end());
    if (!(t_lo > s_fixed))
        throw DomainError("lrd_fit: every t_point must exceed s_fixed");
    if (t_hi < 10.0 * t_lo * (1.0 - 1e-12))
        throw DomainError("lrd_fit: t_points must span at least one decade");

    std::size_t is = detail::grid_index(e, s_fixed);
    auto xs = detail::values_at(e, is);
    std::size_t n = xs.size();
    if (n < 2) throw DomainError("lrd_fit: needs at least 2 paths");
    double mx = 0.0, vx = 0.0;
    kern::mean_var(xs.data(), n, &mx, &vx);

    std::vector<double> corr(t_points.size(), 0.0);
    for (std::size_t k = 0; k < t_points.size(); ++k) {
        auto ys = detail::values_at(e, detail::grid_index(e, t_points[k]));
        double my = 0.0, vy = 0.0;
        kern::mean_var(ys.data(), n, &my, &vy);
        if (!(vx > 0.0) || !(vy > 0.0)) continue;  // corr stays 0 -> dropped
        double c = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            c += (xs[i] - mx) * (ys[i] - my);
        c /= static_cast<double>(n);
        corr[k] = c / std::sqrt(vx * vy);
    }
    return detail::fit_loglog(t_points, corr, s_fixed);
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty())
        throw DomainError("ks_two_sample: samples must be non-empty");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double na = static_cast<double>(a.size());
    double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na -
                                  static_cast<double>(j) / nb));
    }
    return d;
}

}  // namespace gfnbp::stats
