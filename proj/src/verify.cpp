#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "gfnbp/analytic.hpp"
#include "gfnbp/errors.hpp"
#include "gfnbp/params.hpp"
#include "gfnbp/paths.hpp"
#include "gfnbp/stats.hpp"

namespace gfnbp::stats {

namespace {

VerificationReport make_report(std::string id, double analytic,
                               double empirical, double se, double tol) {
    VerificationReport r;
    r.check_id = std::move(id);
    r.analytic = analytic;
    r.empirical = empirical;
    r.mc_stderr = se;
    r.tolerance = std::max(tol, 1e-12);
    r.pass = std::fabs(analytic - empirical) <= r.tolerance;
    return r;
}

// Expected multinomial TV fluctuation for n samples against table `tab`.
double tv_noise(const PmfTable& tab, double n) {
    double acc = 0.0;
    for (double p : tab.probs) acc += std::sqrt(p * (1.0 - p));
    return 0.5 * acc * std::sqrt(2.0 / (std::numbers::pi * n));
}

}  // namespace

std::vector<VerificationReport> verify_suite(const GfnbpParams& p,
                                             const VerifyBudget& budget) {
    std::vector<VerificationReport> out;
    if (budget.n_paths <= 0) return out;
    p.validate();
    const int B = budget.n_paths;
    const auto grid = sim::uniform_grid(1.0, 2);

    sim::GeneratorSpec gen;
    gen.sp.base = p;
    gen.kind = sim::ProcessKind::ml_levy;
    auto e_sub = sim::run_ensemble(gen, B, grid, budget.seed + 1);
    gen.kind = sim::ProcessKind::gfnbp;
    auto e_cnt = sim::run_ensemble(gen, B, grid, budget.seed + 2);

    {
        double an = analytic::ml_levy_laplace(1.0, 1.0, p);
        auto est = empirical_laplace(e_sub, 1.0, 1.0);
        out.push_back(make_report("ml-levy-laplace-u1-t1", an, est.value,
                                  est.std_error, 3.0 * est.std_error + 1e-9));
    }
    try {
        double l = 0.45 * p.alpha;
        double an = analytic::ml_levy_moment(l, 1.0, p);
        auto est = empirical_moment(e_sub, 1.0, l);
        out.push_back(make_report("ml-levy-moment-t1", an, est.value,
                                  est.std_error,
                                  3.0 * est.std_error + 1e-9 * std::fabs(an)));
    } catch (const NumericsError&) {
    }
    try {
        double l = 0.2 * p.alpha;
        double m1 = analytic::ml_levy_moment(l, 1.0, p);
        double m2 = analytic::ml_levy_moment(2.0 * l, 1.0, p);
        out.push_back(make_report("moment-inequality", 0.0,
                                  std::max(0.0, m1 * m1 - m2), 0.0,
                                  1e-9 * std::max(1.0, m2)));
    } catch (const NumericsError&) {
    }
    try {
        auto tab = analytic::gfnbp_pmf_table(1.0, p);
        auto emp = empirical_pmf(e_cnt, 1.0);
        double tv = tv_distance(tab, emp);
        double noise = tv_noise(tab, static_cast<double>(B));
        out.push_back(make_report("gfnbp-pmf-tv", 0.0, tv, noise,
                                  3.0 * noise + tab.tail_bound + 0.002));
    } catch (const NumericsError&) {
    }
    try {
        double an = analytic::gfnbp_mean(1.0, p);
        auto est = empirical_moment(e_cnt, 1.0, 1.0);
        out.push_back(make_report("gfnbp-mean-t1", an, est.value,
                                  est.std_error,
                                  3.0 * est.std_error + 1e-6 * an));
    } catch (const NumericsError&) {
    }
    try {
        double an = analytic::gfnbp_variance(1.0, p);
        auto est = empirical_cov(e_cnt, 1.0, 1.0);
        out.push_back(make_report("gfnbp-variance-t1", an, est.value,
                                  est.std_error,
                                  3.0 * est.std_error + 1e-6 * an));
    } catch (const NumericsError&) {
    }
    try {
        double an =
            analytic::gfnbp_variance(1.0, p) - analytic::gfnbp_mean(1.0, p);
        auto est = dispersion_index(e_cnt, 1.0);
        out.push_back(make_report("gfnbp-dispersion-t1", an, est.value,
                                  est.std_error,
                                  3.0 * est.std_error + 1e-6 * std::fabs(an)));
    } catch (const NumericsError&) {
    }
    {
        double an = analytic::gfnbp_laplace(1.0, 1.0, p);
        auto est = empirical_laplace(e_cnt, 1.0, 1.0);
        out.push_back(make_report("gfnbp-laplace-u1-t1", an, est.value,
                                  est.std_error, 3.0 * est.std_error + 1e-3));
    }
    if (p.alpha == 1.0) {
        try {
            auto quad =
                analytic::gfnbp_pmf_table(1.0, p, PmfMethod::quadrature, 200);
            auto exact = analytic::gfnbp_pmf_table(
                1.0, p, PmfMethod::exact_reduction, 200);
            std::size_t m = std::min(quad.probs.size(), exact.probs.size());
            double md = 0.0;
            for (std::size_t n = 0; n < m; ++n)
                md = std::max(md,
                              std::fabs(quad.probs[n] - exact.probs[n]));
            out.push_back(
                make_report("closed-form-reduction", 0.0, md, 0.0, 1e-6));
        } catch (const NumericsError&) {
        }
    }
    return out;
}

std::vector<VerificationReport> verify_suite(const SpaceTimeParams& sp,
                                             const VerifyBudget& budget) {
    std::vector<VerificationReport> out;
    if (budget.n_paths <= 0) return out;
    sp.validate();
    const int B = budget.n_paths;
    const auto grid = sim::uniform_grid(1.0, 2);

    sim::GeneratorSpec gen;
    gen.sp = sp;

    try {
        gen.kind = sim::ProcessKind::sfpp;
        auto e = sim::run_ensemble(gen, B, grid, budget.seed + 1);
        auto tab = analytic::sfpp_pmf_table(1.0, sp);
        double tv = tv_distance(tab, empirical_pmf(e, 1.0));
        double noise = tv_noise(tab, static_cast<double>(B));
        out.push_back(make_report("sfpp-pmf-tv", 0.0, tv, noise,
                                  3.0 * noise + tab.tail_bound + 0.002));
    } catch (const NumericsError&) {
    }
    {
        gen.kind = sim::ProcessKind::sfgnbp;
        auto e = sim::run_ensemble(gen, B, grid, budget.seed + 2);
        double an = analytic::sfgnbp_laplace(1.0, 1.0, sp);
        auto est = empirical_laplace(e, 1.0, 1.0);
        out.push_back(make_report("sfgnbp-laplace-u1-t1", an, est.value,
                                  est.std_error, 3.0 * est.std_error + 1e-9));
    }
    if (sp.alpha_prime < sp.base.alpha) {
        try {
            const double u = 1.0;
            const int K = 40;
            double lhs = 0.0;
            double nu_k = 0.0;
            for (int k = 1; k <= K; ++k) {
                nu_k = analytic::sfgnbp_levy_density(k, sp);
                lhs += nu_k * (1.0 - std::exp(-u * k));
            }
            double tail = nu_k * K / sp.alpha_prime;
            double inner = std::pow(
                sp.base.lambda * (-std::expm1(-u)), sp.alpha_prime);
            double rhs = sp.base.rho *
                         std::log1p(std::pow(inner, sp.base.alpha) /
                                    sp.base.mu);
            out.push_back(make_report("levy-measure-identity", rhs, lhs, 0.0,
                                      3.0 * tail + 1e-6));
        } catch (const NumericsError&) {
        }
    }
    try {
        gen.kind = sim::ProcessKind::nh_stfnbp;
        auto e = sim::run_ensemble(gen, B, grid, budget.seed + 3);
        // head window only: each heavy-tail bin costs an adaptive integral,
        // and the tolerance already carries the table's tail_bound
        auto tab = analytic::nh_stfnbp_pmf_table(1.0, sp, 48);
        double tv = tv_distance(tab, empirical_pmf(e, 1.0));
        double noise = tv_noise(tab, static_cast<double>(B));
        out.push_back(make_report("nh-stfnbp-pmf-tv", 0.0, tv, noise,
                                  3.0 * noise + tab.tail_bound + 0.002));
    } catch (const NumericsError&) {
    }
    return out;
}

}  // namespace gfnbp::stats
