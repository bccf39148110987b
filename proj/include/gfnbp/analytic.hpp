#pragma once

#include "gfnbp/params.hpp"

namespace gfnbp::analytic {

// Truncation report for the windowed moment expansions: first excluded series
// index (-1 when nothing was dropped) and a magnitude-based error estimate.
struct SeriesInfo {
    int discarded_from = -1;
    double error_estimate = 0.0;
};

// Counting component alone (operational time t).
double fpp_pmf(int n, double t, const GfnbpParams& p);

// Subordinator marginals and transforms.
double ml_levy_pdf(double x, double t, const GfnbpParams& p);
double ml_levy_moment(double l, double t, const GfnbpParams& p);
double ml_levy_laplace(double u, double t, const GfnbpParams& p);
double ml_levy_levy_density(double x, const GfnbpParams& p);

// Composed counting process.
double gfnbp_pmf(int n, double t, const GfnbpParams& p,
                 PmfMethod method = PmfMethod::quadrature,
                 SeriesInfo* info = nullptr);
double gfnbp_mean(double t, const GfnbpParams& p);
double gfnbp_variance(double t, const GfnbpParams& p);
double gfnbp_pgf(double u, double t, const GfnbpParams& p);
double gfnbp_laplace(double u, double t, const GfnbpParams& p);
double gfnbp_cov_asymptotic(double s, double t, const GfnbpParams& p);
double lrd_exponent(const GfnbpParams& p);

// Space-fractional and space-time-fractional variants.
double sfpp_pmf(int n, double t, const SpaceTimeParams& sp);
double sfgnbp_laplace(double u, double t, const SpaceTimeParams& sp);
double sfgnbp_levy_density(int k, const SpaceTimeParams& sp);
double nh_stfnbp_pmf(int n, double t, const SpaceTimeParams& sp,
                     SeriesInfo* info = nullptr);

// Tables grow until cumulative mass reaches 1 - 1e-4 or n hits n_cap.
PmfTable fpp_pmf_table(double t, const GfnbpParams& p, int n_cap = 500);
PmfTable gfnbp_pmf_table(double t, const GfnbpParams& p,
                         PmfMethod method = PmfMethod::quadrature,
                         int n_cap = 500);
PmfTable sfpp_pmf_table(double t, const SpaceTimeParams& sp, int n_cap = 500);
PmfTable nh_stfnbp_pmf_table(double t, const SpaceTimeParams& sp,
                             int n_cap = 500);

namespace detail {

// Dual evaluation routes, exposed so tests can compare them on the overlap
// of their validity regions.

// Alternating series for the subordinator pdf; sets *ratio to the peak-term
// over value cancellation ratio when requested.
double ml_levy_pdf_series(double x, double t, const GfnbpParams& p,
                          double* ratio = nullptr);
// Large-x tail expansion; ok reports whether the optimal-truncation estimate
// certified the result.
double ml_levy_pdf_asymptotic(double x, double t, const GfnbpParams& p,
                              bool* ok);
// Scale-mixture integral route; positive integrand, no cancellation.
double ml_levy_pdf_mixture(double x, double t, const GfnbpParams& p);
// Router used by quadrature internals: series, then asymptotic, then mixture.
double ml_levy_pdf_robust(double x, double t, const GfnbpParams& p);

// Counting-component pmf via the positive-integrand time-change integral.
double fpp_pmf_integral(int n, double t, double beta, double lambda);
// Signed analytic continuation of the fractional-moment formula (used only
// for truncation-error estimates outside the validity window).
double ml_levy_moment_continued(double l, double t, const GfnbpParams& p);
// Moment-expansion route for the composed pmf (validity-windowed terms only).
double gfnbp_pmf_series(int n, double t, const GfnbpParams& p,
                        SeriesInfo* info);
// Pmf of the unit-rate space count run on an order-bp inverse subordinator
// at a deterministic operational time q; series, tail expansion, and
// time-change integral stitched over disjoint certification regions.
double stfpp_cond_pmf(int n, double q, double ap, double bp);
// Nested-composition pmf by integrating the conditional count pmf against
// the subordinator marginal; authority whenever the windowed moment
// expansion cannot certify its truncation error.
double nh_stfnbp_pmf_integral(int n, double t, const SpaceTimeParams& sp);

}  // namespace detail

}  // namespace gfnbp::analytic
