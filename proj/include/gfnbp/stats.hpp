#pragma once

// Estimators over simulated ensembles: empirical pmfs, fractional moments,
// Laplace functionals, covariance, dispersion, and the log-log decay fit
// used to measure long-range dependence. All estimators are permutation
// invariant across paths and report a Monte Carlo standard error.

#include <cstdint>
#include <string>
#include <vector>

#include "gfnbp/params.hpp"
#include "gfnbp/paths.hpp"

namespace gfnbp::stats {

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

struct LrdFit {
    double slope = 0.0;
    double slope_stderr = 0.0;
    double r_squared = 0.0;
    std::vector<double> t_points;  // points retained by the fit
    double s_fixed = 0.0;
};

struct VerificationReport {
    std::string check_id;
    double analytic = 0.0;
    double empirical = 0.0;
    double mc_stderr = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct VerifyBudget {
    int n_paths = 20000;  // 0 disables the battery entirely
    std::uint64_t seed = 1;
};

// Relative frequencies of the (integer) path values at time t. The support
// runs to the largest observed count, capped at 100000; observations beyond
// the cap land in tail_bound as their exact fraction.
// Throws GridMiss when t is not a grid point of the ensemble.
PmfTable empirical_pmf(const sim::Ensemble& e, double t);

// Total variation distance: tables are zero-padded to a common support and
// the tail bounds enter as an extra cell.
double tv_distance(const PmfTable& a, const PmfTable& b);

// Sample mean of X(t)^order (order > 0) with plug-in standard error.
Estimate empirical_moment(const sim::Ensemble& e, double t, double order);

// Sample mean of exp(-u X(t)) (u >= 0) with plug-in standard error.
Estimate empirical_laplace(const sim::Ensemble& e, double t, double u);

// Unbiased sample covariance of (X(s), X(t)) across paths; the standard
// error comes from the influence function of the covariance functional.
Estimate empirical_cov(const sim::Ensemble& e, double s, double t);

// Var[X(t)] - E[X(t)] with a delta-method standard error; positive values
// mean overdispersion.
Estimate dispersion_index(const sim::Ensemble& e, double t);

// OLS fit of log Corr(s_fixed, t) against log t. Points with estimated
// correlation <= 0 are dropped; fewer than 4 survivors raises
// DegenerateCorrelation. Requires t_points > s_fixed spanning a decade.
LrdFit lrd_fit(const sim::Ensemble& e, double s_fixed,
               const std::vector<double>& t_points);

// Two-sample Kolmogorov-Smirnov sup distance. Both samples must be
// non-empty; inputs are copied and sorted internally.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

// Full deterministic check battery for the counting process family.
// Window-restricted checks that do not apply at the given parameters are
// skipped rather than failed; a zero budget yields an empty list.
std::vector<VerificationReport> verify_suite(const GfnbpParams& p,
                                             const VerifyBudget& budget);
std::vector<VerificationReport> verify_suite(const SpaceTimeParams& sp,
                                             const VerifyBudget& budget);

namespace detail {

// Index of t in the ensemble grid (1e-9 relative tolerance); GridMiss
// otherwise.
std::size_t grid_index(const sim::Ensemble& e, double t);

// Path values at grid index i, one entry per path.
std::vector<double> values_at(const sim::Ensemble& e, std::size_t idx);

// Power-law fit core on precomputed correlations; applies the drop rule.
LrdFit fit_loglog(const std::vector<double>& t_points,
                  const std::vector<double>& corr, double s_fixed);

}  // namespace detail

}  // namespace gfnbp::stats
