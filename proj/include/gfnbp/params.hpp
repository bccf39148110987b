#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "gfnbp/errors.hpp"

namespace gfnbp {

// alpha = 1 degrades the subordinator to gamma; beta = 1 degrades the
// counting component to Poisson.
struct GfnbpParams {
    double alpha = 1.0;   // stable index, (0, 1]
    double beta = 1.0;    // fractional order of the counting component, (0, 1]
    double rho = 1.0;     // subordinator shape rate, > 0
    double mu = 1.0;      // subordinator scale, > 0
    double lambda = 1.0;  // arrival intensity, > 0

    void validate() const {
        if (!(alpha > 0.0) || !(alpha <= 1.0))
            throw DomainError("params: alpha must lie in (0, 1]");
        if (!(beta > 0.0) || !(beta <= 1.0))
            throw DomainError("params: beta must lie in (0, 1]");
        if (!(rho > 0.0)) throw DomainError("params: rho must be > 0");
        if (!(mu > 0.0)) throw DomainError("params: mu must be > 0");
        if (!(lambda > 0.0)) throw DomainError("params: lambda must be > 0");
    }

    double q() const { return lambda / std::tgamma(1.0 + beta); }
    double d() const {
        double qq = q();
        return beta * qq * qq *
               std::exp(std::lgamma(beta) + std::lgamma(1.0 + beta) -
                        std::lgamma(1.0 + 2.0 * beta));
    }
};

struct SpaceTimeParams {
    GfnbpParams base;
    double alpha_prime = 1.0;  // space-fractional order, (0, 1]
    double beta_prime = 1.0;   // time-fractional order, (0, 1]
    double rate_c = 1.0;       // linear rate R(t) = c * t, c > 0

    void validate() const {
        base.validate();
        if (!(alpha_prime > 0.0) || !(alpha_prime <= 1.0))
            throw DomainError("params: alpha_prime must lie in (0, 1]");
        if (!(beta_prime > 0.0) || !(beta_prime <= 1.0))
            throw DomainError("params: beta_prime must lie in (0, 1]");
        if (!(rate_c > 0.0)) throw DomainError("params: rate c must be > 0");
    }
};

enum class PmfMethod { quadrature, series, exact_reduction, empirical };

inline const char* pmf_method_name(PmfMethod m) {
    switch (m) {
        case PmfMethod::quadrature: return "quadrature";
        case PmfMethod::series: return "series";
        case PmfMethod::exact_reduction: return "exact-reduction";
        case PmfMethod::empirical: return "empirical";
    }
    return "unknown";
}

struct PmfTable {
    double t = 0.0;
    std::vector<double> probs;  // indexed by n = 0..N_max
    double tail_bound = 0.0;    // upper bound on mass beyond N_max
    PmfMethod method = PmfMethod::quadrature;
};

}  // namespace gfnbp
