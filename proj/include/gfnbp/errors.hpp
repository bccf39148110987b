#pragma once

#include <stdexcept>
#include <string>

namespace gfnbp {

// Base for all numerical-evaluation failures. Callers that offer a fallback
// route catch the specific subclass; everything else propagates to the CLI,
// which maps NumericsError to exit code 3.
struct NumericsError : std::runtime_error {
    explicit NumericsError(const std::string& msg) : std::runtime_error(msg) {}
};

// Series did not meet the truncation rule within the term budget.
struct NonConvergent : NumericsError {
    using NumericsError::NumericsError;
};

// A partial sum or term magnitude exceeded the overflow guard.
struct Overflow : NumericsError {
    using NumericsError::NumericsError;
};

// Wright-series convergence index fails the admissibility rule.
struct DivergentSeries : NumericsError {
    using NumericsError::NumericsError;
};

// A numerator gamma factor sits on a pole (denominator poles zero the term).
struct NumeratorPole : NumericsError {
    using NumericsError::NumericsError;
};

// Argument outside the operation's domain.
struct DomainError : NumericsError {
    using NumericsError::NumericsError;
};

// Alternating series lost too many digits: largest term exceeds the sum by
// more than the guard factor and no alternative route is available.
struct CancellationLoss : NumericsError {
    using NumericsError::NumericsError;
};

// Fractional moment of order at or above the tail index.
struct MomentDiverges : NumericsError {
    using NumericsError::NumericsError;
};

// Moment-window series has no admissible terms at these parameters.
struct SeriesWindowEmpty : NumericsError {
    using NumericsError::NumericsError;
};

// Adaptive quadrature exhausted its panel budget above tolerance.
struct QuadratureFail : NumericsError {
    using NumericsError::NumericsError;
};

// Requested time is not a grid point of the ensemble.
struct GridMiss : NumericsError {
    using NumericsError::NumericsError;
};

// Too few usable (positive, finite) correlation points for a slope fit.
struct DegenerateCorrelation : NumericsError {
    using NumericsError::NumericsError;
};

// Latent-path step too coarse for the requested first-passage accuracy.
struct ResolutionTooCoarse : NumericsError {
    using NumericsError::NumericsError;
};

}  // namespace gfnbp
