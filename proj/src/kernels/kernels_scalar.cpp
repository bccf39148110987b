#include <cmath>

#include "gfnbp/kernels/kernels.hpp"

namespace gfnbp::kern::detail::scalar {

namespace {

// Neumaier-compensated accumulator; keeps sums exact enough that the two
// backends agree to ~1e-15 regardless of input ordering.
struct Acc {
    double s = 0.0;
    double c = 0.0;
    void add(double x) {
        double t = s + x;
        if (std::fabs(s) >= std::fabs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double get() const { return s + c; }
};

}  // namespace

double sum(const double* x, std::size_t n) {
    Acc a;
    for (std::size_t i = 0; i < n; ++i) a.add(x[i]);
    return a.get();
}

double dot(const double* x, const double* y, std::size_t n) {
    Acc a;
    for (std::size_t i = 0; i < n; ++i) a.add(x[i] * y[i]);
    return a.get();
}

void mean_var(const double* x, std::size_t n, double* mean_out,
              double* var_out) {
    if (n == 0) {
        *mean_out = 0.0;
        *var_out = 0.0;
        return;
    }
    double m = sum(x, n) / static_cast<double>(n);
    Acc a;
    for (std::size_t i = 0; i < n; ++i) {
        double d = x[i] - m;
        a.add(d * d);
    }
    *mean_out = m;
    *var_out = a.get() / static_cast<double>(n);
}

void pow_sum(const double* x, std::size_t n, double p, double* sum_out,
             double* sumsq_out) {
    Acc a, b;
    for (std::size_t i = 0; i < n; ++i) {
        double v = x[i] > 0.0 ? std::pow(x[i], p) : 0.0;
        a.add(v);
        b.add(v * v);
    }
    *sum_out = a.get();
    *sumsq_out = b.get();
}

void exp_neg_sum(const double* x, std::size_t n, double u, double* sum_out,
                 double* sumsq_out) {
    Acc a, b;
    for (std::size_t i = 0; i < n; ++i) {
        double v = std::exp(-u * x[i]);
        a.add(v);
        b.add(v * v);
    }
    *sum_out = a.get();
    *sumsq_out = b.get();
}

}  // namespace gfnbp::kern::detail::scalar
