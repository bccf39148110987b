#pragma once

// Reduction kernels with a scalar reference implementation and an AVX2
// variant selected at runtime. The two backends must agree to within the
// tolerances asserted by the equivalence tests; everything downstream
// (stats estimators) goes through this interface.

#include <cstddef>

namespace gfnbp::kern {

enum class Backend { scalar, avx2 };

Backend active_backend();
bool backend_supported(Backend b);
// Throws DomainError when the host lacks the requested backend.
void force_backend(Backend b);
const char* backend_name(Backend b);

double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
// Population mean and variance (divides by n); n = 0 yields (0, 0).
void mean_var(const double* x, std::size_t n, double* mean_out,
              double* var_out);
// sum_out = sum x[i]^p, sumsq_out = sum x[i]^(2p). Requires x[i] >= 0.
void pow_sum(const double* x, std::size_t n, double p, double* sum_out,
             double* sumsq_out);
// sum_out = sum exp(-u x[i]), sumsq_out = sum exp(-2 u x[i]).
void exp_neg_sum(const double* x, std::size_t n, double u, double* sum_out,
                 double* sumsq_out);

namespace detail {

namespace scalar {
double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
void mean_var(const double* x, std::size_t n, double* mean_out,
              double* var_out);
void pow_sum(const double* x, std::size_t n, double p, double* sum_out,
             double* sumsq_out);
void exp_neg_sum(const double* x, std::size_t n, double u, double* sum_out,
                 double* sumsq_out);
}  // namespace scalar

namespace avx2 {
bool available();
double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
void mean_var(const double* x, std::size_t n, double* mean_out,
              double* var_out);
void pow_sum(const double* x, std::size_t n, double p, double* sum_out,
             double* sumsq_out);
void exp_neg_sum(const double* x, std::size_t n, double u, double* sum_out,
                 double* sumsq_out);
}  // namespace avx2

}  // namespace detail

}  // namespace gfnbp::kern
