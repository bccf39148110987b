#include "gfnbp/kernels/kernels.hpp"

#include "gfnbp/errors.hpp"

namespace gfnbp::kern {

namespace {

Backend& state() {
    static Backend b =
        detail::avx2::available() ? Backend::avx2 : Backend::scalar;
    return b;
}

}  // namespace

Backend active_backend() { return state(); }

bool backend_supported(Backend b) {
    return b == Backend::scalar || detail::avx2::available();
}

void force_backend(Backend b) {
    if (!backend_supported(b))
        throw DomainError("kernels: requested backend not supported here");
    state() = b;
}

const char* backend_name(Backend b) {
    return b == Backend::avx2 ? "avx2" : "scalar";
}

double sum(const double* x, std::size_t n) {
    return state() == Backend::avx2 ? detail::avx2::sum(x, n)
                                    : detail::scalar::sum(x, n);
}

double dot(const double* x, const double* y, std::size_t n) {
    return state() == Backend::avx2 ? detail::avx2::dot(x, y, n)
                                    : detail::scalar::dot(x, y, n);
}

void mean_var(const double* x, std::size_t n, double* mean_out,
              double* var_out) {
    if (state() == Backend::avx2)
        detail::avx2::mean_var(x, n, mean_out, var_out);
    else
        detail::scalar::mean_var(x, n, mean_out, var_out);
}

void pow_sum(const double* x, std::size_t n, double p, double* sum_out,
             double* sumsq_out) {
    if (state() == Backend::avx2)
        detail::avx2::pow_sum(x, n, p, sum_out, sumsq_out);
    else
        detail::scalar::pow_sum(x, n, p, sum_out, sumsq_out);
}

void exp_neg_sum(const double* x, std::size_t n, double u, double* sum_out,
                 double* sumsq_out) {
    if (state() == Backend::avx2)
        detail::avx2::exp_neg_sum(x, n, u, sum_out, sumsq_out);
    else
        detail::scalar::exp_neg_sum(x, n, u, sum_out, sumsq_out);
}

}  // namespace gfnbp::kern
