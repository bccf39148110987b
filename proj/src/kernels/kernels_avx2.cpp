#include <cmath>

#include "gfnbp/kernels/kernels.hpp"

#if defined(__x86_64__)

#include <immintrin.h>

namespace gfnbp::kern::detail::avx2 {

namespace {

const __m256d kSignMask = _mm256_set1_pd(-0.0);

// Vector Neumaier accumulator (one compensated sum per lane); the horizontal
// reduction at the end is itself compensated so the result matches the
// scalar backend to ~1e-15.
struct VAcc {
    __m256d s = _mm256_setzero_pd();
    __m256d c = _mm256_setzero_pd();

    void add(__m256d v) {
        __m256d t = _mm256_add_pd(s, v);
        __m256d abs_s = _mm256_andnot_pd(kSignMask, s);
        __m256d abs_v = _mm256_andnot_pd(kSignMask, v);
        __m256d s_big = _mm256_cmp_pd(abs_s, abs_v, _CMP_GE_OQ);
        __m256d corr_s = _mm256_add_pd(_mm256_sub_pd(s, t), v);
        __m256d corr_v = _mm256_add_pd(_mm256_sub_pd(v, t), s);
        c = _mm256_add_pd(c, _mm256_blendv_pd(corr_v, corr_s, s_big));
        s = t;
    }
};

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

double horizontal(const VAcc& v, Acc tail) {
    alignas(32) double sv[4], cv[4];
    _mm256_store_pd(sv, v.s);
    _mm256_store_pd(cv, v.c);
    for (int i = 0; i < 4; ++i) tail.add(sv[i]);
    for (int i = 0; i < 4; ++i) tail.add(cv[i]);
    return tail.get();
}

// exp(x) for x <= ~709; lanes below -708 flush to 0 (just above the
// subnormal range, where the 2^n exponent trick stops working).
__m256d exp_pd(__m256d x) {
    const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
    const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
    const __m256d inv_ln2 = _mm256_set1_pd(1.44269504088896340736e+00);
    const __m256d magic = _mm256_set1_pd(6755399441055744.0);  // 2^52 + 2^51

    __m256d flush = _mm256_cmp_pd(x, _mm256_set1_pd(-708.0), _CMP_LT_OQ);
    x = _mm256_max_pd(x, _mm256_set1_pd(-708.0));
    x = _mm256_min_pd(x, _mm256_set1_pd(709.0));

    __m256d n = _mm256_round_pd(
        _mm256_mul_pd(x, inv_ln2),
        _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, ln2_hi, x);
    r = _mm256_fnmadd_pd(n, ln2_lo, r);

    // Taylor series through r^11; |r| <= ln2/2 keeps the tail below 1e-14.
    __m256d p = _mm256_set1_pd(2.5052108385441718775e-08);    // 1/11!
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.7557319223985890653e-07));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.7557319223985892511e-06));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(2.4801587301587301566e-05));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.9841269841269841253e-04));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.3888888888888889419e-03));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(8.3333333333333332177e-03));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(4.1666666666666664354e-02));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.6666666666666665741e-01));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(5.0e-01));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

    // scale by 2^n via the exponent field
    __m256i ni = _mm256_castpd_si256(_mm256_add_pd(n, magic));
    __m256i expo = _mm256_slli_epi64(
        _mm256_add_epi64(_mm256_and_si256(ni, _mm256_set1_epi64x(0xFFFFFFFF)),
                         _mm256_set1_epi64x(1023)),
        52);
    p = _mm256_mul_pd(p, _mm256_castsi256_pd(expo));
    return _mm256_andnot_pd(flush, p);
}

// log(x) for x > 0 (callers mask nonpositive lanes).
__m256d log_pd(__m256d x) {
    const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
    const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);

    __m256i bits = _mm256_castpd_si256(x);
    __m256i raw_e = _mm256_sub_epi64(_mm256_srli_epi64(bits, 52),
                                     _mm256_set1_epi64x(1023));
    __m256i mant = _mm256_or_si256(
        _mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
        _mm256_set1_epi64x(0x3FF0000000000000LL));
    __m256d m = _mm256_castsi256_pd(mant);

    // int64 lanes -> double (values are tiny, low 32 bits suffice)
    __m256i lo32 = _mm256_permutevar8x32_epi32(
        raw_e, _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0));
    __m256d e = _mm256_cvtepi32_pd(_mm256_castsi256_si128(lo32));

    __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(1.4142135623730951),
                                _CMP_GT_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
    e = _mm256_add_pd(e, _mm256_and_pd(big, _mm256_set1_pd(1.0)));

    // log m = 2 atanh(t), t = (m-1)/(m+1), |t| <= 0.1716
    __m256d one = _mm256_set1_pd(1.0);
    __m256d t = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
    __m256d t2 = _mm256_mul_pd(t, t);
    __m256d q = _mm256_set1_pd(1.0 / 15.0);
    q = _mm256_fmadd_pd(q, t2, _mm256_set1_pd(1.0 / 13.0));
    q = _mm256_fmadd_pd(q, t2, _mm256_set1_pd(1.0 / 11.0));
    q = _mm256_fmadd_pd(q, t2, _mm256_set1_pd(1.0 / 9.0));
    q = _mm256_fmadd_pd(q, t2, _mm256_set1_pd(1.0 / 7.0));
    q = _mm256_fmadd_pd(q, t2, _mm256_set1_pd(1.0 / 5.0));
    q = _mm256_fmadd_pd(q, t2, _mm256_set1_pd(1.0 / 3.0));
    q = _mm256_fmadd_pd(q, t2, one);
    __m256d res = _mm256_mul_pd(_mm256_add_pd(t, t), q);
    res = _mm256_fmadd_pd(e, ln2_lo, res);
    return _mm256_fmadd_pd(e, ln2_hi, res);
}

}  // namespace

bool available() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

double sum(const double* x, std::size_t n) {
    VAcc v;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) v.add(_mm256_loadu_pd(x + i));
    Acc tail;
    for (; i < n; ++i) tail.add(x[i]);
    return horizontal(v, tail);
}

double dot(const double* x, const double* y, std::size_t n) {
    VAcc v;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        v.add(_mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    Acc tail;
    for (; i < n; ++i) tail.add(x[i] * y[i]);
    return horizontal(v, tail);
}

void mean_var(const double* x, std::size_t n, double* mean_out,
              double* var_out) {
    if (n == 0) {
        *mean_out = 0.0;
        *var_out = 0.0;
        return;
    }
    double m = sum(x, n) / static_cast<double>(n);
    __m256d mv = _mm256_set1_pd(m);
    VAcc v;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), mv);
        v.add(_mm256_mul_pd(d, d));
    }
    Acc tail;
    for (; i < n; ++i) {
        double d = x[i] - m;
        tail.add(d * d);
    }
    *mean_out = m;
    *var_out = horizontal(v, tail) / static_cast<double>(n);
}

void pow_sum(const double* x, std::size_t n, double p, double* sum_out,
             double* sumsq_out) {
    __m256d pv = _mm256_set1_pd(p);
    VAcc a, b;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d xv = _mm256_loadu_pd(x + i);
        __m256d pos = _mm256_cmp_pd(xv, _mm256_setzero_pd(), _CMP_GT_OQ);
        __m256d safe = _mm256_blendv_pd(_mm256_set1_pd(1.0), xv, pos);
        __m256d v = exp_pd(_mm256_mul_pd(pv, log_pd(safe)));
        v = _mm256_and_pd(v, pos);
        a.add(v);
        b.add(_mm256_mul_pd(v, v));
    }
    Acc ta, tb;
    for (; i < n; ++i) {
        double v = x[i] > 0.0 ? std::pow(x[i], p) : 0.0;
        ta.add(v);
        tb.add(v * v);
    }
    *sum_out = horizontal(a, ta);
    *sumsq_out = horizontal(b, tb);
}

void exp_neg_sum(const double* x, std::size_t n, double u, double* sum_out,
                 double* sumsq_out) {
    __m256d uv = _mm256_set1_pd(-u);
    VAcc a, b;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = exp_pd(_mm256_mul_pd(uv, _mm256_loadu_pd(x + i)));
        a.add(v);
        b.add(_mm256_mul_pd(v, v));
    }
    Acc ta, tb;
    for (; i < n; ++i) {
        double v = std::exp(-u * x[i]);
        ta.add(v);
        tb.add(v * v);
    }
    *sum_out = horizontal(a, ta);
    *sumsq_out = horizontal(b, tb);
}

}  // namespace gfnbp::kern::detail::avx2

#else  // !__x86_64__

namespace gfnbp::kern::detail::avx2 {

bool available() { return false; }

double sum(const double* x, std::size_t n) { return scalar::sum(x, n); }

double dot(const double* x, const double* y, std::size_t n) {
    return scalar::dot(x, y, n);
}

void mean_var(const double* x, std::size_t n, double* mean_out,
              double* var_out) {
    scalar::mean_var(x, n, mean_out, var_out);
}

void pow_sum(const double* x, std::size_t n, double p, double* sum_out,
             double* sumsq_out) {
    scalar::pow_sum(x, n, p, sum_out, sumsq_out);
}

void exp_neg_sum(const double* x, std::size_t n, double u, double* sum_out,
                 double* sumsq_out) {
    scalar::exp_neg_sum(x, n, u, sum_out, sumsq_out);
}

}  // namespace gfnbp::kern::detail::avx2

#endif
