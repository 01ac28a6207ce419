// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include "seqpred/kernels.hpp"

#if defined(__AVX2__)
#include <immintrin.h>

namespace seqpred::kernels {

namespace {

inline double hsum256(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d shuf = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

double avx2_dot(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    }
    double total = hsum256(acc);
    for (; i < n; ++i) total += a[i] * b[i];
    return total;
}

double avx2_sum(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
    double total = hsum256(acc);
    for (; i < n; ++i) total += a[i];
    return total;
}

double avx2_sum_squares(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(a + i);
        acc = _mm256_fmadd_pd(v, v, acc);
    }
    double total = hsum256(acc);
    for (; i < n; ++i) total += a[i] * a[i];
    return total;
}

void avx2_scale(double* a, std::size_t n, double s) {
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(a + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), vs));
    }
    for (; i < n; ++i) a[i] *= s;
}

void avx2_multiply(double* out, const double* a, const double* b, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    }
    for (; i < n; ++i) out[i] = a[i] * b[i];
}

void avx2_add_scaled_product(double* acc, double s, const double* a, const double* b,
                             std::size_t n) {
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d prod = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        _mm256_storeu_pd(acc + i, _mm256_fmadd_pd(vs, prod, _mm256_loadu_pd(acc + i)));
    }
    for (; i < n; ++i) acc[i] += s * a[i] * b[i];
}

double avx2_squared_distance(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double total = hsum256(acc);
    for (; i < n; ++i) {
        double d = a[i] - b[i];
        total += d * d;
    }
    return total;
}

const Ops avx2_ops = {
    avx2_dot,      avx2_sum,      avx2_sum_squares,      avx2_scale,
    avx2_multiply, avx2_add_scaled_product, avx2_squared_distance, "avx2",
};

} // namespace

const Ops* avx2_ops_table() { return &avx2_ops; }

} // namespace seqpred::kernels

#else

namespace seqpred::kernels {
const Ops* avx2_ops_table() { return nullptr; }
} // namespace seqpred::kernels

#endif
