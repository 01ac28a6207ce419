#pragma once

#include <cstddef>
#include <string>

namespace seqpred::kernels {

/// Dense double-precision primitives behind the HMM forward/backward passes
/// and the Brier scoring loop. Each primitive has a scalar reference
/// implementation and an AVX2 variant; the active set is chosen once at
/// startup from CPU capabilities and can be forced with the environment
/// variable SEQPRED_KERNELS=scalar|avx2. SIMD variants may reassociate
/// additions, so results agree with the scalar reference to rounding, not
/// bitwise.

struct Ops {
    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*sum)(const double* a, std::size_t n);
    double (*sum_squares)(const double* a, std::size_t n);
    void (*scale)(double* a, std::size_t n, double s);
    void (*multiply)(double* out, const double* a, const double* b, std::size_t n);
    // acc[i] += s * a[i] * b[i]
    void (*add_scaled_product)(double* acc, double s, const double* a, const double* b, std::size_t n);
    // sum over i of (a[i] - b[i])^2
    double (*squared_distance)(const double* a, const double* b, std::size_t n);
    const char* name;
};

extern const Ops scalar_ops;

/// AVX2 dispatch table, or nullptr when the build lacks AVX2 support.
const Ops* avx2_ops_table();

/// The dispatch table picked for this process.
const Ops& active();

/// True when the AVX2 variants are usable on this CPU.
bool avx2_available();

inline double dot(const double* a, const double* b, std::size_t n) { return active().dot(a, b, n); }
inline double sum(const double* a, std::size_t n) { return active().sum(a, n); }
inline double sum_squares(const double* a, std::size_t n) { return active().sum_squares(a, n); }
inline void scale(double* a, std::size_t n, double s) { active().scale(a, n, s); }
inline void multiply(double* out, const double* a, const double* b, std::size_t n) {
    active().multiply(out, a, b, n);
}
inline void add_scaled_product(double* acc, double s, const double* a, const double* b, std::size_t n) {
    active().add_scaled_product(acc, s, a, b, n);
}
inline double squared_distance(const double* a, const double* b, std::size_t n) {
    return active().squared_distance(a, b, n);
}

} // namespace seqpred::kernels
