#include "seqpred/kernels.hpp"

namespace seqpred::kernels {

namespace {

double scalar_dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

double scalar_sum(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i];
    return acc;
}

double scalar_sum_squares(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * a[i];
    return acc;
}

void scalar_scale(double* a, std::size_t n, double s) {
    for (std::size_t i = 0; i < n; ++i) a[i] *= s;
}

void scalar_multiply(double* out, const double* a, const double* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void scalar_add_scaled_product(double* acc, double s, const double* a, const double* b,
                               std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) acc[i] += s * a[i] * b[i];
}

double scalar_squared_distance(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

} // namespace

const Ops scalar_ops = {
    scalar_dot,      scalar_sum,      scalar_sum_squares,      scalar_scale,
    scalar_multiply, scalar_add_scaled_product, scalar_squared_distance, "scalar",
};

} // namespace seqpred::kernels
