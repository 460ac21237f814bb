#include <cmath>
#include <cstdlib>
#include <limits>

#include "privalog/kernels.hpp"

namespace privalog::kernels {

const Ops& active_ops() {
    static const Ops& ops = []() -> const Ops& {
        if (std::getenv("PRIVALOG_NO_SIMD")) return scalar_ops();
        return avx2_available() ? avx2_ops() : scalar_ops();
    }();
    return ops;
}

void pow_f64(const double* a, const double* b, double* out, size_t n) {
    for (size_t i = 0; i < n; ++i) {
        double r = std::pow(a[i], b[i]);
        out[i] = std::isfinite(r) ? r : std::numeric_limits<double>::quiet_NaN();
    }
}

void i64_to_f64(const int64_t* a, double* out, size_t n) {
    for (size_t i = 0; i < n; ++i) out[i] = static_cast<double>(a[i]);
}

size_t popcount_u8(const uint8_t* b, size_t n) {
    size_t c = 0;
    for (size_t i = 0; i < n; ++i) c += b[i];
    return c;
}

int64_t sum_masked_i64(const int64_t* v, const uint8_t* b, size_t n) {
    uint64_t acc = 0;
    for (size_t i = 0; i < n; ++i)
        if (b[i]) acc += static_cast<uint64_t>(v[i]);
    return static_cast<int64_t>(acc);
}

double sum_masked_f64(const double* v, const uint8_t* b, size_t n) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i)
        if (b[i]) acc += v[i];
    return acc;
}

int64_t min_masked_i64(const int64_t* v, const uint8_t* b, size_t n) {
    int64_t acc = INT64_MAX;
    for (size_t i = 0; i < n; ++i)
        if (b[i] && v[i] < acc) acc = v[i];
    return acc;
}

int64_t max_masked_i64(const int64_t* v, const uint8_t* b, size_t n) {
    int64_t acc = INT64_MIN;
    for (size_t i = 0; i < n; ++i)
        if (b[i] && v[i] > acc) acc = v[i];
    return acc;
}

double min_masked_f64(const double* v, const uint8_t* b, size_t n) {
    double acc = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i)
        if (b[i] && !std::isnan(v[i]) && v[i] < acc) acc = v[i];
    return acc;
}

double max_masked_f64(const double* v, const uint8_t* b, size_t n) {
    double acc = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i)
        if (b[i] && !std::isnan(v[i]) && v[i] > acc) acc = v[i];
    return acc;
}

} // namespace privalog::kernels
