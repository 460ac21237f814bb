#include <cmath>
#include <limits>

#include "privalog/kernels.hpp"
#include "privalog/value.hpp"

namespace privalog::kernels {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline double guard(double r) { return std::isfinite(r) ? r : kNaN; }

void add_f64(const double* a, const double* b, double* o, size_t n) {
    for (size_t i = 0; i < n; ++i) o[i] = guard(a[i] + b[i]);
}
void sub_f64(const double* a, const double* b, double* o, size_t n) {
    for (size_t i = 0; i < n; ++i) o[i] = guard(a[i] - b[i]);
}
void mul_f64(const double* a, const double* b, double* o, size_t n) {
    for (size_t i = 0; i < n; ++i) o[i] = guard(a[i] * b[i]);
}
void div_f64(const double* a, const double* b, double* o, size_t n) {
    for (size_t i = 0; i < n; ++i) o[i] = b[i] == 0.0 ? kNaN : guard(a[i] / b[i]);
}
void sqrt_f64(const double* a, double* o, size_t n) {
    for (size_t i = 0; i < n; ++i) {
        double r = a[i] < 0.0 ? kNaN : std::sqrt(a[i]);
        o[i] = std::isnan(r) ? kNaN : r; // canonical NaN
    }
}

inline uint8_t feq(double a, double b) {
    if (std::isnan(a) || std::isnan(b)) return 0;
    if (a == b) return 1;
    double scale = std::fmax(std::fabs(a), std::fabs(b));
    return std::fabs(a - b) <= kFloatEqTolerance * scale ? 1 : 0;
}

void eq_f64(const double* a, const double* b, uint8_t* o, size_t n) {
    for (size_t i = 0; i < n; ++i) o[i] = feq(a[i], b[i]);
}
void ne_f64(const double* a, const double* b, uint8_t* o, size_t n) {
    for (size_t i = 0; i < n; ++i)
        o[i] = (!std::isnan(a[i]) && !std::isnan(b[i]) && !feq(a[i], b[i])) ? 1 : 0;
}
void lt_f64(const double* a, const double* b, uint8_t* o, size_t n) {
    for (size_t i = 0; i < n; ++i) o[i] = a[i] < b[i] ? 1 : 0;
}
void le_f64(const double* a, const double* b, uint8_t* o, size_t n) {
    for (size_t i = 0; i < n; ++i) o[i] = a[i] <= b[i] ? 1 : 0;
}
void gt_f64(const double* a, const double* b, uint8_t* o, size_t n) {
    for (size_t i = 0; i < n; ++i) o[i] = a[i] > b[i] ? 1 : 0;
}
void ge_f64(const double* a, const double* b, uint8_t* o, size_t n) {
    for (size_t i = 0; i < n; ++i) o[i] = a[i] >= b[i] ? 1 : 0;
}

void add_i64(const int64_t* a, const int64_t* b, int64_t* o, size_t n) {
    for (size_t i = 0; i < n; ++i)
        o[i] = static_cast<int64_t>(static_cast<uint64_t>(a[i]) + static_cast<uint64_t>(b[i]));
}
void sub_i64(const int64_t* a, const int64_t* b, int64_t* o, size_t n) {
    for (size_t i = 0; i < n; ++i)
        o[i] = static_cast<int64_t>(static_cast<uint64_t>(a[i]) - static_cast<uint64_t>(b[i]));
}
void mul_i64(const int64_t* a, const int64_t* b, int64_t* o, size_t n) {
    for (size_t i = 0; i < n; ++i)
        o[i] = static_cast<int64_t>(static_cast<uint64_t>(a[i]) * static_cast<uint64_t>(b[i]));
}

void eq_i64(const int64_t* a, const int64_t* b, uint8_t* o, size_t n) {
    for (size_t i = 0; i < n; ++i) o[i] = a[i] == b[i] ? 1 : 0;
}
void ne_i64(const int64_t* a, const int64_t* b, uint8_t* o, size_t n) {
    for (size_t i = 0; i < n; ++i) o[i] = a[i] != b[i] ? 1 : 0;
}
void lt_i64(const int64_t* a, const int64_t* b, uint8_t* o, size_t n) {
    for (size_t i = 0; i < n; ++i) o[i] = a[i] < b[i] ? 1 : 0;
}
void le_i64(const int64_t* a, const int64_t* b, uint8_t* o, size_t n) {
    for (size_t i = 0; i < n; ++i) o[i] = a[i] <= b[i] ? 1 : 0;
}
void gt_i64(const int64_t* a, const int64_t* b, uint8_t* o, size_t n) {
    for (size_t i = 0; i < n; ++i) o[i] = a[i] > b[i] ? 1 : 0;
}
void ge_i64(const int64_t* a, const int64_t* b, uint8_t* o, size_t n) {
    for (size_t i = 0; i < n; ++i) o[i] = a[i] >= b[i] ? 1 : 0;
}

void and_u8(const uint8_t* a, const uint8_t* b, uint8_t* o, size_t n) {
    for (size_t i = 0; i < n; ++i) o[i] = a[i] & b[i];
}
void or_u8(const uint8_t* a, const uint8_t* b, uint8_t* o, size_t n) {
    for (size_t i = 0; i < n; ++i) o[i] = a[i] | b[i];
}
void not_u8(const uint8_t* a, uint8_t* o, size_t n) {
    for (size_t i = 0; i < n; ++i) o[i] = a[i] ^ 1u;
}

} // namespace

const Ops& scalar_ops() {
    static const Ops ops = {
        add_f64, sub_f64, mul_f64, div_f64, sqrt_f64,
        eq_f64, ne_f64, lt_f64, le_f64, gt_f64, ge_f64,
        add_i64, sub_i64, mul_i64,
        eq_i64, ne_i64, lt_i64, le_i64, gt_i64, ge_i64,
        and_u8, or_u8, not_u8,
    };
    return ops;
}

} // namespace privalog::kernels
