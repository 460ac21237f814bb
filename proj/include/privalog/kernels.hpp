#pragma once

#include <cstddef>
#include <cstdint>

namespace privalog::kernels {

// Elementwise vector kernels backing the IR interpreter. Boolean lanes are
// uint8_t 0/1. Garbage values are NaN: arithmetic that would produce a
// non-finite double from finite inputs yields NaN instead, division by zero
// yields NaN, and every comparison involving NaN is false. Float equality
// uses the same relative tolerance as the reference evaluator.
struct Ops {
    void (*add_f64)(const double*, const double*, double*, size_t);
    void (*sub_f64)(const double*, const double*, double*, size_t);
    void (*mul_f64)(const double*, const double*, double*, size_t);
    void (*div_f64)(const double*, const double*, double*, size_t);
    void (*sqrt_f64)(const double*, double*, size_t);

    void (*eq_f64)(const double*, const double*, uint8_t*, size_t);
    void (*ne_f64)(const double*, const double*, uint8_t*, size_t);
    void (*lt_f64)(const double*, const double*, uint8_t*, size_t);
    void (*le_f64)(const double*, const double*, uint8_t*, size_t);
    void (*gt_f64)(const double*, const double*, uint8_t*, size_t);
    void (*ge_f64)(const double*, const double*, uint8_t*, size_t);

    void (*add_i64)(const int64_t*, const int64_t*, int64_t*, size_t);
    void (*sub_i64)(const int64_t*, const int64_t*, int64_t*, size_t);
    void (*mul_i64)(const int64_t*, const int64_t*, int64_t*, size_t);

    void (*eq_i64)(const int64_t*, const int64_t*, uint8_t*, size_t);
    void (*ne_i64)(const int64_t*, const int64_t*, uint8_t*, size_t);
    void (*lt_i64)(const int64_t*, const int64_t*, uint8_t*, size_t);
    void (*le_i64)(const int64_t*, const int64_t*, uint8_t*, size_t);
    void (*gt_i64)(const int64_t*, const int64_t*, uint8_t*, size_t);
    void (*ge_i64)(const int64_t*, const int64_t*, uint8_t*, size_t);

    void (*and_u8)(const uint8_t*, const uint8_t*, uint8_t*, size_t);
    void (*or_u8)(const uint8_t*, const uint8_t*, uint8_t*, size_t);
    void (*not_u8)(const uint8_t*, uint8_t*, size_t);
};

const Ops& scalar_ops();
bool avx2_available();
const Ops& avx2_ops(); // valid only when avx2_available()

/// AVX2 when the CPU supports it, scalar otherwise. The PRIVALOG_NO_SIMD
/// environment variable forces the scalar path.
const Ops& active_ops();

// scalar-only helpers (no profitable or exact SIMD form)
void pow_f64(const double* a, const double* b, double* out, size_t n);
void i64_to_f64(const int64_t* a, double* out, size_t n);
size_t popcount_u8(const uint8_t* b, size_t n);

// masked folds; the float sum stays scalar so results are order-exact
int64_t sum_masked_i64(const int64_t* v, const uint8_t* b, size_t n);
double sum_masked_f64(const double* v, const uint8_t* b, size_t n);
// min/max skip NaN entries; all-masked-out returns the sentinel
int64_t min_masked_i64(const int64_t* v, const uint8_t* b, size_t n); // INT64_MAX sentinel
int64_t max_masked_i64(const int64_t* v, const uint8_t* b, size_t n); // INT64_MIN sentinel
double min_masked_f64(const double* v, const uint8_t* b, size_t n);   // +inf sentinel
double max_masked_f64(const double* v, const uint8_t* b, size_t n);   // -inf sentinel

} // namespace privalog::kernels
