#include <cmath>
#include <cstring>
#include <limits>

#include "privalog/kernels.hpp"
#include "privalog/value.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>

namespace privalog::kernels {

namespace {

#define AVX2_FN __attribute__((target("avx2")))

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

AVX2_FN inline __m256d abs_pd(__m256d x) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
}

// non-finite results become NaN
AVX2_FN inline __m256d guard_pd(__m256d r) {
    __m256d finite = _mm256_cmp_pd(abs_pd(r), _mm256_set1_pd(HUGE_VAL), _CMP_LT_OQ);
    return _mm256_blendv_pd(_mm256_set1_pd(kNaN), r, finite);
}

AVX2_FN inline void store_mask(uint8_t* o, __m256d m) {
    int bits = _mm256_movemask_pd(m);
    o[0] = bits & 1;
    o[1] = (bits >> 1) & 1;
    o[2] = (bits >> 2) & 1;
    o[3] = (bits >> 3) & 1;
}

template <typename ScalarTail, typename Body>
AVX2_FN inline void vec_loop_f64(size_t n, Body body, ScalarTail tail) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4) body(i);
    for (; i < n; ++i) tail(i);
}

AVX2_FN void add_f64(const double* a, const double* b, double* o, size_t n) {
    vec_loop_f64(
        n,
        [&](size_t i) AVX2_FN {
            _mm256_storeu_pd(o + i, guard_pd(_mm256_add_pd(_mm256_loadu_pd(a + i),
                                                           _mm256_loadu_pd(b + i))));
        },
        [&](size_t i) {
            double r = a[i] + b[i];
            o[i] = std::isfinite(r) ? r : kNaN;
        });
}

AVX2_FN void sub_f64(const double* a, const double* b, double* o, size_t n) {
    vec_loop_f64(
        n,
        [&](size_t i) AVX2_FN {
            _mm256_storeu_pd(o + i, guard_pd(_mm256_sub_pd(_mm256_loadu_pd(a + i),
                                                           _mm256_loadu_pd(b + i))));
        },
        [&](size_t i) {
            double r = a[i] - b[i];
            o[i] = std::isfinite(r) ? r : kNaN;
        });
}

AVX2_FN void mul_f64(const double* a, const double* b, double* o, size_t n) {
    vec_loop_f64(
        n,
        [&](size_t i) AVX2_FN {
            _mm256_storeu_pd(o + i, guard_pd(_mm256_mul_pd(_mm256_loadu_pd(a + i),
                                                           _mm256_loadu_pd(b + i))));
        },
        [&](size_t i) {
            double r = a[i] * b[i];
            o[i] = std::isfinite(r) ? r : kNaN;
        });
}

AVX2_FN void div_f64(const double* a, const double* b, double* o, size_t n) {
    vec_loop_f64(
        n,
        [&](size_t i) AVX2_FN {
            __m256d vb = _mm256_loadu_pd(b + i);
            __m256d r = guard_pd(_mm256_div_pd(_mm256_loadu_pd(a + i), vb));
            __m256d zero = _mm256_cmp_pd(vb, _mm256_setzero_pd(), _CMP_EQ_OQ);
            _mm256_storeu_pd(o + i, _mm256_blendv_pd(r, _mm256_set1_pd(kNaN), zero));
        },
        [&](size_t i) { o[i] = b[i] == 0.0 ? kNaN : (std::isfinite(a[i] / b[i]) ? a[i] / b[i] : kNaN); });
}

AVX2_FN void sqrt_f64(const double* a, double* o, size_t n) {
    vec_loop_f64(
        n,
        [&](size_t i) AVX2_FN {
            __m256d r = _mm256_sqrt_pd(_mm256_loadu_pd(a + i));
            __m256d unord = _mm256_cmp_pd(r, r, _CMP_UNORD_Q);
            _mm256_storeu_pd(o + i, _mm256_blendv_pd(r, _mm256_set1_pd(kNaN), unord));
        },
        [&](size_t i) {
            double r = a[i] < 0.0 ? kNaN : std::sqrt(a[i]);
            o[i] = std::isnan(r) ? kNaN : r;
        });
}

AVX2_FN inline __m256d feq_pd(__m256d va, __m256d vb) {
    __m256d exact = _mm256_cmp_pd(va, vb, _CMP_EQ_OQ);
    __m256d diff = abs_pd(_mm256_sub_pd(va, vb));
    __m256d scale = _mm256_max_pd(abs_pd(va), abs_pd(vb));
    __m256d tol = _mm256_mul_pd(scale, _mm256_set1_pd(kFloatEqTolerance));
    return _mm256_or_pd(exact, _mm256_cmp_pd(diff, tol, _CMP_LE_OQ));
}

AVX2_FN inline uint8_t feq_scalar(double a, double b) {
    if (std::isnan(a) || std::isnan(b)) return 0;
    if (a == b) return 1;
    double scale = std::fmax(std::fabs(a), std::fabs(b));
    return std::fabs(a - b) <= kFloatEqTolerance * scale ? 1 : 0;
}

AVX2_FN void eq_f64(const double* a, const double* b, uint8_t* o, size_t n) {
    vec_loop_f64(
        n,
        [&](size_t i) AVX2_FN {
            store_mask(o + i, feq_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
        },
        [&](size_t i) { o[i] = feq_scalar(a[i], b[i]); });
}

AVX2_FN void ne_f64(const double* a, const double* b, uint8_t* o, size_t n) {
    vec_loop_f64(
        n,
        [&](size_t i) AVX2_FN {
            __m256d va = _mm256_loadu_pd(a + i), vb = _mm256_loadu_pd(b + i);
            __m256d ord = _mm256_cmp_pd(va, vb, _CMP_ORD_Q);
            store_mask(o + i, _mm256_andnot_pd(feq_pd(va, vb), ord));
        },
        [&](size_t i) {
            o[i] = (!std::isnan(a[i]) && !std::isnan(b[i]) && !feq_scalar(a[i], b[i])) ? 1 : 0;
        });
}

#define CMP_F64(NAME, PRED, SCALAR)                                                        \
    AVX2_FN void NAME(const double* a, const double* b, uint8_t* o, size_t n) {            \
        vec_loop_f64(                                                                      \
            n,                                                                             \
            [&](size_t i) AVX2_FN {                                                        \
                store_mask(o + i, _mm256_cmp_pd(_mm256_loadu_pd(a + i),                    \
                                                _mm256_loadu_pd(b + i), PRED));            \
            },                                                                             \
            [&](size_t i) { o[i] = (SCALAR) ? 1 : 0; });                                   \
    }

CMP_F64(lt_f64, _CMP_LT_OQ, a[i] < b[i])
CMP_F64(le_f64, _CMP_LE_OQ, a[i] <= b[i])
CMP_F64(gt_f64, _CMP_GT_OQ, a[i] > b[i])
CMP_F64(ge_f64, _CMP_GE_OQ, a[i] >= b[i])
#undef CMP_F64

AVX2_FN inline void store_mask_i(uint8_t* o, __m256i m) {
    int bits = _mm256_movemask_pd(_mm256_castsi256_pd(m));
    o[0] = bits & 1;
    o[1] = (bits >> 1) & 1;
    o[2] = (bits >> 2) & 1;
    o[3] = (bits >> 3) & 1;
}

AVX2_FN void add_i64(const int64_t* a, const int64_t* b, int64_t* o, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(o + i), _mm256_add_epi64(va, vb));
    }
    for (; i < n; ++i)
        o[i] = static_cast<int64_t>(static_cast<uint64_t>(a[i]) + static_cast<uint64_t>(b[i]));
}

AVX2_FN void sub_i64(const int64_t* a, const int64_t* b, int64_t* o, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(o + i), _mm256_sub_epi64(va, vb));
    }
    for (; i < n; ++i)
        o[i] = static_cast<int64_t>(static_cast<uint64_t>(a[i]) - static_cast<uint64_t>(b[i]));
}

// 64-bit lane product from 32-bit partial products
AVX2_FN void mul_i64(const int64_t* a, const int64_t* b, int64_t* o, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        __m256i lo = _mm256_mul_epu32(va, vb);
        __m256i cross1 = _mm256_mul_epu32(_mm256_srli_epi64(va, 32), vb);
        __m256i cross2 = _mm256_mul_epu32(va, _mm256_srli_epi64(vb, 32));
        __m256i cross = _mm256_slli_epi64(_mm256_add_epi64(cross1, cross2), 32);
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(o + i), _mm256_add_epi64(lo, cross));
    }
    for (; i < n; ++i)
        o[i] = static_cast<int64_t>(static_cast<uint64_t>(a[i]) * static_cast<uint64_t>(b[i]));
}

#define CMP_I64(NAME, MASK_EXPR, SCALAR)                                                    \
    AVX2_FN void NAME(const int64_t* a, const int64_t* b, uint8_t* o, size_t n) {           \
        size_t i = 0;                                                                       \
        for (; i + 4 <= n; i += 4) {                                                        \
            __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));       \
            __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));       \
            store_mask_i(o + i, MASK_EXPR);                                                 \
        }                                                                                   \
        for (; i < n; ++i) o[i] = (SCALAR) ? 1 : 0;                                         \
    }

CMP_I64(eq_i64, _mm256_cmpeq_epi64(va, vb), a[i] == b[i])
CMP_I64(ne_i64,
        _mm256_xor_si256(_mm256_cmpeq_epi64(va, vb), _mm256_set1_epi64x(-1)),
        a[i] != b[i])
CMP_I64(gt_i64, _mm256_cmpgt_epi64(va, vb), a[i] > b[i])
CMP_I64(lt_i64, _mm256_cmpgt_epi64(vb, va), a[i] < b[i])
CMP_I64(ge_i64,
        _mm256_xor_si256(_mm256_cmpgt_epi64(vb, va), _mm256_set1_epi64x(-1)),
        a[i] >= b[i])
CMP_I64(le_i64,
        _mm256_xor_si256(_mm256_cmpgt_epi64(va, vb), _mm256_set1_epi64x(-1)),
        a[i] <= b[i])
#undef CMP_I64

AVX2_FN void and_u8(const uint8_t* a, const uint8_t* b, uint8_t* o, size_t n) {
    size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(o + i), _mm256_and_si256(va, vb));
    }
    for (; i < n; ++i) o[i] = a[i] & b[i];
}

AVX2_FN void or_u8(const uint8_t* a, const uint8_t* b, uint8_t* o, size_t n) {
    size_t i = 0;
    for (; i + 32 <= n; i += 32) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(o + i), _mm256_or_si256(va, vb));
    }
    for (; i < n; ++i) o[i] = a[i] | b[i];
}

AVX2_FN void not_u8(const uint8_t* a, uint8_t* o, size_t n) {
    size_t i = 0;
    __m256i one = _mm256_set1_epi8(1);
    for (; i + 32 <= n; i += 32) {
        __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(o + i), _mm256_xor_si256(va, one));
    }
    for (; i < n; ++i) o[i] = a[i] ^ 1u;
}

} // namespace

bool avx2_available() {
    static const bool ok = __builtin_cpu_supports("avx2");
    return ok;
}

const Ops& avx2_ops() {
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

#else // non-x86: scalar only

namespace privalog::kernels {

bool avx2_available() { return false; }
const Ops& avx2_ops() { return scalar_ops(); }

} // namespace privalog::kernels

#endif
