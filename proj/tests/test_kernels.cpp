#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <vector>

#include "privalog/crc32.hpp"
#include "privalog/kernels.hpp"

using namespace privalog;
namespace k = privalog::kernels;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kQNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> random_doubles(std::mt19937_64& rng, size_t n) {
    std::vector<double> v(n);
    std::uniform_real_distribution<double> uni(-1e6, 1e6);
    for (size_t i = 0; i < n; ++i) {
        switch (rng() % 10) {
            case 0: v[i] = kQNaN; break;
            case 1: v[i] = (rng() % 2) ? kInf : -kInf; break;
            case 2: v[i] = 0.0; break;
            case 3: v[i] = -0.0; break;
            case 4: v[i] = 1e308 * ((rng() % 2) ? 1 : -1); break;
            default: v[i] = uni(rng); break;
        }
    }
    return v;
}

std::vector<int64_t> random_ints(std::mt19937_64& rng, size_t n) {
    std::vector<int64_t> v(n);
    for (size_t i = 0; i < n; ++i) {
        switch (rng() % 8) {
            case 0: v[i] = INT64_MAX; break;
            case 1: v[i] = INT64_MIN; break;
            case 2: v[i] = 0; break;
            default: v[i] = static_cast<int64_t>(rng()) % 1000000; break;
        }
    }
    return v;
}

bool bits_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

} // namespace

TEST_CASE("scalar and AVX2 kernels are bit-identical") {
    if (!k::avx2_available()) {
        MESSAGE("AVX2 not available; skipping equivalence checks");
        return;
    }
    const k::Ops& s = k::scalar_ops();
    const k::Ops& v = k::avx2_ops();
    std::mt19937_64 rng(123);

    for (size_t n : {0ul, 1ul, 3ul, 4ul, 7ul, 64ul, 1001ul}) {
        auto a = random_doubles(rng, n);
        auto b = random_doubles(rng, n);
        std::vector<double> r1(n), r2(n);
        std::vector<uint8_t> m1(n), m2(n);

        using FOp = void (*)(const double*, const double*, double*, size_t);
        for (auto [so, vo] : {std::pair<FOp, FOp>{s.add_f64, v.add_f64},
                              {s.sub_f64, v.sub_f64},
                              {s.mul_f64, v.mul_f64},
                              {s.div_f64, v.div_f64}}) {
            so(a.data(), b.data(), r1.data(), n);
            vo(a.data(), b.data(), r2.data(), n);
            CHECK(bits_equal(r1, r2));
        }
        s.sqrt_f64(a.data(), r1.data(), n);
        v.sqrt_f64(a.data(), r2.data(), n);
        CHECK(bits_equal(r1, r2));

        using COp = void (*)(const double*, const double*, uint8_t*, size_t);
        for (auto [so, vo] : {std::pair<COp, COp>{s.eq_f64, v.eq_f64},
                              {s.ne_f64, v.ne_f64},
                              {s.lt_f64, v.lt_f64},
                              {s.le_f64, v.le_f64},
                              {s.gt_f64, v.gt_f64},
                              {s.ge_f64, v.ge_f64}}) {
            so(a.data(), b.data(), m1.data(), n);
            vo(a.data(), b.data(), m2.data(), n);
            CHECK(m1 == m2);
        }

        auto ia = random_ints(rng, n);
        auto ib = random_ints(rng, n);
        std::vector<int64_t> ir1(n), ir2(n);
        using IOp = void (*)(const int64_t*, const int64_t*, int64_t*, size_t);
        for (auto [so, vo] : {std::pair<IOp, IOp>{s.add_i64, v.add_i64},
                              {s.sub_i64, v.sub_i64},
                              {s.mul_i64, v.mul_i64}}) {
            so(ia.data(), ib.data(), ir1.data(), n);
            vo(ia.data(), ib.data(), ir2.data(), n);
            CHECK(ir1 == ir2);
        }
        using ICp = void (*)(const int64_t*, const int64_t*, uint8_t*, size_t);
        for (auto [so, vo] : {std::pair<ICp, ICp>{s.eq_i64, v.eq_i64},
                              {s.ne_i64, v.ne_i64},
                              {s.lt_i64, v.lt_i64},
                              {s.le_i64, v.le_i64},
                              {s.gt_i64, v.gt_i64},
                              {s.ge_i64, v.ge_i64}}) {
            so(ia.data(), ib.data(), m1.data(), n);
            vo(ia.data(), ib.data(), m2.data(), n);
            CHECK(m1 == m2);
        }

        std::vector<uint8_t> ba(n), bb(n), bo1(n), bo2(n);
        for (size_t i = 0; i < n; ++i) {
            ba[i] = rng() % 2;
            bb[i] = rng() % 2;
        }
        s.and_u8(ba.data(), bb.data(), bo1.data(), n);
        v.and_u8(ba.data(), bb.data(), bo2.data(), n);
        CHECK(bo1 == bo2);
        s.or_u8(ba.data(), bb.data(), bo1.data(), n);
        v.or_u8(ba.data(), bb.data(), bo2.data(), n);
        CHECK(bo1 == bo2);
        s.not_u8(ba.data(), bo1.data(), n);
        v.not_u8(ba.data(), bo2.data(), n);
        CHECK(bo1 == bo2);
    }
}

TEST_CASE("garbage semantics: div by zero, overflow, NaN comparisons") {
    const k::Ops& ops = k::active_ops();
    double a[] = {1.0, -5.0, 0.0, 1e308, kQNaN};
    double b[] = {0.0, 0.0, 0.0, 1e308, 2.0};
    double r[5];
    ops.div_f64(a, b, r, 5);
    CHECK(std::isnan(r[0]));
    CHECK(std::isnan(r[1]));
    CHECK(std::isnan(r[2]));
    CHECK(std::isnan(r[4]));

    ops.mul_f64(a + 3, b + 3, r, 1); // 1e308 * 1e308 overflows -> NaN
    CHECK(std::isnan(r[0]));

    double nan_side[] = {kQNaN, kQNaN};
    double ones[] = {1.0, kQNaN};
    uint8_t m[2];
    ops.eq_f64(nan_side, ones, m, 2);
    CHECK(m[0] == 0);
    CHECK(m[1] == 0);
    ops.ne_f64(nan_side, ones, m, 2); // comparisons with garbage are false, != too
    CHECK(m[0] == 0);
    CHECK(m[1] == 0);
    ops.lt_f64(nan_side, ones, m, 2);
    CHECK(m[0] == 0);
}

TEST_CASE("float equality uses relative tolerance") {
    const k::Ops& ops = k::active_ops();
    double a[] = {1.0, 1.0, 1e12};
    double b[] = {1.0 + 1e-12, 1.0 + 1e-6, 1e12 * (1.0 + 1e-12)};
    uint8_t m[3];
    ops.eq_f64(a, b, m, 3);
    CHECK(m[0] == 1); // within 1e-9 relative
    CHECK(m[1] == 0); // outside
    CHECK(m[2] == 1); // relative, not absolute
}

TEST_CASE("masked folds") {
    int64_t v[] = {5, -3, 7, 100};
    uint8_t b[] = {1, 0, 1, 0};
    CHECK(k::sum_masked_i64(v, b, 4) == 12);
    CHECK(k::min_masked_i64(v, b, 4) == 5);
    CHECK(k::max_masked_i64(v, b, 4) == 7);
    uint8_t none[] = {0, 0, 0, 0};
    CHECK(k::sum_masked_i64(v, none, 4) == 0);
    CHECK(k::min_masked_i64(v, none, 4) == INT64_MAX);

    double fv[] = {1.5, kQNaN, 0.5};
    uint8_t fb[] = {1, 1, 1};
    CHECK(k::min_masked_f64(fv, fb, 3) == 0.5); // NaN entries skipped
    CHECK(k::max_masked_f64(fv, fb, 3) == 1.5);
    CHECK(k::popcount_u8(fb, 3) == 3);
}

TEST_CASE("crc32 known vectors") {
    CHECK(crc32("") == 0x00000000u);
    CHECK(crc32("123456789") == 0xCBF43926u);

    // independent bitwise (table-free) implementation as the oracle
    auto bitwise = [](std::string_view s) {
        uint32_t c = 0xFFFFFFFFu;
        for (unsigned char byte : s) {
            c ^= byte;
            for (int i = 0; i < 8; ++i) c = (c >> 1) ^ (0xEDB88320u & (~(c & 1u) + 1u));
        }
        return c ^ 0xFFFFFFFFu;
    };
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        std::string s;
        size_t len = rng() % 24;
        for (size_t j = 0; j < len; ++j) s += static_cast<char>('a' + rng() % 26);
        CHECK(crc32(s) == bitwise(s));
    }
}

TEST_CASE("crc32 collision pair exists (hash, not identity)") {
    // birthday search over random short strings; documents that string
    // comparison via 32-bit hashes can collide
    std::mt19937_64 rng(20260808);
    std::map<uint32_t, std::string> seen;
    bool found = false;
    for (int i = 0; i < 300000 && !found; ++i) {
        std::string s;
        for (int j = 0; j < 8; ++j) s += static_cast<char>('a' + rng() % 26);
        auto [it, fresh] = seen.emplace(crc32(s), s);
        if (!fresh && it->second != s) {
            found = true;
            CHECK(crc32(it->second) == crc32(s));
            CHECK(it->second != s);
        }
    }
    CHECK(found);
}
