#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "gnnsim/fxp.hpp"
#include "gnnsim/rng.hpp"

using namespace gnnsim;

namespace {

const QFormat kQ214{16, 14};

// Exact reference for a saturating dot product: multiply raws, sum at
// unbounded precision, one rounding shift, one saturation. Valid whenever
// no partial sum can leave the accumulator range, which the generators
// below guarantee by construction.
std::int32_t dot_oracle(const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b,
                        const QFormat& fmt) {
    __int128 sum = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        sum += __int128(a[i]) * __int128(b[i]);
    const __int128 half = __int128(1) << (fmt.frac_bits - 1);
    __int128 shifted = sum >= 0 ? (sum + half) >> fmt.frac_bits : -((-sum + half) >> fmt.frac_bits);
    if (shifted > raw_max(fmt)) shifted = raw_max(fmt);
    if (shifted < raw_min(fmt)) shifted = raw_min(fmt);
    return std::int32_t(shifted);
}

std::int32_t mac_pipeline(const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b,
                          const QFormat& fmt) {
    AccValue acc = acc_zero(fmt);
    for (std::size_t i = 0; i < a.size(); ++i)
        acc = fxp_mac(acc, FxpValue{a[i], fmt}, FxpValue{b[i], fmt});
    return acc_readout(acc).raw;
}

}  // namespace

TEST_CASE("format validation") {
    CHECK_NOTHROW(validate_format(QFormat{16, 14}));
    CHECK_NOTHROW(validate_format(QFormat{2, 0}));
    CHECK_NOTHROW(validate_format(QFormat{32, 31}));
    CHECK_THROWS_AS(validate_format(QFormat{1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(validate_format(QFormat{33, 14}), std::invalid_argument);
    CHECK_THROWS_AS(validate_format(QFormat{16, 16}), std::invalid_argument);
    CHECK_THROWS_AS(validate_format(QFormat{16, -1}), std::invalid_argument);
}

TEST_CASE("format range") {
    CHECK(raw_max(kQ214) == 32767);
    CHECK(raw_min(kQ214) == -32768);
    CHECK(real_max(kQ214) == doctest::Approx(2.0 - std::pow(2.0, -14)).epsilon(1e-12));
    CHECK(real_min(kQ214) == -2.0);
}

TEST_CASE("quantize basics") {
    CHECK(quantize(0.0, kQ214).raw == 0);
    CHECK(quantize(1.0, kQ214).raw == 16384);
    CHECK(quantize(3.0, kQ214).raw == 32767);
    CHECK(quantize(-3.0, kQ214).raw == -32768);
    CHECK(quantize(0.5, kQ214).raw == 8192);
    CHECK_THROWS_WITH_AS(quantize(std::nan(""), kQ214), "non-finite input", std::invalid_argument);
    CHECK_THROWS_AS(quantize(INFINITY, kQ214), std::invalid_argument);
}

TEST_CASE("quantize rounds to nearest, ties away from zero") {
    const double step = format_step(kQ214);
    CHECK(quantize(1.5 * step, kQ214).raw == 2);
    CHECK(quantize(-1.5 * step, kQ214).raw == -2);
    CHECK(quantize(0.49 * step, kQ214).raw == 0);
    CHECK(quantize(0.51 * step, kQ214).raw == 1);
}

TEST_CASE("round trip: every representable value survives quantize") {
    for (std::int32_t raw = -32768; raw <= 32767; ++raw) {
        const FxpValue v{raw, kQ214};
        CHECK(quantize(to_real(v), kQ214).raw == raw);
    }
}

TEST_CASE("quantize is monotone") {
    SplitMix64 rng(11);
    for (int i = 0; i < 20000; ++i) {
        const double x = rng.next_double(-3.0, 3.0);
        const double y = rng.next_double(-3.0, 3.0);
        const auto [lo, hi] = std::minmax(x, y);
        CHECK(quantize(lo, kQ214).raw <= quantize(hi, kQ214).raw);
    }
}

TEST_CASE("fxp_mul") {
    const FxpValue one = quantize(1.0, kQ214);
    const FxpValue half = quantize(0.5, kQ214);
    CHECK(fxp_mul(one, one).raw == 16384);
    CHECK(fxp_mul(half, half).raw == 4096);

    const FxpValue neg_two = quantize(-2.0, kQ214);
    CHECK(fxp_mul(neg_two, neg_two).raw == 32767);  // true 4.0 saturates

    const FxpValue wrong_fmt{0, QFormat{16, 12}};
    CHECK_THROWS_AS(fxp_mul(one, wrong_fmt), std::invalid_argument);
}

TEST_CASE("fxp_mul rounding point") {
    // 1 * 1 raw product = 1, shifted by 14 with ties away: rounds to 0.
    CHECK(fxp_mul(FxpValue{1, kQ214}, FxpValue{1, kQ214}).raw == 0);
    // half * one ulp = exactly half an output ulp: ties away rounds to 1.
    CHECK(fxp_mul(FxpValue{8192, kQ214}, FxpValue{1, kQ214}).raw == 1);
    CHECK(fxp_mul(FxpValue{-8192, kQ214}, FxpValue{1, kQ214}).raw == -1);
}

TEST_CASE("fxp add/sub/neg saturate") {
    const FxpValue big = quantize(1.9, kQ214);
    CHECK(fxp_add_sat(big, big).raw == 32767);
    CHECK(fxp_sub_sat(fxp_neg(big), big).raw == -32768);
    CHECK(fxp_neg(FxpValue{-32768, kQ214}).raw == 32767);
    CHECK(fxp_add_sat(quantize(0.5, kQ214), quantize(0.25, kQ214)).raw == 12288);
}

TEST_CASE("mac basics") {
    const FxpValue one = quantize(1.0, kQ214);
    const FxpValue zero = quantize(0.0, kQ214);

    AccValue acc = acc_zero(kQ214);
    acc = fxp_mac(acc, zero, one);
    CHECK(acc.raw == 0);

    acc = acc_zero(kQ214);
    for (int i = 0; i < 3; ++i) acc = fxp_mac(acc, one, one);
    CHECK(acc_readout(acc).raw == quantize(3.0, kQ214).raw);  // saturates: 3.0 > range
    CHECK(acc_readout(acc).raw == 32767);

    // In a wider format the same three MACs read out exactly 3.0.
    const QFormat q4_12{16, 12};
    const FxpValue one12 = quantize(1.0, q4_12);
    AccValue acc12 = acc_zero(q4_12);
    for (int i = 0; i < 3; ++i) acc12 = fxp_mac(acc12, one12, one12);
    CHECK(acc_readout(acc12).raw == quantize(3.0, q4_12).raw);
}

TEST_CASE("acc readout") {
    AccValue acc = acc_zero(kQ214);
    CHECK(acc_readout(acc).raw == 0);

    acc.raw = std::int64_t{1} << 28;  // exact 1.0 before the shift
    CHECK(acc_readout(acc).raw == 16384);

    acc.raw = std::int64_t{5} << 28;  // 5.0, out of range
    CHECK(acc_readout(acc).raw == 32767);

    acc.raw = -(std::int64_t{5} << 28);
    CHECK(acc_readout(acc).raw == -32768);
}

TEST_CASE("accumulator saturates at its own boundary") {
    const FxpValue big{32767, kQ214};
    AccValue acc = acc_zero(kQ214);
    // 32767^2 ~ 2^30; three of them exceed the 32-bit accumulator range.
    for (int i = 0; i < 3; ++i) acc = fxp_mac(acc, big, big);
    CHECK(acc.raw == acc_raw_max(acc));
    CHECK(acc_readout(acc).raw == 32767);

    const FxpValue low{-32768, kQ214};
    acc = acc_zero(kQ214);
    for (int i = 0; i < 3; ++i) acc = fxp_mac(acc, big, low);
    CHECK(acc.raw == acc_raw_min(acc));
    CHECK(acc_readout(acc).raw == -32768);
}

TEST_CASE("dot product equals the exact big-integer oracle") {
    SplitMix64 rng(101);
    for (int trial = 0; trial < 10000; ++trial) {
        const int len = 1 + int(rng.next_below(64));
        std::vector<std::int32_t> a(static_cast<std::size_t>(len)), b(static_cast<std::size_t>(len));
        for (int i = 0; i < len; ++i) {
            // |a*b| <= (0.3 * 2^14)^2 < 2^24.3, so 64 terms stay well
            // inside the 32-bit accumulator and the oracle applies.
            a[std::size_t(i)] = quantize(rng.next_double(-0.3, 0.3), kQ214).raw;
            b[std::size_t(i)] = quantize(rng.next_double(-0.3, 0.3), kQ214).raw;
        }
        REQUIRE(mac_pipeline(a, b, kQ214) == dot_oracle(a, b, kQ214));
    }
}

TEST_CASE("length-8 dot product oracle, full operand range") {
    SplitMix64 rng(202);
    int checked = 0;
    while (checked < 10000) {
        std::vector<std::int32_t> a(8), b(8);
        __int128 abs_sum = 0;
        for (int i = 0; i < 8; ++i) {
            a[std::size_t(i)] = quantize(rng.next_double(-2.0, 2.0), kQ214).raw;
            b[std::size_t(i)] = quantize(rng.next_double(-2.0, 2.0), kQ214).raw;
            abs_sum += __int128(std::abs(std::int64_t(a[std::size_t(i)]) * b[std::size_t(i)]));
        }
        // Keep only draws where no partial sum can saturate.
        if (abs_sum > ((std::int64_t{1} << 31) - 1)) continue;
        ++checked;
        REQUIRE(mac_pipeline(a, b, kQ214) == dot_oracle(a, b, kQ214));
    }
}

TEST_CASE("operations never leave the format range") {
    SplitMix64 rng(303);
    for (int trial = 0; trial < 20000; ++trial) {
        const FxpValue a{std::int32_t(rng.next_below(65536)) - 32768, kQ214};
        const FxpValue b{std::int32_t(rng.next_below(65536)) - 32768, kQ214};
        for (const FxpValue& v : {fxp_mul(a, b), fxp_add_sat(a, b), fxp_sub_sat(a, b), fxp_neg(a)}) {
            CHECK(v.raw <= raw_max(kQ214));
            CHECK(v.raw >= raw_min(kQ214));
        }
    }
}

TEST_CASE("determinism: identical inputs give identical outputs") {
    SplitMix64 gen_a(7), gen_b(7);
    for (int i = 0; i < 1000; ++i) {
        const double x = gen_a.next_double(-4.0, 4.0);
        const double y = gen_b.next_double(-4.0, 4.0);
        REQUIRE(x == y);
        REQUIRE(quantize(x, kQ214).raw == quantize(y, kQ214).raw);
    }
}

TEST_CASE("acc_bits validation") {
    CHECK_THROWS_AS(acc_zero(kQ214, 8), std::invalid_argument);
    CHECK_THROWS_AS(acc_zero(kQ214, 63), std::invalid_argument);
    CHECK_NOTHROW(acc_zero(kQ214, 32));
    CHECK_NOTHROW(acc_zero(kQ214, 48));
}
