#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

// Signed saturating fixed-point arithmetic. Every datapath signal in the
// simulator is carried in this representation; results are bit-exact and
// independent of the host's floating-point environment.
//
// Rounding is round-to-nearest with ties away from zero, and it is applied
// at exactly two places: the multiplier output and the accumulator readout.
// Everything else is exact integer arithmetic. Overflow saturates, it never
// wraps.

namespace gnnsim {

struct QFormat {
    int total_bits = 16;
    int frac_bits = 14;

    bool operator==(const QFormat&) const = default;
};

inline void validate_format(const QFormat& fmt) {
    if (fmt.total_bits < 2 || fmt.total_bits > 32)
        throw std::invalid_argument("total_bits must be in [2, 32]");
    if (fmt.frac_bits < 0 || fmt.frac_bits > fmt.total_bits - 1)
        throw std::invalid_argument("frac_bits must be in [0, total_bits - 1]");
}

constexpr std::int64_t raw_max(const QFormat& fmt) {
    return (std::int64_t{1} << (fmt.total_bits - 1)) - 1;
}

constexpr std::int64_t raw_min(const QFormat& fmt) {
    return -(std::int64_t{1} << (fmt.total_bits - 1));
}

constexpr double format_scale(const QFormat& fmt) {
    return double(std::int64_t{1} << fmt.frac_bits);
}

// Smallest representable increment (one ulp).
constexpr double format_step(const QFormat& fmt) {
    return 1.0 / format_scale(fmt);
}

constexpr double real_max(const QFormat& fmt) {
    return double(raw_max(fmt)) / format_scale(fmt);
}

constexpr double real_min(const QFormat& fmt) {
    return double(raw_min(fmt)) / format_scale(fmt);
}

// One fixed-point sample: raw two's-complement integer in `fmt`.
// Real value is raw * 2^-frac_bits, exactly.
struct FxpValue {
    std::int32_t raw = 0;
    QFormat fmt;

    bool operator==(const FxpValue&) const = default;
};

inline double to_real(const FxpValue& v) {
    return double(v.raw) / format_scale(v.fmt);
}

inline std::int32_t saturate_raw(std::int64_t raw, const QFormat& fmt) {
    if (raw > raw_max(fmt)) return std::int32_t(raw_max(fmt));
    if (raw < raw_min(fmt)) return std::int32_t(raw_min(fmt));
    return std::int32_t(raw);
}

// Arithmetic right shift with round-to-nearest, ties away from zero.
// The symmetric form avoids the floor bias of `>>` on negative values.
constexpr std::int64_t round_shift(std::int64_t v, int shift) {
    if (shift == 0) return v;
    const std::int64_t half = std::int64_t{1} << (shift - 1);
    return v >= 0 ? (v + half) >> shift : -((-v + half) >> shift);
}

inline void require_same_format(const QFormat& a, const QFormat& b) {
    if (!(a == b)) throw std::invalid_argument("fixed-point format mismatch");
}

// Nearest representable value, ties away from zero, saturated to range.
inline FxpValue quantize(double x, const QFormat& fmt) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite input");
    const double scaled = x * format_scale(fmt);
    std::int64_t raw;
    if (scaled >= double(raw_max(fmt))) {
        raw = raw_max(fmt);
    } else if (scaled <= double(raw_min(fmt))) {
        raw = raw_min(fmt);
    } else {
        raw = std::llround(scaled);
    }
    return FxpValue{saturate_raw(raw, fmt), fmt};
}

inline FxpValue fxp_from_raw(std::int64_t raw, const QFormat& fmt) {
    return FxpValue{saturate_raw(raw, fmt), fmt};
}

// Multiplier: exact integer product, one rounding shift, saturate.
inline FxpValue fxp_mul(const FxpValue& a, const FxpValue& b) {
    require_same_format(a.fmt, b.fmt);
    const std::int64_t prod = std::int64_t(a.raw) * std::int64_t(b.raw);
    return fxp_from_raw(round_shift(prod, a.fmt.frac_bits), a.fmt);
}

inline FxpValue fxp_add_sat(const FxpValue& a, const FxpValue& b) {
    require_same_format(a.fmt, b.fmt);
    return fxp_from_raw(std::int64_t(a.raw) + std::int64_t(b.raw), a.fmt);
}

inline FxpValue fxp_sub_sat(const FxpValue& a, const FxpValue& b) {
    require_same_format(a.fmt, b.fmt);
    return fxp_from_raw(std::int64_t(a.raw) - std::int64_t(b.raw), a.fmt);
}

inline FxpValue fxp_neg(const FxpValue& a) {
    return fxp_from_raw(-std::int64_t(a.raw), a.fmt);
}

inline constexpr int kDefaultAccBits = 32;

// Accumulator register of one MAC unit. Products are summed unshifted at
// acc_bits width; the frac_bits shift happens once, at readout.
struct AccValue {
    std::int64_t raw = 0;
    QFormat fmt;
    int acc_bits = kDefaultAccBits;
};

inline void validate_acc_bits(int acc_bits, const QFormat& fmt) {
    if (acc_bits < fmt.total_bits || acc_bits > 62)
        throw std::invalid_argument("acc_bits must be in [total_bits, 62]");
}

constexpr std::int64_t acc_raw_max(const AccValue& acc) {
    return (std::int64_t{1} << (acc.acc_bits - 1)) - 1;
}

constexpr std::int64_t acc_raw_min(const AccValue& acc) {
    return -(std::int64_t{1} << (acc.acc_bits - 1));
}

inline std::int64_t saturate_acc_raw(std::int64_t raw, const AccValue& acc) {
    if (raw > acc_raw_max(acc)) return acc_raw_max(acc);
    if (raw < acc_raw_min(acc)) return acc_raw_min(acc);
    return raw;
}

inline AccValue acc_zero(const QFormat& fmt, int acc_bits = kDefaultAccBits) {
    validate_acc_bits(acc_bits, fmt);
    return AccValue{0, fmt, acc_bits};
}

// One MAC step: acc + a*b at accumulator width, saturated at the
// accumulator boundary. No intermediate shift.
inline AccValue fxp_mac(const AccValue& acc, const FxpValue& a, const FxpValue& b) {
    require_same_format(a.fmt, b.fmt);
    require_same_format(acc.fmt, a.fmt);
    const std::int64_t prod = std::int64_t(a.raw) * std::int64_t(b.raw);
    return AccValue{saturate_acc_raw(acc.raw + prod, acc), acc.fmt, acc.acc_bits};
}

// Shift the accumulator down to operand scale, round, saturate.
inline FxpValue acc_readout(const AccValue& acc) {
    return fxp_from_raw(round_shift(acc.raw, acc.fmt.frac_bits), acc.fmt);
}

}  // namespace gnnsim
