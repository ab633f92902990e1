#include "gnnsim/lut.hpp"

#include <algorithm>
#include <cmath>

namespace gnnsim {

const char* lut_kind_name(LutKind kind) {
    switch (kind) {
        case LutKind::tanh: return "tanh";
        case LutKind::sigmoid: return "sigmoid";
        case LutKind::relu: return "relu";
        case LutKind::exp: return "exp";
        case LutKind::tanh_deriv: return "tanh_deriv";
        case LutKind::sigmoid_deriv: return "sigmoid_deriv";
    }
    return "?";
}

LutKind lut_kind_from_name(const std::string& name) {
    for (auto k : {LutKind::tanh, LutKind::sigmoid, LutKind::relu, LutKind::exp,
                   LutKind::tanh_deriv, LutKind::sigmoid_deriv}) {
        if (name == lut_kind_name(k)) return k;
    }
    throw std::invalid_argument("unknown LUT kind: " + name);
}

double lut_reference(LutKind kind, double x) {
    switch (kind) {
        case LutKind::tanh: return std::tanh(x);
        case LutKind::sigmoid: return 1.0 / (1.0 + std::exp(-x));
        case LutKind::relu: return x > 0.0 ? x : 0.0;
        case LutKind::exp: return std::exp(x);
        case LutKind::tanh_deriv: {
            const double t = std::tanh(x);
            return 1.0 - t * t;
        }
        case LutKind::sigmoid_deriv: {
            const double s = 1.0 / (1.0 + std::exp(-x));
            return s * (1.0 - s);
        }
    }
    throw std::invalid_argument("unknown LUT kind");
}

std::int64_t LutTable::x_min_raw() const {
    return std::llround(x_min * format_scale(fmt));
}

std::int64_t LutTable::span_raw() const {
    return std::llround((x_max - x_min) * format_scale(fmt));
}

LutTable build_lut(LutKind kind, const QFormat& fmt, double x_min, double x_max, int n) {
    validate_format(fmt);
    if (!(x_min < x_max)) throw std::invalid_argument("LUT range requires x_min < x_max");
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || std::abs(x_min) > 1e6 || std::abs(x_max) > 1e6)
        throw std::invalid_argument("LUT range out of bounds");
    if (n < 16 || (n & (n - 1)) != 0 || n > (1 << 22))
        throw std::invalid_argument("LUT size must be a power of two in [16, 2^22]");
    if (std::llround((x_max - x_min) * format_scale(fmt)) < 1)
        throw std::invalid_argument("LUT range is below one quantization step");

    LutTable table{kind, fmt, x_min, x_max, {}};
    table.entries.reserve(std::size_t(n));
    const double step = (x_max - x_min) / double(n);
    for (int i = 0; i < n; ++i) {
        const double x = x_min + double(i) * step;
        table.entries.push_back(quantize(lut_reference(kind, x), fmt).raw);
    }
    return table;
}

namespace {

// Integer division rounding to nearest, ties away from zero. den > 0.
// 128-bit so that wide ranges at high frac_bits cannot overflow.
std::int64_t div_round_nearest(__int128 num, __int128 den) {
    if (num >= 0) return std::int64_t((2 * num + den) / (2 * den));
    return std::int64_t(-((2 * -num + den) / (2 * den)));
}

int clamp_index(std::int64_t idx, int n) {
    if (idx < 0) return 0;
    if (idx >= n) return n - 1;
    return int(idx);
}

}  // namespace

FxpValue lut_eval(const LutTable& table, const FxpValue& x) {
    require_same_format(table.fmt, x.fmt);
    const __int128 num = __int128(std::int64_t(x.raw) - table.x_min_raw()) * table.size();
    const std::int64_t idx = div_round_nearest(num, table.span_raw());
    return table.entry(clamp_index(idx, table.size()));
}

double lut_error_sweep(const LutTable& table, int samples) {
    if (samples < table.size()) throw std::invalid_argument("sweep must use at least n samples");
    const double lo = std::max(table.x_min, real_min(table.fmt));
    const double hi = std::min(table.x_max, real_max(table.fmt));
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double t = lo + (hi - lo) * double(i) / double(samples - 1);
        const FxpValue x = quantize(t, table.fmt);
        const double err = std::abs(to_real(lut_eval(table, x)) - lut_reference(table.kind, to_real(x)));
        worst = std::max(worst, err);
    }
    return worst;
}

std::vector<FxpValue> softmax_hw(const std::vector<FxpValue>& z, const LutTable& exp_table,
                                 std::int64_t limit) {
    if (z.empty()) throw std::invalid_argument("softmax input is empty");
    if (exp_table.kind != LutKind::exp) throw std::invalid_argument("softmax requires an exp table");
    if (limit < 1) throw std::invalid_argument("softmax sum limit must be positive");
    const QFormat fmt = exp_table.fmt;
    for (const auto& v : z) require_same_format(v.fmt, fmt);

    std::int32_t max_raw_z = z[0].raw;
    for (const auto& v : z) max_raw_z = std::max(max_raw_z, v.raw);

    // Max-subtraction keeps every LUT input non-positive. The deficit
    // max(z) - z_j is formed at full width (the subtractor feeding the
    // index unit is wider than the operand format) and converted to a
    // table address by a truncating divide, so any gap larger than one
    // table step lands on a strictly lower entry.
    const int n = exp_table.size();
    const std::int64_t span = exp_table.span_raw();
    std::vector<std::int64_t> exps(z.size());
    std::int64_t sum = 0;
    for (std::size_t j = 0; j < z.size(); ++j) {
        const std::int64_t deficit = std::int64_t(max_raw_z) - std::int64_t(z[j].raw);
        const std::int64_t steps_below = deficit * n / span;
        const int idx = steps_below >= n ? 0 : n - 1 - int(steps_below);
        exps[j] = exp_table.entries[std::size_t(idx)];
        sum += exps[j];
    }
    if (sum <= 0) throw std::invalid_argument("softmax sum is zero");

    const std::int64_t sum_cap = limit << fmt.frac_bits;
    const std::int64_t denom = std::min(sum, sum_cap);

    std::vector<FxpValue> out(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) {
        const std::int64_t q = (exps[j] << fmt.frac_bits) / denom;
        out[j] = fxp_from_raw(q, fmt);
    }
    return out;
}

}  // namespace gnnsim
