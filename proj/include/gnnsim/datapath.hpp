#pragma once

#include <cstdint>
#include <vector>

#include "gnnsim/fxp.hpp"

// The three compute units of the accelerator datapath: the mult-add bank
// (matrix-vector engine), the mult module (outer products), and the accu
// module (weight updates). Each call reports the cycles it would occupy
// on a bank of B parallel units.
//
// Accumulation order is fixed ascending over the column index; saturating
// arithmetic is non-associative, so a fixed order is required for results
// to be bit-identical for every bank width.

namespace gnnsim {

struct MacBankConfig {
    int bank_width = 16;
    QFormat fmt;
};

inline void validate_bank(const MacBankConfig& cfg) {
    if (cfg.bank_width < 1) throw std::invalid_argument("bank_width must be >= 1");
    validate_format(cfg.fmt);
}

struct SignalVector {
    QFormat fmt;
    std::vector<std::int32_t> raw;

    int dim() const { return int(raw.size()); }
    FxpValue at(int i) const { return FxpValue{raw[std::size_t(i)], fmt}; }
    void set(int i, const FxpValue& v) {
        require_same_format(fmt, v.fmt);
        raw[std::size_t(i)] = v.raw;
    }

    static SignalVector zeros(int dim, const QFormat& fmt) {
        return SignalVector{fmt, std::vector<std::int32_t>(std::size_t(dim), 0)};
    }
    bool operator==(const SignalVector&) const = default;
};

SignalVector signal_from_reals(const std::vector<double>& xs, const QFormat& fmt);
std::vector<double> signal_to_reals(const SignalVector& v);

// Row-major H x T weight storage.
struct WeightMatrix {
    QFormat fmt;
    int rows = 0;
    int cols = 0;
    std::vector<std::int32_t> raw;

    FxpValue at(int r, int c) const { return FxpValue{raw[std::size_t(r) * std::size_t(cols) + std::size_t(c)], fmt}; }
    void set(int r, int c, const FxpValue& v) {
        require_same_format(fmt, v.fmt);
        raw[std::size_t(r) * std::size_t(cols) + std::size_t(c)] = v.raw;
    }
    WeightMatrix transposed() const;

    static WeightMatrix zeros(int rows, int cols, const QFormat& fmt) {
        return WeightMatrix{fmt, rows, cols, std::vector<std::int32_t>(std::size_t(rows) * std::size_t(cols), 0)};
    }
    bool operator==(const WeightMatrix&) const = default;
};

WeightMatrix matrix_from_reals(const std::vector<std::vector<double>>& rows, const QFormat& fmt);

struct MatVecResult {
    SignalVector y;
    std::uint64_t cycles = 0;
};

// y = W x on a bank of B MAC units; each unit owns one output row per pass,
// T accumulation cycles per pass: cycles = ceil(H/B) * T. The result does
// not depend on B.
MatVecResult mac_bank_matvec(const MacBankConfig& cfg, const WeightMatrix& w, const SignalVector& x);

struct OuterProductResult {
    WeightMatrix g;
    std::uint64_t cycles = 0;
};

// G[i][j] = delta[i] * s2[j]; cycles = ceil(|delta|*|s2| / B).
OuterProductResult outer_product(const MacBankConfig& cfg, const SignalVector& delta,
                                 const SignalVector& s2);

struct UpdateResult {
    WeightMatrix w;
    std::uint64_t cycles = 0;
};

// W' = W - gamma * G, each element saturating; cycles = ceil(H*T / B).
UpdateResult accumulate_update(const MacBankConfig& cfg, const WeightMatrix& w,
                               const WeightMatrix& g, const FxpValue& gamma);

constexpr std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) {
    return (a + b - 1) / b;
}

}  // namespace gnnsim
