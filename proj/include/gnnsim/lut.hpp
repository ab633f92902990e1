#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gnnsim/fxp.hpp"

// Lookup-table activation functions. A table holds quantized samples of a
// reference function over [x_min, x_max); evaluation is a single indexed
// read, no interpolation, exactly like a one-port BRAM lookup.

namespace gnnsim {

enum class LutKind : std::uint8_t {
    tanh = 0,
    sigmoid = 1,
    relu = 2,
    exp = 3,
    tanh_deriv = 4,
    sigmoid_deriv = 5,
};

const char* lut_kind_name(LutKind kind);
LutKind lut_kind_from_name(const std::string& name);

struct LutTable {
    LutKind kind = LutKind::tanh;
    QFormat fmt;
    double x_min = 0.0;
    double x_max = 0.0;
    std::vector<std::int32_t> entries;

    int size() const { return int(entries.size()); }
    double step() const { return (x_max - x_min) / double(entries.size()); }
    // Input range expressed in raw units of fmt, for the integer index path.
    std::int64_t x_min_raw() const;
    std::int64_t span_raw() const;
    FxpValue entry(int i) const { return FxpValue{entries[std::size_t(i)], fmt}; }
};

// Samples f(x_min + i*step) for i in [0, n), evaluated in double precision
// and quantized to fmt. n must be a power of two >= 16.
LutTable build_lut(LutKind kind, const QFormat& fmt, double x_min, double x_max, int n);

// Reference function in double precision (also the test oracle).
double lut_reference(LutKind kind, double x);

// Nearest-index read: clamp(round((real(x) - x_min)/step), 0, n-1).
// The index is derived in integer arithmetic from x.raw. Out-of-range
// inputs saturate to the boundary entries.
FxpValue lut_eval(const LutTable& table, const FxpValue& x);

// Max |lut_eval(x) - f(x)| over a dense uniform sweep of representable
// inputs, restricted to the table range intersected with the format range.
double lut_error_sweep(const LutTable& table, int samples);

// Hardware softmax: exp via LUT after max-subtraction, integer sum with a
// configurable clamp, outputs by truncating integer division against the
// (possibly clamped) sum.
std::vector<FxpValue> softmax_hw(const std::vector<FxpValue>& z, const LutTable& exp_table,
                                 std::int64_t limit = 1024);

}  // namespace gnnsim
