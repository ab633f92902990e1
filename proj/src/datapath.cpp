#include "gnnsim/datapath.hpp"

namespace gnnsim {

SignalVector signal_from_reals(const std::vector<double>& xs, const QFormat& fmt) {
    SignalVector v{fmt, {}};
    v.raw.reserve(xs.size());
    for (double x : xs) v.raw.push_back(quantize(x, fmt).raw);
    return v;
}

std::vector<double> signal_to_reals(const SignalVector& v) {
    std::vector<double> out;
    out.reserve(v.raw.size());
    for (std::int32_t r : v.raw) out.push_back(to_real(FxpValue{r, v.fmt}));
    return out;
}

WeightMatrix WeightMatrix::transposed() const {
    WeightMatrix t = WeightMatrix::zeros(cols, rows, fmt);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) t.set(c, r, at(r, c));
    return t;
}

WeightMatrix matrix_from_reals(const std::vector<std::vector<double>>& rows, const QFormat& fmt) {
    if (rows.empty() || rows[0].empty()) throw std::invalid_argument("matrix must be non-empty");
    WeightMatrix w = WeightMatrix::zeros(int(rows.size()), int(rows[0].size()), fmt);
    for (int r = 0; r < w.rows; ++r) {
        if (int(rows[std::size_t(r)].size()) != w.cols)
            throw std::invalid_argument("ragged matrix rows");
        for (int c = 0; c < w.cols; ++c)
            w.set(r, c, quantize(rows[std::size_t(r)][std::size_t(c)], fmt));
    }
    return w;
}

MatVecResult mac_bank_matvec(const MacBankConfig& cfg, const WeightMatrix& w, const SignalVector& x) {
    validate_bank(cfg);
    require_same_format(w.fmt, x.fmt);
    require_same_format(cfg.fmt, w.fmt);
    if (w.cols != x.dim()) throw std::invalid_argument("matvec dimension mismatch");

    SignalVector y = SignalVector::zeros(w.rows, w.fmt);
    for (int r = 0; r < w.rows; ++r) {
        AccValue acc = acc_zero(w.fmt);
        for (int c = 0; c < w.cols; ++c) acc = fxp_mac(acc, w.at(r, c), x.at(c));
        y.set(r, acc_readout(acc));
    }
    const std::uint64_t cycles =
        ceil_div(std::uint64_t(w.rows), std::uint64_t(cfg.bank_width)) * std::uint64_t(w.cols);
    return MatVecResult{std::move(y), cycles};
}

OuterProductResult outer_product(const MacBankConfig& cfg, const SignalVector& delta,
                                 const SignalVector& s2) {
    validate_bank(cfg);
    require_same_format(delta.fmt, s2.fmt);
    if (delta.dim() == 0 || s2.dim() == 0) throw std::invalid_argument("outer product of empty vector");

    WeightMatrix g = WeightMatrix::zeros(delta.dim(), s2.dim(), delta.fmt);
    for (int r = 0; r < delta.dim(); ++r)
        for (int c = 0; c < s2.dim(); ++c) g.set(r, c, fxp_mul(delta.at(r), s2.at(c)));
    const std::uint64_t cycles = ceil_div(std::uint64_t(delta.dim()) * std::uint64_t(s2.dim()),
                                          std::uint64_t(cfg.bank_width));
    return OuterProductResult{std::move(g), cycles};
}

UpdateResult accumulate_update(const MacBankConfig& cfg, const WeightMatrix& w,
                               const WeightMatrix& g, const FxpValue& gamma) {
    validate_bank(cfg);
    require_same_format(w.fmt, g.fmt);
    require_same_format(w.fmt, gamma.fmt);
    if (w.rows != g.rows || w.cols != g.cols) throw std::invalid_argument("update shape mismatch");

    const FxpValue step = fxp_neg(gamma);
    WeightMatrix out = w;
    for (int r = 0; r < w.rows; ++r)
        for (int c = 0; c < w.cols; ++c)
            out.set(r, c, fxp_add_sat(w.at(r, c), fxp_mul(step, g.at(r, c))));
    const std::uint64_t cycles =
        ceil_div(std::uint64_t(w.rows) * std::uint64_t(w.cols), std::uint64_t(cfg.bank_width));
    return UpdateResult{std::move(out), cycles};
}

}  // namespace gnnsim
