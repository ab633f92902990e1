#include "gnnsim/network.hpp"

#include <algorithm>
#include <cmath>

#include "gnnsim/dataset.hpp"
#include "gnnsim/rng.hpp"

namespace gnnsim {

std::vector<int> NetworkConfig::dims() const {
    std::vector<int> d;
    d.reserve(hidden_dims.size() + 2);
    d.push_back(input_dim);
    d.insert(d.end(), hidden_dims.begin(), hidden_dims.end());
    d.push_back(output_dim);
    return d;
}

LutKind derivative_kind(LutKind activation) {
    switch (activation) {
        case LutKind::tanh: return LutKind::tanh_deriv;
        case LutKind::sigmoid: return LutKind::sigmoid_deriv;
        default:
            throw std::invalid_argument(std::string("no derivative table for activation '") +
                                        lut_kind_name(activation) + "'");
    }
}

void validate_config(const NetworkConfig& cfg) {
    validate_format(cfg.fmt);
    if (cfg.input_dim < 1 || cfg.output_dim < 1)
        throw std::invalid_argument("input_dim and output_dim must be >= 1");
    if (cfg.hidden_dims.empty()) throw std::invalid_argument("at least one hidden layer is required");
    for (int d : cfg.hidden_dims)
        if (d < 1) throw std::invalid_argument("hidden dimensions must be >= 1");
    if (cfg.activations.size() != cfg.hidden_dims.size())
        throw std::invalid_argument("one activation kind per hidden layer is required");
    for (LutKind k : cfg.activations) derivative_kind(k);  // rejects kinds without a derivative
    if (cfg.bank_width < 1) throw std::invalid_argument("bank_width must be >= 1");
    if (cfg.softmax_limit < 1) throw std::invalid_argument("softmax_limit must be >= 1");
    if (cfg.lut_n < 16 || (cfg.lut_n & (cfg.lut_n - 1)) != 0)
        throw std::invalid_argument("lut_n must be a power of two >= 16");
    require_same_format(cfg.gamma.fmt, cfg.fmt);
    // Zero is tolerated here (a measuring-only pass); the config-file
    // loader rejects non-positive learning rates up front.
    if (cfg.gamma.raw < 0) throw std::invalid_argument("gamma must not be negative");
}

std::vector<std::vector<std::vector<double>>> init_weights_real(const NetworkConfig& cfg) {
    validate_config(cfg);
    SplitMix64 rng(cfg.seed);
    const std::vector<int> dims = cfg.dims();
    std::vector<std::vector<std::vector<double>>> layers;
    layers.reserve(std::size_t(cfg.layer_count()));
    for (int l = 0; l < cfg.layer_count(); ++l) {
        const int fan_in = dims[std::size_t(l)];
        const int fan_out = dims[std::size_t(l) + 1];
        const double r = std::min(std::sqrt(6.0 / double(fan_in + fan_out)), real_max(cfg.fmt));
        std::vector<std::vector<double>> m(std::size_t(fan_out),
                                           std::vector<double>(std::size_t(fan_in), 0.0));
        for (int i = 0; i < fan_out; ++i)
            for (int j = 0; j < fan_in; ++j) m[std::size_t(i)][std::size_t(j)] = rng.next_double(-r, r);
        layers.push_back(std::move(m));
    }
    return layers;
}

namespace {

std::vector<LutTable> build_act_tables(const NetworkConfig& cfg, bool derivative) {
    std::vector<LutTable> tables;
    tables.reserve(cfg.activations.size());
    for (LutKind k : cfg.activations) {
        const LutKind kind = derivative ? derivative_kind(k) : k;
        tables.push_back(build_lut(kind, cfg.fmt, kActLutMin, kActLutMax, cfg.lut_n));
    }
    return tables;
}

}  // namespace

NetworkState make_state(const NetworkConfig& cfg, std::vector<WeightMatrix> weights) {
    validate_config(cfg);
    const std::vector<int> dims = cfg.dims();
    if (int(weights.size()) != cfg.layer_count())
        throw std::invalid_argument("weight count does not match layer count");
    for (int l = 0; l < cfg.layer_count(); ++l) {
        const WeightMatrix& w = weights[std::size_t(l)];
        require_same_format(w.fmt, cfg.fmt);
        if (w.rows != dims[std::size_t(l) + 1] || w.cols != dims[std::size_t(l)])
            throw std::invalid_argument("weight shape does not chain with layer dimensions");
    }
    NetworkState state;
    state.weights = std::move(weights);
    state.act_luts = build_act_tables(cfg, false);
    state.deriv_luts = build_act_tables(cfg, true);
    state.exp_lut = build_lut(LutKind::exp, cfg.fmt, kExpLutMin, kExpLutMax, cfg.lut_n);
    return state;
}

NetworkState init_network(const NetworkConfig& cfg) {
    const auto reals = init_weights_real(cfg);
    std::vector<WeightMatrix> weights;
    weights.reserve(reals.size());
    for (const auto& m : reals) weights.push_back(matrix_from_reals(m, cfg.fmt));
    return make_state(cfg, std::move(weights));
}

namespace {

// Per-element LUT read on a bank of B ports: ceil(dim / B) cycles.
std::uint64_t lut_bank_cycles(int dim, int bank_width) {
    return ceil_div(std::uint64_t(dim), std::uint64_t(bank_width));
}

SignalVector lut_map(const LutTable& table, const SignalVector& v) {
    SignalVector out = SignalVector::zeros(v.dim(), v.fmt);
    for (int i = 0; i < v.dim(); ++i) out.set(i, lut_eval(table, v.at(i)));
    return out;
}

// Exp read + sum + divide, each a K-element pass through the softmax unit.
std::uint64_t softmax_cycles(int k) {
    return 3 * std::uint64_t(k);
}

}  // namespace

ForwardTrace forward(const NetworkState& state, const NetworkConfig& cfg, const SignalVector& x) {
    if (x.dim() != cfg.input_dim) throw std::invalid_argument("input dimension mismatch");
    require_same_format(x.fmt, cfg.fmt);
    const MacBankConfig bank = cfg.bank();
    const int n_hidden = int(cfg.hidden_dims.size());

    ForwardTrace trace;
    trace.input = x;
    trace.pre.reserve(std::size_t(n_hidden));
    trace.post.reserve(std::size_t(n_hidden));
    const SignalVector* current = &trace.input;
    for (int l = 0; l < n_hidden; ++l) {
        MatVecResult mv = mac_bank_matvec(bank, state.weights[std::size_t(l)], *current);
        trace.cycles += mv.cycles;
        trace.pre.push_back(std::move(mv.y));
        trace.post.push_back(lut_map(state.act_luts[std::size_t(l)], trace.pre.back()));
        trace.cycles += lut_bank_cycles(trace.post.back().dim(), cfg.bank_width);
        current = &trace.post.back();
    }
    MatVecResult out = mac_bank_matvec(bank, state.weights[std::size_t(n_hidden)], *current);
    trace.cycles += out.cycles;
    trace.z = std::move(out.y);
    trace.yhat = SignalVector{cfg.fmt, {}};
    std::vector<FxpValue> zvals(std::size_t(trace.z.dim()));
    for (int i = 0; i < trace.z.dim(); ++i) zvals[std::size_t(i)] = trace.z.at(i);
    for (const FxpValue& p : softmax_hw(zvals, state.exp_lut, cfg.softmax_limit))
        trace.yhat.raw.push_back(p.raw);
    trace.cycles += softmax_cycles(cfg.output_dim);
    return trace;
}

SignalVector one_hot(int label, int num_classes, const QFormat& fmt) {
    if (label < 0 || label >= num_classes) throw std::invalid_argument("label out of range");
    SignalVector y = SignalVector::zeros(num_classes, fmt);
    y.set(label, quantize(1.0, fmt));
    return y;
}

int argmax_raw(const SignalVector& v) {
    if (v.dim() == 0) throw std::invalid_argument("argmax of empty vector");
    int best = 0;
    for (int i = 1; i < v.dim(); ++i)
        if (v.raw[std::size_t(i)] > v.raw[std::size_t(best)]) best = i;
    return best;
}

namespace {

int one_hot_label(const SignalVector& y) {
    const std::int32_t one = quantize(1.0, y.fmt).raw;
    int label = -1;
    for (int i = 0; i < y.dim(); ++i) {
        const std::int32_t r = y.raw[std::size_t(i)];
        if (r == one) {
            if (label >= 0) throw std::invalid_argument("label vector is not one-hot");
            label = i;
        } else if (r != 0) {
            throw std::invalid_argument("label vector is not one-hot");
        }
    }
    if (label < 0) throw std::invalid_argument("label vector is not one-hot");
    return label;
}

}  // namespace

double cross_entropy(const SignalVector& yhat, const SignalVector& y_one_hot) {
    require_same_format(yhat.fmt, y_one_hot.fmt);
    if (yhat.dim() != y_one_hot.dim()) throw std::invalid_argument("cross_entropy dimension mismatch");
    const int label = one_hot_label(y_one_hot);
    const double p = std::max(to_real(yhat.at(label)), format_step(yhat.fmt));
    return -std::log(p);
}

namespace {

GradMatrix widen(const WeightMatrix& g) {
    GradMatrix out = GradMatrix::zeros(g.rows, g.cols, g.fmt);
    for (std::size_t i = 0; i < g.raw.size(); ++i) out.raw[i] = g.raw[i];
    return out;
}

SignalVector hadamard(const SignalVector& a, const SignalVector& b) {
    SignalVector out = SignalVector::zeros(a.dim(), a.fmt);
    for (int i = 0; i < a.dim(); ++i) out.set(i, fxp_mul(a.at(i), b.at(i)));
    return out;
}

}  // namespace

BackwardResult backward(const NetworkState& state, const NetworkConfig& cfg,
                        const ForwardTrace& trace, const SignalVector& y_one_hot) {
    validate_config(cfg);
    if (y_one_hot.dim() != cfg.output_dim) throw std::invalid_argument("label dimension mismatch");
    const MacBankConfig bank = cfg.bank();
    const int n_hidden = int(cfg.hidden_dims.size());
    if (int(trace.pre.size()) != n_hidden || trace.z.dim() != cfg.output_dim)
        throw std::invalid_argument("trace does not match configuration");

    BackwardResult result;
    result.grads.resize(std::size_t(cfg.layer_count()));

    // Output residual: yhat - y. Softmax outputs live in [0, 1] and the
    // label is 0 or 1, so the saturating subtraction is exact.
    SignalVector delta = SignalVector::zeros(cfg.output_dim, cfg.fmt);
    for (int i = 0; i < cfg.output_dim; ++i)
        delta.set(i, fxp_sub_sat(trace.yhat.at(i), y_one_hot.at(i)));

    for (int l = n_hidden; l >= 0; --l) {
        const SignalVector& layer_in = l == 0 ? trace.input : trace.post[std::size_t(l) - 1];
        OuterProductResult op = outer_product(bank, delta, layer_in);
        result.cycles += op.cycles;
        result.grads[std::size_t(l)] = widen(op.g);

        if (l == 0) break;
        // delta_{l-1} = (W_l^T delta_l) (*) act'(S_{l-1})
        MatVecResult back = mac_bank_matvec(bank, state.weights[std::size_t(l)].transposed(), delta);
        result.cycles += back.cycles;
        const SignalVector deriv = lut_map(state.deriv_luts[std::size_t(l) - 1], trace.pre[std::size_t(l) - 1]);
        result.cycles += lut_bank_cycles(deriv.dim(), cfg.bank_width);
        delta = hadamard(back.y, deriv);
    }
    return result;
}

void grad_accumulate(Gradients& into, const Gradients& g) {
    if (into.size() != g.size()) throw std::invalid_argument("gradient list size mismatch");
    for (std::size_t l = 0; l < g.size(); ++l) {
        GradMatrix& acc = into[l];
        const GradMatrix& add = g[l];
        if (acc.rows != add.rows || acc.cols != add.cols)
            throw std::invalid_argument("gradient shape mismatch");
        const AccValue bounds = acc_zero(acc.fmt);
        for (std::size_t i = 0; i < acc.raw.size(); ++i)
            acc.raw[i] = saturate_acc_raw(acc.raw[i] + add.raw[i], bounds);
    }
}

ApplyResult apply_gradients(const NetworkState& state, const NetworkConfig& cfg,
                            const Gradients& grads) {
    if (grads.size() != state.weights.size())
        throw std::invalid_argument("gradient list does not match weights");
    ApplyResult result{state, 0};
    for (std::size_t l = 0; l < grads.size(); ++l) {
        WeightMatrix& w = result.state.weights[l];
        const GradMatrix& g = grads[l];
        if (g.rows != w.rows || g.cols != w.cols)
            throw std::invalid_argument("gradient shape mismatch");
        require_same_format(g.fmt, w.fmt);
        for (std::size_t i = 0; i < w.raw.size(); ++i) {
            // One rounding of gamma * g, then a saturating subtract; for
            // gradients within format range this is exactly the accu-unit
            // update W - gamma*G.
            const std::int64_t scaled =
                round_shift(std::int64_t(cfg.gamma.raw) * g.raw[i], cfg.fmt.frac_bits);
            const std::int32_t delta = saturate_raw(scaled, cfg.fmt);
            w.raw[i] = saturate_raw(std::int64_t(w.raw[i]) - std::int64_t(delta), cfg.fmt);
        }
        result.cycles += ceil_div(std::uint64_t(w.rows) * std::uint64_t(w.cols),
                                  std::uint64_t(cfg.bank_width));
    }
    return result;
}

TrainEpochResult train_epoch(const NetworkState& state, const NetworkConfig& cfg,
                             const Dataset& data, int batch_size,
                             const std::vector<int>& order) {
    validate_config(cfg);
    if (data.size() == 0) throw std::invalid_argument("empty dataset");
    if (batch_size < 1 || batch_size > data.size())
        throw std::invalid_argument("batch size must be in [1, dataset size]");
    if (data.feature_dim() != cfg.input_dim || data.num_classes() != cfg.output_dim)
        throw std::invalid_argument("dataset does not match network dimensions");
    if (!order.empty() && int(order.size()) != data.size())
        throw std::invalid_argument("sample order must cover the dataset");

    TrainEpochResult result{state, {}};
    double loss_sum = 0.0;
    int correct = 0;

    int i = 0;
    while (i < data.size()) {
        const int m = std::min(batch_size, data.size() - i);
        Gradients batch;
        for (int b = 0; b < m; ++b, ++i) {
            const int idx = order.empty() ? i : order[std::size_t(i)];
            const SignalVector x = data.sample(idx);
            const SignalVector y = one_hot(data.label(idx), cfg.output_dim, cfg.fmt);

            const ForwardTrace trace = forward(result.state, cfg, x);
            result.stats.cycles += trace.cycles;
            loss_sum += cross_entropy(trace.yhat, y);
            if (argmax_raw(trace.yhat) == data.label(idx)) ++correct;

            BackwardResult bw = backward(result.state, cfg, trace, y);
            result.stats.cycles += bw.cycles;
            if (batch.empty()) batch = std::move(bw.grads);
            else grad_accumulate(batch, bw.grads);
        }
        ApplyResult applied = apply_gradients(result.state, cfg, batch);
        result.state = std::move(applied.state);
        result.stats.cycles += applied.cycles;
    }

    result.stats.mean_loss = loss_sum / double(data.size());
    result.stats.accuracy = double(correct) / double(data.size());
    return result;
}

}  // namespace gnnsim
