#pragma once

#include <cstdint>
#include <vector>

#include "gnnsim/datapath.hpp"
#include "gnnsim/lut.hpp"

// Feed-forward network built from the datapath units: per hidden layer a
// mult-add bank pass plus an activation LUT read, then the output matvec
// and the hardware softmax. The backward pass mirrors the same units with
// transposed weights and derivative LUTs. There are no bias terms; the
// datapath is pure matrix arithmetic.

namespace gnnsim {

struct NetworkConfig {
    int input_dim = 0;
    std::vector<int> hidden_dims;
    int output_dim = 0;
    std::vector<LutKind> activations;  // one per hidden layer
    QFormat fmt;
    int bank_width = 16;
    int softmax_limit = 1024;
    int lut_n = 1024;
    FxpValue gamma;
    std::uint64_t seed = 1;

    int layer_count() const { return int(hidden_dims.size()) + 1; }
    // Dimensions T, H1, ..., Hn, K.
    std::vector<int> dims() const;
    MacBankConfig bank() const { return MacBankConfig{bank_width, fmt}; }
};

void validate_config(const NetworkConfig& cfg);
LutKind derivative_kind(LutKind activation);

struct NetworkState {
    std::vector<WeightMatrix> weights;      // layer l maps dims[l] -> dims[l+1]
    std::vector<LutTable> act_luts;         // per hidden layer
    std::vector<LutTable> deriv_luts;       // per hidden layer
    LutTable exp_lut;
};

// Default sampling range of the activation and derivative tables; the exp
// table covers the non-positive inputs produced by max-subtraction.
inline constexpr double kActLutMin = -8.0;
inline constexpr double kActLutMax = 8.0;
inline constexpr double kExpLutMin = -8.0;
inline constexpr double kExpLutMax = 0.0;

// Pre-quantization initial weights: uniform in [-r, r] per layer with
// r = sqrt(6 / (fan_in + fan_out)) clamped to the format range, drawn
// layer by layer, row-major, from a splitmix64 stream seeded by cfg.seed.
std::vector<std::vector<std::vector<double>>> init_weights_real(const NetworkConfig& cfg);

// Quantized state from the seed; identical seed gives bit-identical state.
NetworkState init_network(const NetworkConfig& cfg);

// State with externally supplied weights (model load, tests).
NetworkState make_state(const NetworkConfig& cfg, std::vector<WeightMatrix> weights);

struct ForwardTrace {
    SignalVector input;
    std::vector<SignalVector> pre;   // S per hidden layer
    std::vector<SignalVector> post;  // M per hidden layer
    SignalVector z;
    SignalVector yhat;
    std::uint64_t cycles = 0;
};

ForwardTrace forward(const NetworkState& state, const NetworkConfig& cfg, const SignalVector& x);

SignalVector one_hot(int label, int num_classes, const QFormat& fmt);
int argmax_raw(const SignalVector& v);

// -ln(max(yhat[label], 2^-frac_bits)); reporting only, not a datapath value.
double cross_entropy(const SignalVector& yhat, const SignalVector& y_one_hot);

// Gradient matrix in operand scale held at accumulator width, so a batch
// sum never saturates at the 16-bit boundary and gamma rounds once.
struct GradMatrix {
    QFormat fmt;
    int rows = 0;
    int cols = 0;
    std::vector<std::int64_t> raw;

    static GradMatrix zeros(int rows, int cols, const QFormat& fmt) {
        return GradMatrix{fmt, rows, cols, std::vector<std::int64_t>(std::size_t(rows) * std::size_t(cols), 0)};
    }
};

using Gradients = std::vector<GradMatrix>;

struct BackwardResult {
    Gradients grads;  // one per weight matrix
    std::uint64_t cycles = 0;
};

BackwardResult backward(const NetworkState& state, const NetworkConfig& cfg,
                        const ForwardTrace& trace, const SignalVector& y_one_hot);

// Elementwise sum at accumulator width, saturating at the acc boundary.
void grad_accumulate(Gradients& into, const Gradients& g);

struct ApplyResult {
    NetworkState state;
    std::uint64_t cycles = 0;
};

// W' = W - gamma * G per matrix on the accu unit.
ApplyResult apply_gradients(const NetworkState& state, const NetworkConfig& cfg,
                            const Gradients& grads);

struct EpochStats {
    double mean_loss = 0.0;
    double accuracy = 0.0;
    std::uint64_t cycles = 0;
};

class Dataset;  // harness-side container, defined in dataset.hpp

struct TrainEpochResult {
    NetworkState state;
    EpochStats stats;
};

// One pass over the dataset in the given order (defaults to file order):
// per mini-batch of m samples, per-sample gradients are summed and a
// single update is applied. Shuffling between epochs is the caller's job.
TrainEpochResult train_epoch(const NetworkState& state, const NetworkConfig& cfg,
                             const Dataset& data, int batch_size,
                             const std::vector<int>& order = {});

}  // namespace gnnsim
