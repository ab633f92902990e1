#pragma once

#include <vector>

#include "gnnsim/dataset.hpp"
#include "gnnsim/network.hpp"

// Double-precision mirror of the fixed-point network: true activation
// functions, true softmax, cross-entropy, and exact-arithmetic backprop.
// This is the ground truth every fidelity tolerance is measured against.

namespace gnnsim {

using RealMatrix = std::vector<std::vector<double>>;

struct OracleNet {
    std::vector<int> dims;                // T, H1, ..., K
    std::vector<LutKind> activations;     // per hidden layer
    std::vector<RealMatrix> weights;      // weights[l][out][in]
};

// Seed-paired oracle: the real weights whose quantization produced the
// fixed-point initial state for the same config.
OracleNet oracle_from_config(const NetworkConfig& cfg);

// Oracle over the exact real values of an existing quantized state.
OracleNet oracle_from_state(const NetworkConfig& cfg, const NetworkState& state);

struct OracleTrace {
    std::vector<std::vector<double>> pre;
    std::vector<std::vector<double>> post;
    std::vector<double> z;
    std::vector<double> yhat;
};

OracleTrace oracle_forward(const OracleNet& net, const std::vector<double>& x);
double oracle_loss(const OracleNet& net, const std::vector<double>& x, int label);
std::vector<RealMatrix> oracle_backward(const OracleNet& net, const std::vector<double>& x, int label);

int oracle_argmax(const std::vector<double>& v);

struct OracleEpochStats {
    double mean_loss = 0.0;
    double accuracy = 0.0;
};

// Mini-batch gradient descent matching the simulator's batching: gradients
// summed over each batch, one update of -gamma times the sum.
OracleEpochStats oracle_train_epoch(OracleNet& net, const Dataset& data, double gamma, int batch_size);

}  // namespace gnnsim
