#pragma once

#include <string>

#include "gnnsim/network.hpp"

namespace gnnsim {

// A full training run: the network plus epochs, batching, and file paths.
// Text format is one `key = value` per line with `#` comments. Unknown
// keys are an error; a handful of keys have documented defaults.
struct RunConfig {
    NetworkConfig net;
    int epochs = 1;
    int batch_size = 1;
    std::string dataset_path;
    std::string out_model = "model.gnn";
    std::string out_metrics = "metrics.csv";
};

RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);
std::string serialize_run_config(const RunConfig& cfg);

}  // namespace gnnsim
