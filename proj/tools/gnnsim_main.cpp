// gnnsim command line driver. Talks to the simulator exclusively through
// the C API in gnnsim.h, the same surface any other client would use.

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gnnsim.h"

namespace {

int fail(gnnsim_status status) {
    std::fprintf(stderr, "error: %s\n", gnnsim_last_error());
    return status == GNNSIM_OK ? 1 : int(status);
}

struct ConfigHandle {
    gnnsim_config* ptr = nullptr;
    ~ConfigHandle() { gnnsim_config_free(ptr); }
};

struct DatasetHandle {
    gnnsim_dataset* ptr = nullptr;
    ~DatasetHandle() { gnnsim_dataset_free(ptr); }
};

struct NetworkHandle {
    gnnsim_network* ptr = nullptr;
    ~NetworkHandle() { gnnsim_network_free(ptr); }
};

gnnsim_status load_config_dataset(const std::string& config_path, ConfigHandle& cfg,
                                  DatasetHandle& data) {
    if (auto st = gnnsim_config_load(config_path.c_str(), &cfg.ptr)) return st;
    return gnnsim_dataset_load(gnnsim_config_dataset_path(cfg.ptr), gnnsim_config_input_dim(cfg.ptr),
                               gnnsim_config_output_dim(cfg.ptr), gnnsim_config_total_bits(cfg.ptr),
                               gnnsim_config_frac_bits(cfg.ptr), &data.ptr);
}

int cmd_train(const std::string& config_path) {
    ConfigHandle cfg;
    DatasetHandle data;
    if (auto st = load_config_dataset(config_path, cfg, data)) return fail(st);

    NetworkHandle net;
    if (auto st = gnnsim_network_create(cfg.ptr, &net.ptr)) return fail(st);

    const std::string metrics_path = gnnsim_config_metrics_path(cfg.ptr);
    std::unique_ptr<std::FILE, int (*)(std::FILE*)> metrics(
        std::fopen(metrics_path.c_str(), "w"), &std::fclose);
    if (!metrics) {
        std::fprintf(stderr, "error: cannot open metrics file: %s\n", metrics_path.c_str());
        return 1;
    }
    std::fprintf(metrics.get(), "epoch,mean_loss,accuracy,cycles\n");

    const int epochs = gnnsim_config_epochs(cfg.ptr);
    const int batch = gnnsim_config_batch_size(cfg.ptr);
    for (int e = 1; e <= epochs; ++e) {
        gnnsim_epoch_stats stats{};
        if (auto st = gnnsim_network_train_epoch(net.ptr, data.ptr, batch, &stats)) return fail(st);
        std::fprintf(metrics.get(), "%d,%.6f,%.6f,%llu\n", e, stats.mean_loss, stats.accuracy,
                     static_cast<unsigned long long>(stats.cycles));
    }

    if (auto st = gnnsim_network_save(net.ptr, gnnsim_config_model_path(cfg.ptr))) return fail(st);
    std::printf("trained %d epochs, model written to %s\n", epochs,
                gnnsim_config_model_path(cfg.ptr));
    return 0;
}

int cmd_eval(const std::string& model_path, const std::string& data_path) {
    NetworkHandle net;
    if (auto st = gnnsim_network_load(model_path.c_str(), &net.ptr)) return fail(st);

    DatasetHandle data;
    if (auto st = gnnsim_dataset_load(data_path.c_str(), gnnsim_network_input_dim(net.ptr),
                                      gnnsim_network_output_dim(net.ptr),
                                      gnnsim_network_total_bits(net.ptr),
                                      gnnsim_network_frac_bits(net.ptr), &data.ptr))
        return fail(st);

    gnnsim_epoch_stats stats{};
    if (auto st = gnnsim_network_evaluate(net.ptr, data.ptr, &stats)) return fail(st);
    std::printf("accuracy %.6f\nmean_loss %.6f\n", stats.accuracy, stats.mean_loss);
    return 0;
}

int cmd_trace(const std::string& config_path, int sample) {
    ConfigHandle cfg;
    DatasetHandle data;
    if (auto st = load_config_dataset(config_path, cfg, data)) return fail(st);

    NetworkHandle net;
    if (auto st = gnnsim_network_create(cfg.ptr, &net.ptr)) return fail(st);

    char* text = nullptr;
    if (auto st = gnnsim_network_trace(net.ptr, data.ptr, sample, &text)) return fail(st);
    std::fputs(text, stdout);
    gnnsim_string_free(text);
    return 0;
}

int cmd_estimate(const std::string& config_path) {
    ConfigHandle cfg;
    if (auto st = gnnsim_config_load(config_path.c_str(), &cfg.ptr)) return fail(st);

    char* text = nullptr;
    int fits = 0;
    if (auto st = gnnsim_estimate(cfg.ptr, &text, &fits)) return fail(st);
    std::fputs(text, stdout);
    gnnsim_string_free(text);
    if (!fits) {
        std::fprintf(stderr, "error: estimate exceeds the DSP/BRAM device budget\n");
        return 1;
    }
    return 0;
}

bool split_pair(const std::string& s, std::string& a, std::string& b) {
    const std::size_t comma = s.find(',');
    if (comma == std::string::npos) return false;
    a = s.substr(0, comma);
    b = s.substr(comma + 1);
    return !a.empty() && !b.empty() && b.find(',') == std::string::npos;
}

int cmd_gen_lut(const std::string& kind, const std::string& bits, const std::string& range, int n,
                const std::string& out) {
    std::string a, b;
    int total = 0, frac = 0;
    double lo = 0.0, hi = 0.0;
    try {
        if (!split_pair(bits, a, b)) throw std::invalid_argument("");
        total = std::stoi(a);
        frac = std::stoi(b);
    } catch (const std::exception&) {
        std::fprintf(stderr, "error: --bits expects total,frac (e.g. 16,14)\n");
        return 1;
    }
    try {
        if (!split_pair(range, a, b)) throw std::invalid_argument("");
        lo = std::stod(a);
        hi = std::stod(b);
    } catch (const std::exception&) {
        std::fprintf(stderr, "error: --range expects lo,hi (e.g. -8,8)\n");
        return 1;
    }
    if (auto st = gnnsim_lut_dump(kind.c_str(), total, frac, lo, hi, n, out.c_str()))
        return fail(st);
    std::printf("wrote %s table (%d entries) to %s\n", kind.c_str(), n, out.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fixed-point neural network accelerator simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string model_path;
    std::string data_path;
    std::string lut_kind;
    std::string lut_out;
    int sample = 0;
    std::string bits = "16,14";
    std::string range = "-8,8";
    int lut_n = 1024;

    auto* train = app.add_subcommand("train", "Train a network from a run config");
    train->add_option("--config", config_path, "run config file")->required();

    auto* eval = app.add_subcommand("eval", "Evaluate a saved model on a dataset");
    eval->add_option("--model", model_path, "model file")->required();
    eval->add_option("--data", data_path, "dataset CSV")->required();

    auto* trace = app.add_subcommand("trace", "Dump one sample's forward trace");
    trace->add_option("--config", config_path, "run config file")->required();
    trace->add_option("--sample", sample, "sample index")->required();

    auto* estimate = app.add_subcommand("estimate", "Print cycle and resource reports");
    estimate->add_option("--config", config_path, "run config file")->required();

    auto* gen_lut = app.add_subcommand("gen-lut", "Write a LUT dump file");
    gen_lut->add_option("--kind", lut_kind, "tanh|sigmoid|relu|exp|tanh_deriv|sigmoid_deriv")
        ->required();
    gen_lut->add_option("--bits", bits, "total,frac");
    gen_lut->add_option("--range", range, "lo,hi");
    gen_lut->add_option("--n", lut_n, "table size (power of two)");
    gen_lut->add_option("--out", lut_out, "output path")->required();

    CLI11_PARSE(app, argc, argv);

    if (train->parsed()) return cmd_train(config_path);
    if (eval->parsed()) return cmd_eval(model_path, data_path);
    if (trace->parsed()) return cmd_trace(config_path, sample);
    if (estimate->parsed()) return cmd_estimate(config_path);
    if (gen_lut->parsed()) return cmd_gen_lut(lut_kind, bits, range, lut_n, lut_out);
    return 1;
}
