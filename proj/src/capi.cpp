#include "gnnsim.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <sstream>
#include <string>

#include "gnnsim/dataset.hpp"
#include "gnnsim/model_io.hpp"
#include "gnnsim/network.hpp"
#include "gnnsim/rng.hpp"
#include "gnnsim/run_config.hpp"
#include "gnnsim/scheduler.hpp"

using namespace gnnsim;

struct gnnsim_config {
    RunConfig cfg;
};

struct gnnsim_dataset {
    Dataset data;
};

struct gnnsim_network {
    NetworkConfig cfg;
    NetworkState state;
    std::uint64_t epochs_done = 0;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename Fn>
gnnsim_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return GNNSIM_OK;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return GNNSIM_ERR_INVALID_ARGUMENT;
    } catch (const std::runtime_error& e) {
        set_error(e.what());
        return GNNSIM_ERR_RUNTIME;
    } catch (const std::exception& e) {
        set_error(e.what());
        return GNNSIM_ERR_INTERNAL;
    }
}

gnnsim_status require(bool ok, const char* what) {
    if (ok) return GNNSIM_OK;
    set_error(what);
    return GNNSIM_ERR_INVALID_ARGUMENT;
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void format_value(std::ostringstream& out, const FxpValue& v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", to_real(v));
    out << buf;
}

void format_vector(std::ostringstream& out, const char* label, const SignalVector& v) {
    out << label << ':';
    for (int i = 0; i < v.dim(); ++i) {
        out << ' ';
        format_value(out, v.at(i));
    }
    out << '\n';
}

// Shared epoch driver: CLI runs and in-process runs must order samples
// identically for training to be reproducible.
EpochStats run_one_epoch(gnnsim_network& net, const Dataset& data, int batch_size) {
    std::vector<int> order;
    if (net.epochs_done > 0)
        order = seeded_permutation(net.cfg.seed + net.epochs_done, data.size());
    TrainEpochResult result = train_epoch(net.state, net.cfg, data, batch_size, order);
    net.state = std::move(result.state);
    net.epochs_done += 1;
    return result.stats;
}

}  // namespace

extern "C" {

const char* gnnsim_last_error(void) { return g_last_error.c_str(); }

void gnnsim_string_free(char* s) { std::free(s); }

gnnsim_status gnnsim_config_load(const char* path, gnnsim_config** out) {
    if (auto st = require(path && out, "null argument")) return st;
    return guarded([&] { *out = new gnnsim_config{load_run_config(path)}; });
}

void gnnsim_config_free(gnnsim_config* cfg) { delete cfg; }

int gnnsim_config_epochs(const gnnsim_config* cfg) { return cfg ? cfg->cfg.epochs : 0; }
int gnnsim_config_batch_size(const gnnsim_config* cfg) { return cfg ? cfg->cfg.batch_size : 0; }
int gnnsim_config_input_dim(const gnnsim_config* cfg) { return cfg ? cfg->cfg.net.input_dim : 0; }
int gnnsim_config_output_dim(const gnnsim_config* cfg) { return cfg ? cfg->cfg.net.output_dim : 0; }
int gnnsim_config_total_bits(const gnnsim_config* cfg) { return cfg ? cfg->cfg.net.fmt.total_bits : 0; }
int gnnsim_config_frac_bits(const gnnsim_config* cfg) { return cfg ? cfg->cfg.net.fmt.frac_bits : 0; }

const char* gnnsim_config_dataset_path(const gnnsim_config* cfg) {
    return cfg ? cfg->cfg.dataset_path.c_str() : "";
}
const char* gnnsim_config_model_path(const gnnsim_config* cfg) {
    return cfg ? cfg->cfg.out_model.c_str() : "";
}
const char* gnnsim_config_metrics_path(const gnnsim_config* cfg) {
    return cfg ? cfg->cfg.out_metrics.c_str() : "";
}

gnnsim_status gnnsim_dataset_load(const char* path, int feature_dim, int num_classes,
                                  int total_bits, int frac_bits, gnnsim_dataset** out) {
    if (auto st = require(path && out, "null argument")) return st;
    return guarded([&] {
        const QFormat fmt{total_bits, frac_bits};
        validate_format(fmt);
        *out = new gnnsim_dataset{load_dataset_csv(path, feature_dim, num_classes, fmt)};
    });
}

void gnnsim_dataset_free(gnnsim_dataset* data) { delete data; }

int gnnsim_dataset_size(const gnnsim_dataset* data) { return data ? data->data.size() : 0; }

gnnsim_status gnnsim_network_create(const gnnsim_config* cfg, gnnsim_network** out) {
    if (auto st = require(cfg && out, "null argument")) return st;
    return guarded([&] {
        auto net = std::make_unique<gnnsim_network>();
        net->cfg = cfg->cfg.net;
        net->state = init_network(net->cfg);
        *out = net.release();
    });
}

gnnsim_status gnnsim_network_load(const char* model_path, gnnsim_network** out) {
    if (auto st = require(model_path && out, "null argument")) return st;
    return guarded([&] {
        const ModelFile model = load_model(model_path);
        auto net = std::make_unique<gnnsim_network>();
        net->cfg = config_from_model(model);
        net->state = make_state(net->cfg, model.weights);
        *out = net.release();
    });
}

gnnsim_status gnnsim_network_save(const gnnsim_network* net, const char* model_path) {
    if (auto st = require(net && model_path, "null argument")) return st;
    return guarded([&] {
        ModelFile model{net->cfg.fmt, net->cfg.activations.front(), net->state.weights};
        save_model(model, model_path);
    });
}

void gnnsim_network_free(gnnsim_network* net) { delete net; }

int gnnsim_network_input_dim(const gnnsim_network* net) { return net ? net->cfg.input_dim : 0; }
int gnnsim_network_output_dim(const gnnsim_network* net) { return net ? net->cfg.output_dim : 0; }
int gnnsim_network_total_bits(const gnnsim_network* net) { return net ? net->cfg.fmt.total_bits : 0; }
int gnnsim_network_frac_bits(const gnnsim_network* net) { return net ? net->cfg.fmt.frac_bits : 0; }

gnnsim_status gnnsim_network_train_epoch(gnnsim_network* net, const gnnsim_dataset* data,
                                         int batch_size, gnnsim_epoch_stats* out) {
    if (auto st = require(net && data && out, "null argument")) return st;
    return guarded([&] {
        const EpochStats stats = run_one_epoch(*net, data->data, batch_size);
        *out = gnnsim_epoch_stats{stats.mean_loss, stats.accuracy, stats.cycles};
    });
}

gnnsim_status gnnsim_network_evaluate(const gnnsim_network* net, const gnnsim_dataset* data,
                                      gnnsim_epoch_stats* out) {
    if (auto st = require(net && data && out, "null argument")) return st;
    return guarded([&] {
        const Dataset& ds = data->data;
        if (ds.size() == 0) throw std::invalid_argument("empty dataset");
        if (ds.feature_dim() != net->cfg.input_dim || ds.num_classes() != net->cfg.output_dim)
            throw std::invalid_argument("dataset does not match network dimensions");
        double loss = 0.0;
        int correct = 0;
        std::uint64_t cycles = 0;
        for (int i = 0; i < ds.size(); ++i) {
            const ForwardTrace trace = forward(net->state, net->cfg, ds.sample(i));
            cycles += trace.cycles;
            loss += cross_entropy(trace.yhat, one_hot(ds.label(i), net->cfg.output_dim, net->cfg.fmt));
            if (argmax_raw(trace.yhat) == ds.label(i)) ++correct;
        }
        *out = gnnsim_epoch_stats{loss / double(ds.size()), double(correct) / double(ds.size()), cycles};
    });
}

gnnsim_status gnnsim_network_trace(const gnnsim_network* net, const gnnsim_dataset* data,
                                   int sample_index, char** out_text) {
    if (auto st = require(net && data && out_text, "null argument")) return st;
    return guarded([&] {
        const Dataset& ds = data->data;
        if (sample_index < 0 || sample_index >= ds.size())
            throw std::invalid_argument("sample index out of range");
        const ForwardTrace trace = forward(net->state, net->cfg, ds.sample(sample_index));

        std::ostringstream out;
        out << "sample " << sample_index << " label " << ds.label(sample_index) << '\n';
        format_vector(out, "x", trace.input);
        for (std::size_t l = 0; l < trace.pre.size(); ++l) {
            const std::string tag = "layer " + std::to_string(l + 1);
            format_vector(out, (tag + " S").c_str(), trace.pre[l]);
            format_vector(out, (tag + " M").c_str(), trace.post[l]);
        }
        format_vector(out, "z", trace.z);
        format_vector(out, "yhat", trace.yhat);
        out << "pred " << argmax_raw(trace.yhat) << '\n';
        out << "cycles " << trace.cycles << '\n';
        *out_text = dup_string(out.str());
        if (!*out_text) throw std::runtime_error("out of memory");
    });
}

gnnsim_status gnnsim_estimate(const gnnsim_config* cfg, char** out_text, int* fits) {
    if (auto st = require(cfg && out_text && fits, "null argument")) return st;
    return guarded([&] {
        const CycleReport cycles = schedule_epoch(cfg->cfg.net);
        const ResourceReport resources = estimate_resources(cfg->cfg.net);
        std::string text = format_report(cycles, resources);
        if (!resources.dsp_fits)
            text += "OVER_BUDGET\tDSP usage exceeds device budget\n";
        if (!resources.bram_fits)
            text += "OVER_BUDGET\tBRAM usage exceeds device budget\n";
        *out_text = dup_string(text);
        if (!*out_text) throw std::runtime_error("out of memory");
        *fits = resources.fits() ? 1 : 0;
    });
}

gnnsim_status gnnsim_lut_dump(const char* kind, int total_bits, int frac_bits, double x_min,
                              double x_max, int n, const char* path) {
    if (auto st = require(kind && path, "null argument")) return st;
    return guarded([&] {
        const QFormat fmt{total_bits, frac_bits};
        validate_format(fmt);
        save_lut(build_lut(lut_kind_from_name(kind), fmt, x_min, x_max, n), path);
    });
}

}  // extern "C"
