#include "gnnsim/run_config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace gnnsim {

namespace {

const char* const kKnownKeys[] = {
    "input_dim",  "hidden_dims",   "output_dim", "activation", "total_bits",
    "frac_bits",  "bank_width",    "softmax_limit", "gamma",   "seed",
    "epochs",     "batch_size",    "dataset",    "out_model",  "out_metrics",
};

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    std::size_t b = s.find_last_not_of(" \t");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(const std::string& key, const std::string& what) {
    throw std::runtime_error("config key '" + key + "': " + what);
}

long parse_int(const std::string& key, const std::string& value, long lo, long hi) {
    char* end = nullptr;
    const long v = std::strtol(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0') fail(key, "expected an integer, got '" + value + "'");
    if (v < lo || v > hi) fail(key, "value " + value + " out of range");
    return v;
}

double parse_real(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0' || !std::isfinite(v))
        fail(key, "expected a finite number, got '" + value + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0') fail(key, "expected an unsigned integer, got '" + value + "'");
    return v;
}

std::vector<int> parse_dim_list(const std::string& key, const std::string& value) {
    std::vector<int> dims;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
        dims.push_back(int(parse_int(key, trim(item), 1, 1 << 20)));
    if (dims.empty()) fail(key, "expected at least one dimension");
    return dims;
}

class KeyMap {
public:
    void insert(const std::string& key, const std::string& value, int line_no) {
        bool known = false;
        for (const char* k : kKnownKeys) known = known || key == k;
        if (!known)
            throw std::runtime_error("line " + std::to_string(line_no) + ": unknown config key '" + key + "'");
        if (values_.count(key))
            throw std::runtime_error("line " + std::to_string(line_no) + ": duplicate config key '" + key + "'");
        values_[key] = value;
    }

    const std::string& require(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) throw std::runtime_error("missing required config key '" + key + "'");
        return it->second;
    }

    std::string get_or(const std::string& key, const std::string& fallback) const {
        auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

private:
    std::map<std::string, std::string> values_;
};

}  // namespace

RunConfig parse_run_config(const std::string& text) {
    KeyMap keys;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("line " + std::to_string(line_no) + ": expected 'key = value'");
        keys.insert(trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no);
    }

    RunConfig cfg;
    cfg.net.fmt.total_bits = int(parse_int("total_bits", keys.get_or("total_bits", "16"), 2, 32));
    cfg.net.fmt.frac_bits = int(parse_int("frac_bits", keys.get_or("frac_bits", "14"), 0, 31));
    validate_format(cfg.net.fmt);

    cfg.net.input_dim = int(parse_int("input_dim", keys.require("input_dim"), 1, 1 << 20));
    cfg.net.hidden_dims = parse_dim_list("hidden_dims", keys.require("hidden_dims"));
    cfg.net.output_dim = int(parse_int("output_dim", keys.require("output_dim"), 1, 1 << 20));
    cfg.net.activations.assign(cfg.net.hidden_dims.size(),
                               lut_kind_from_name(keys.get_or("activation", "tanh")));
    cfg.net.bank_width = int(parse_int("bank_width", keys.get_or("bank_width", "16"), 1, 1 << 20));
    cfg.net.softmax_limit = int(parse_int("softmax_limit", keys.get_or("softmax_limit", "1024"), 1, 1 << 30));

    const double gamma = parse_real("gamma", keys.require("gamma"));
    if (gamma <= 0.0) fail("gamma", "learning rate must be positive");
    cfg.net.gamma = quantize(gamma, cfg.net.fmt);
    if (cfg.net.gamma.raw == 0) fail("gamma", "learning rate quantizes to zero in this format");
    cfg.net.seed = parse_u64("seed", keys.require("seed"));

    cfg.epochs = int(parse_int("epochs", keys.require("epochs"), 1, 1 << 30));
    cfg.batch_size = int(parse_int("batch_size", keys.require("batch_size"), 1, 1 << 30));
    cfg.dataset_path = keys.require("dataset");
    cfg.out_model = keys.get_or("out_model", "model.gnn");
    cfg.out_metrics = keys.get_or("out_metrics", "metrics.csv");

    validate_config(cfg.net);
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_run_config(buf.str());
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

std::string serialize_run_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "input_dim = " << cfg.net.input_dim << '\n';
    out << "hidden_dims = ";
    for (std::size_t i = 0; i < cfg.net.hidden_dims.size(); ++i)
        out << (i ? "," : "") << cfg.net.hidden_dims[i];
    out << '\n';
    out << "output_dim = " << cfg.net.output_dim << '\n';
    out << "activation = " << lut_kind_name(cfg.net.activations.front()) << '\n';
    out << "total_bits = " << cfg.net.fmt.total_bits << '\n';
    out << "frac_bits = " << cfg.net.fmt.frac_bits << '\n';
    out << "bank_width = " << cfg.net.bank_width << '\n';
    out << "softmax_limit = " << cfg.net.softmax_limit << '\n';
    // gamma round-trips through its exact real value.
    std::ostringstream g;
    g.precision(17);
    g << to_real(cfg.net.gamma);
    out << "gamma = " << g.str() << '\n';
    out << "seed = " << cfg.net.seed << '\n';
    out << "epochs = " << cfg.epochs << '\n';
    out << "batch_size = " << cfg.batch_size << '\n';
    out << "dataset = " << cfg.dataset_path << '\n';
    out << "out_model = " << cfg.out_model << '\n';
    out << "out_metrics = " << cfg.out_metrics << '\n';
    return out.str();
}

}  // namespace gnnsim
