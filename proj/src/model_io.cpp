#include "gnnsim/model_io.hpp"

#include <cstring>
#include <fstream>

namespace gnnsim {

namespace {

int raw_byte_width(const QFormat& fmt) {
    return (fmt.total_bits + 7) / 8;
}

void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v) { out.push_back(v); }

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(std::uint8_t(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int i = 0; i < 8; ++i) out.push_back(std::uint8_t(bits >> (8 * i)));
}

void put_raw(std::vector<std::uint8_t>& out, std::int32_t raw, int width) {
    const std::uint32_t u = std::uint32_t(raw);
    for (int i = 0; i < width; ++i) out.push_back(std::uint8_t(u >> (8 * i)));
}

class Reader {
public:
    explicit Reader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

    std::uint8_t u8() { return bytes_[need(1)]; }

    std::uint32_t u32() {
        const std::size_t at = need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= std::uint32_t(bytes_[at + std::size_t(i)]) << (8 * i);
        return v;
    }

    double f64() {
        const std::size_t at = need(8);
        std::uint64_t bits = 0;
        for (int i = 0; i < 8; ++i) bits |= std::uint64_t(bytes_[at + std::size_t(i)]) << (8 * i);
        double v;
        std::memcpy(&v, &bits, sizeof v);
        return v;
    }

    std::int32_t raw(int width, int total_bits) {
        const std::size_t at = need(std::size_t(width));
        std::uint32_t u = 0;
        for (int i = 0; i < width; ++i) u |= std::uint32_t(bytes_[at + std::size_t(i)]) << (8 * i);
        // Sign-extend from total_bits.
        const std::uint32_t sign = std::uint32_t(1) << (total_bits - 1);
        if (total_bits < 32 && (u & sign)) u |= ~((sign << 1) - 1);
        return std::int32_t(u);
    }

    void expect_magic(const char* magic) {
        const std::size_t at = need(4);
        if (std::memcmp(bytes_.data() + at, magic, 4) != 0)
            throw std::runtime_error(std::string("bad magic, expected ") + magic);
    }

    void expect_end() const {
        if (pos_ != bytes_.size()) throw std::runtime_error("trailing bytes after payload");
    }

private:
    std::size_t need(std::size_t n) {
        if (pos_ + n > bytes_.size()) throw std::runtime_error("truncated file");
        const std::size_t at = pos_;
        pos_ += n;
        return at;
    }

    const std::vector<std::uint8_t>& bytes_;
    std::size_t pos_ = 0;
};

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return bytes;
}

}  // namespace

std::vector<std::uint8_t> encode_model(const ModelFile& model) {
    validate_format(model.fmt);
    if (model.weights.empty()) throw std::invalid_argument("model has no weights");
    const int width = raw_byte_width(model.fmt);

    std::vector<std::uint8_t> out;
    out.insert(out.end(), {'G', 'N', 'N', '1'});
    put_u8(out, std::uint8_t(model.fmt.total_bits));
    put_u8(out, std::uint8_t(model.fmt.frac_bits));
    put_u8(out, std::uint8_t(model.activation));
    put_u8(out, 0);
    put_u32(out, std::uint32_t(model.weights.size()));
    for (const WeightMatrix& w : model.weights) {
        put_u32(out, std::uint32_t(w.cols));
        put_u32(out, std::uint32_t(w.rows));
    }
    for (const WeightMatrix& w : model.weights)
        for (std::int32_t r : w.raw) put_raw(out, r, width);
    return out;
}

ModelFile decode_model(const std::vector<std::uint8_t>& bytes) {
    Reader in(bytes);
    in.expect_magic("GNN1");
    ModelFile model;
    model.fmt.total_bits = in.u8();
    model.fmt.frac_bits = in.u8();
    validate_format(model.fmt);
    const std::uint8_t act = in.u8();
    if (act > std::uint8_t(LutKind::sigmoid_deriv)) throw std::runtime_error("bad activation code");
    model.activation = LutKind(act);
    if (in.u8() != 0) throw std::runtime_error("bad reserved byte");

    const std::uint32_t layers = in.u32();
    if (layers == 0 || layers > 1024) throw std::runtime_error("bad layer count");
    std::vector<std::pair<std::uint32_t, std::uint32_t>> shapes;
    for (std::uint32_t l = 0; l < layers; ++l) {
        const std::uint32_t in_dim = in.u32();
        const std::uint32_t out_dim = in.u32();
        if (in_dim == 0 || out_dim == 0 || in_dim > (1u << 20) || out_dim > (1u << 20))
            throw std::runtime_error("bad layer shape");
        shapes.emplace_back(in_dim, out_dim);
    }
    const int width = raw_byte_width(model.fmt);
    for (auto [in_dim, out_dim] : shapes) {
        WeightMatrix w = WeightMatrix::zeros(int(out_dim), int(in_dim), model.fmt);
        for (std::int32_t& r : w.raw) {
            const std::int32_t v = in.raw(width, model.fmt.total_bits);
            if (v > raw_max(model.fmt) || v < raw_min(model.fmt))
                throw std::runtime_error("weight out of format range");
            r = v;
        }
        model.weights.push_back(std::move(w));
    }
    in.expect_end();
    return model;
}

void save_model(const ModelFile& model, const std::string& path) {
    write_file(path, encode_model(model));
}

ModelFile load_model(const std::string& path) {
    try {
        return decode_model(read_file(path));
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

std::vector<std::uint8_t> encode_lut(const LutTable& table) {
    validate_format(table.fmt);
    const int width = raw_byte_width(table.fmt);
    std::vector<std::uint8_t> out;
    out.insert(out.end(), {'L', 'U', 'T', '1'});
    put_u8(out, std::uint8_t(table.kind));
    put_u8(out, std::uint8_t(table.fmt.total_bits));
    put_u8(out, std::uint8_t(table.fmt.frac_bits));
    put_u8(out, 0);
    put_f64(out, table.x_min);
    put_f64(out, table.x_max);
    put_u32(out, std::uint32_t(table.entries.size()));
    for (std::int32_t r : table.entries) put_raw(out, r, width);
    return out;
}

LutTable decode_lut(const std::vector<std::uint8_t>& bytes) {
    Reader in(bytes);
    in.expect_magic("LUT1");
    LutTable table;
    const std::uint8_t kind = in.u8();
    if (kind > std::uint8_t(LutKind::sigmoid_deriv)) throw std::runtime_error("bad LUT kind code");
    table.kind = LutKind(kind);
    table.fmt.total_bits = in.u8();
    table.fmt.frac_bits = in.u8();
    validate_format(table.fmt);
    if (in.u8() != 0) throw std::runtime_error("bad reserved byte");
    table.x_min = in.f64();
    table.x_max = in.f64();
    if (!(table.x_min < table.x_max)) throw std::runtime_error("bad LUT range");
    const std::uint32_t n = in.u32();
    if (n < 16 || (n & (n - 1)) != 0 || n > (1u << 22)) throw std::runtime_error("bad LUT size");
    const int width = raw_byte_width(table.fmt);
    table.entries.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i)
        table.entries.push_back(in.raw(width, table.fmt.total_bits));
    in.expect_end();
    return table;
}

void save_lut(const LutTable& table, const std::string& path) {
    write_file(path, encode_lut(table));
}

LutTable load_lut(const std::string& path) {
    try {
        return decode_lut(read_file(path));
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

NetworkConfig config_from_model(const ModelFile& model) {
    NetworkConfig cfg;
    cfg.fmt = model.fmt;
    if (model.weights.size() < 2) throw std::runtime_error("model must have at least two layers");
    cfg.input_dim = model.weights.front().cols;
    cfg.output_dim = model.weights.back().rows;
    for (std::size_t l = 0; l + 1 < model.weights.size(); ++l) {
        if (model.weights[l].rows != model.weights[l + 1].cols)
            throw std::runtime_error("layer shapes do not chain");
        cfg.hidden_dims.push_back(model.weights[l].rows);
    }
    cfg.activations.assign(cfg.hidden_dims.size(), model.activation);
    // Evaluation-only defaults; gamma is unused but must validate.
    cfg.gamma = quantize(std::min(0.5, real_max(cfg.fmt)), cfg.fmt);
    if (cfg.gamma.raw <= 0) cfg.gamma.raw = 1;
    validate_config(cfg);
    return cfg;
}

}  // namespace gnnsim
