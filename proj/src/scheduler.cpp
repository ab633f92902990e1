#include "gnnsim/scheduler.hpp"

#include <set>
#include <sstream>

namespace gnnsim {

const char* unit_name(Unit unit) {
    switch (unit) {
        case Unit::mult_add_bank: return "mult-add bank";
        case Unit::tanh_bank: return "tanh bank";
        case Unit::softmax: return "softmax";
        case Unit::mult: return "mult";
        case Unit::accu: return "accu";
    }
    return "?";
}

namespace {

std::uint64_t matvec_cycles(int rows, int cols, int bank_width) {
    return ceil_div(std::uint64_t(rows), std::uint64_t(bank_width)) * std::uint64_t(cols);
}

std::uint64_t lut_cycles(int dim, int bank_width) {
    return ceil_div(std::uint64_t(dim), std::uint64_t(bank_width));
}

std::uint64_t elementwise_cycles(int rows, int cols, int bank_width) {
    return ceil_div(std::uint64_t(rows) * std::uint64_t(cols), std::uint64_t(bank_width));
}

void add_stage(CycleReport& report, std::uint64_t& total, const std::string& stage, Unit unit,
               std::uint64_t cycles, std::uint64_t fill) {
    report.stages.push_back(StageCycles{stage, unit, cycles + fill});
    total += cycles + fill;
}

}  // namespace

CycleReport schedule_forward(const NetworkConfig& cfg, std::uint64_t fill) {
    validate_config(cfg);
    const std::vector<int> dims = cfg.dims();
    const int n_hidden = int(cfg.hidden_dims.size());

    CycleReport report;
    for (int l = 0; l < n_hidden; ++l) {
        const std::string tag = "fwd_l" + std::to_string(l + 1);
        add_stage(report, report.total_forward, tag + "_matvec", Unit::mult_add_bank,
                  matvec_cycles(dims[std::size_t(l) + 1], dims[std::size_t(l)], cfg.bank_width), fill);
        add_stage(report, report.total_forward, tag + "_act", Unit::tanh_bank,
                  lut_cycles(dims[std::size_t(l) + 1], cfg.bank_width), fill);
    }
    add_stage(report, report.total_forward, "fwd_out_matvec", Unit::mult_add_bank,
              matvec_cycles(cfg.output_dim, dims[std::size_t(n_hidden)], cfg.bank_width), fill);
    add_stage(report, report.total_forward, "fwd_out_softmax", Unit::softmax,
              3 * std::uint64_t(cfg.output_dim), fill);
    return report;
}

CycleReport schedule_backward(const NetworkConfig& cfg, std::uint64_t fill) {
    validate_config(cfg);
    const std::vector<int> dims = cfg.dims();
    const int n_layers = cfg.layer_count();

    CycleReport report;
    // Mirrors the backward walk: outer product for layer l, then the
    // transposed matvec and derivative LUT that produce the next delta.
    for (int l = n_layers - 1; l >= 0; --l) {
        const std::string tag = "bwd_l" + std::to_string(l + 1);
        add_stage(report, report.total_backward, tag + "_outer", Unit::mult,
                  elementwise_cycles(dims[std::size_t(l) + 1], dims[std::size_t(l)], cfg.bank_width),
                  fill);
        if (l == 0) break;
        add_stage(report, report.total_backward, tag + "_matvec_t", Unit::mult_add_bank,
                  matvec_cycles(dims[std::size_t(l)], dims[std::size_t(l) + 1], cfg.bank_width), fill);
        add_stage(report, report.total_backward, tag + "_deriv", Unit::tanh_bank,
                  lut_cycles(dims[std::size_t(l)], cfg.bank_width), fill);
    }
    for (int l = 0; l < n_layers; ++l) {
        add_stage(report, report.total_update, "upd_l" + std::to_string(l + 1) + "_accu", Unit::accu,
                  elementwise_cycles(dims[std::size_t(l) + 1], dims[std::size_t(l)], cfg.bank_width),
                  fill);
    }
    return report;
}

CycleReport schedule_epoch(const NetworkConfig& cfg, std::uint64_t fill) {
    CycleReport fwd = schedule_forward(cfg, fill);
    const CycleReport bwd = schedule_backward(cfg, fill);
    fwd.stages.insert(fwd.stages.end(), bwd.stages.begin(), bwd.stages.end());
    fwd.total_backward = bwd.total_backward;
    fwd.total_update = bwd.total_update;
    fwd.total_epoch = fwd.total_forward + fwd.total_backward + fwd.total_update;
    return fwd;
}

std::uint64_t predict_epoch_cycles(const NetworkConfig& cfg, int n_samples, int batch_size,
                                   std::uint64_t fill) {
    if (n_samples < 1 || batch_size < 1) throw std::invalid_argument("samples and batch must be >= 1");
    const CycleReport report = schedule_epoch(cfg, fill);
    const std::uint64_t batches = ceil_div(std::uint64_t(n_samples), std::uint64_t(batch_size));
    return std::uint64_t(n_samples) * (report.total_forward + report.total_backward) +
           batches * report.total_update;
}

ResourceReport estimate_resources(const NetworkConfig& cfg) {
    validate_config(cfg);
    const std::vector<int> dims = cfg.dims();
    const std::uint64_t word = std::uint64_t(cfg.fmt.total_bits);

    ResourceReport report;
    // One DSP per MAC unit; the backward mult/accu work runs on a second
    // bank of the same width.
    report.dsp_used = 2 * std::uint64_t(cfg.bank_width);

    for (std::size_t l = 0; l + 1 < dims.size(); ++l)
        report.weight_bits += std::uint64_t(dims[l]) * std::uint64_t(dims[l + 1]) * word;

    // S and M RAM per hidden layer, z and yhat for the output stage.
    for (int d : cfg.hidden_dims) report.activation_bits += 2 * std::uint64_t(d) * word;
    report.activation_bits += 2 * std::uint64_t(cfg.output_dim) * word;

    // One activation and one derivative table per distinct kind, plus exp.
    const std::set<LutKind> kinds(cfg.activations.begin(), cfg.activations.end());
    const std::uint64_t n_tables = 2 * std::uint64_t(kinds.size()) + 1;
    report.lut_bits = n_tables * std::uint64_t(cfg.lut_n) * word;

    report.bram_bits_used = report.weight_bits + report.activation_bits + report.lut_bits;
    report.dsp_fits = report.dsp_used <= kDspBudget;
    report.bram_fits = report.bram_bits_used <= kBramBudgetBits;
    return report;
}

std::string format_report(const CycleReport& cycles, const ResourceReport& resources) {
    std::ostringstream out;
    for (const StageCycles& s : cycles.stages)
        out << s.stage << '\t' << unit_name(s.unit) << '\t' << s.cycles << '\n';
    out << "TOTAL_FORWARD\t" << cycles.total_forward << '\n';
    out << "TOTAL_BACKWARD\t" << cycles.total_backward << '\n';
    out << "TOTAL_EPOCH\t" << cycles.total_epoch << '\n';
    out << "DSP_USED/" << kDspBudget << '\t' << resources.dsp_used << '\n';
    out << "BRAM_BITS_USED/" << kBramBudgetBits << '\t' << resources.bram_bits_used << '\n';
    return out.str();
}

}  // namespace gnnsim
