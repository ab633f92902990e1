#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "gnnsim/dataset.hpp"
#include "gnnsim/rng.hpp"
#include "gnnsim/scheduler.hpp"

using namespace gnnsim;

namespace {

NetworkConfig make_config(int input, std::vector<int> hidden, int output, int bank) {
    NetworkConfig cfg;
    cfg.input_dim = input;
    cfg.hidden_dims = std::move(hidden);
    cfg.output_dim = output;
    cfg.activations.assign(cfg.hidden_dims.size(), LutKind::tanh);
    cfg.bank_width = bank;
    cfg.gamma = quantize(0.5, cfg.fmt);
    return cfg;
}

std::uint64_t stage_cycles(const CycleReport& report, const std::string& name) {
    for (const StageCycles& s : report.stages)
        if (s.stage == name) return s.cycles;
    FAIL("missing stage ", name);
    return 0;
}

}  // namespace

TEST_CASE("forward cycle formula for a 3-4-2 network at bank width 1") {
    const NetworkConfig cfg = make_config(3, {4}, 2, 1);
    const CycleReport report = schedule_forward(cfg, 0);
    CHECK(stage_cycles(report, "fwd_l1_matvec") == 12);  // ceil(4/1)*3
    CHECK(stage_cycles(report, "fwd_out_matvec") == 8);  // ceil(2/1)*4
    CHECK(stage_cycles(report, "fwd_l1_act") == 4);
    CHECK(stage_cycles(report, "fwd_out_softmax") == 6);
    CHECK(report.total_forward == 12 + 4 + 8 + 6);
}

TEST_CASE("a wide bank collapses the matvec to one pass") {
    const NetworkConfig cfg = make_config(3, {4}, 2, 64);
    const CycleReport report = schedule_forward(cfg, 0);
    CHECK(stage_cycles(report, "fwd_l1_matvec") == 3);   // one pass, T cycles
    CHECK(stage_cycles(report, "fwd_out_matvec") == 4);
}

TEST_CASE("doubling the bank never increases any stage") {
    for (int b = 1; b <= 64; b *= 2) {
        const CycleReport narrow = schedule_forward(make_config(7, {13, 5}, 3, b), 0);
        const CycleReport wide = schedule_forward(make_config(7, {13, 5}, 3, 2 * b), 0);
        REQUIRE(narrow.stages.size() == wide.stages.size());
        for (std::size_t i = 0; i < narrow.stages.size(); ++i)
            CHECK(wide.stages[i].cycles <= narrow.stages[i].cycles);
    }
}

TEST_CASE("backward matvec cycles mirror forward for square layers") {
    const NetworkConfig cfg = make_config(6, {6, 6}, 6, 4);
    const CycleReport fwd = schedule_forward(cfg, 0);
    const CycleReport bwd = schedule_backward(cfg, 0);
    CHECK(stage_cycles(bwd, "bwd_l3_matvec_t") == stage_cycles(fwd, "fwd_out_matvec"));
    CHECK(stage_cycles(bwd, "bwd_l2_matvec_t") == stage_cycles(fwd, "fwd_l2_matvec"));
}

TEST_CASE("outer product cycles for the 3-4-2 output layer") {
    const NetworkConfig cfg = make_config(3, {4}, 2, 1);
    const CycleReport report = schedule_backward(cfg, 0);
    CHECK(stage_cycles(report, "bwd_l2_outer") == 8);  // 2*4 at B=1
    CHECK(stage_cycles(report, "bwd_l1_outer") == 12);
    CHECK(stage_cycles(report, "upd_l1_accu") == 12);
    CHECK(stage_cycles(report, "upd_l2_accu") == 8);
    CHECK(report.total_update == 20);
}

TEST_CASE("pipeline fill adds P per stage") {
    const NetworkConfig cfg = make_config(3, {4}, 2, 1);
    const CycleReport flat = schedule_forward(cfg, 0);
    const CycleReport filled = schedule_forward(cfg, kPipelineFill);
    CHECK(filled.total_forward == flat.total_forward + kPipelineFill * filled.stages.size());
}

TEST_CASE("epoch report composes forward, backward, update") {
    const NetworkConfig cfg = make_config(5, {9}, 4, 3);
    const CycleReport epoch = schedule_epoch(cfg, 0);
    const CycleReport fwd = schedule_forward(cfg, 0);
    const CycleReport bwd = schedule_backward(cfg, 0);
    CHECK(epoch.total_forward == fwd.total_forward);
    CHECK(epoch.total_backward == bwd.total_backward);
    CHECK(epoch.total_update == bwd.total_update);
    CHECK(epoch.total_epoch == epoch.total_forward + epoch.total_backward + epoch.total_update);

    std::uint64_t sum = 0;
    for (const StageCycles& s : epoch.stages) sum += s.cycles;
    CHECK(sum == epoch.total_epoch);
}

TEST_CASE("whole-epoch prediction scales linearly in the dataset") {
    const NetworkConfig cfg = make_config(4, {6}, 3, 2);
    const std::uint64_t one = predict_epoch_cycles(cfg, 10, 5);
    const std::uint64_t two = predict_epoch_cycles(cfg, 20, 5);
    CHECK(two == 2 * one);

    const CycleReport epoch = schedule_epoch(cfg, 0);
    CHECK(predict_epoch_cycles(cfg, 6, 2) ==
          6 * (epoch.total_forward + epoch.total_backward) + 3 * epoch.total_update);
}

TEST_CASE("resource estimate for the 784-64-10 reference config") {
    const NetworkConfig cfg = make_config(784, {64}, 10, 16);
    const ResourceReport report = estimate_resources(cfg);
    CHECK(report.weight_bits == 813056);  // (784*64 + 64*10) * 16
    CHECK(report.dsp_used == 32);
    CHECK(report.dsp_fits);
    CHECK(report.bram_fits);
    CHECK(report.bram_bits_used ==
          report.weight_bits + report.activation_bits + report.lut_bits);
    CHECK(report.lut_bits == 3 * 1024 * 16);  // tanh, tanh', exp
}

TEST_CASE("oversized banks exceed the DSP budget") {
    const ResourceReport report = estimate_resources(make_config(4, {4}, 2, 3000));
    CHECK_FALSE(report.dsp_fits);
    CHECK_FALSE(report.fits());
}

TEST_CASE("resources grow monotonically with hidden width") {
    const ResourceReport narrow = estimate_resources(make_config(8, {16}, 4, 8));
    const ResourceReport wide = estimate_resources(make_config(8, {32}, 4, 8));
    CHECK(wide.bram_bits_used > narrow.bram_bits_used);
}

TEST_CASE("report text format") {
    const NetworkConfig cfg = make_config(3, {4}, 2, 1);
    const std::string text = format_report(schedule_epoch(cfg, 0), estimate_resources(cfg));

    CHECK(text.find("fwd_l1_matvec\tmult-add bank\t12\n") != std::string::npos);
    CHECK(text.find("fwd_out_softmax\tsoftmax\t6\n") != std::string::npos);
    CHECK(text.find("TOTAL_FORWARD\t30\n") != std::string::npos);
    CHECK(text.find("TOTAL_BACKWARD\t") != std::string::npos);
    CHECK(text.find("TOTAL_EPOCH\t") != std::string::npos);
    CHECK(text.find("DSP_USED/2520\t2\n") != std::string::npos);
    CHECK(text.find("BRAM_BITS_USED/33554432\t") != std::string::npos);

    // Every stage row is stage<TAB>unit<TAB>cycles.
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        const std::size_t first = line.find('\t');
        REQUIRE(first != std::string::npos);
    }
}
