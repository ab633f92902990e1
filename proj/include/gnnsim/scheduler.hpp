#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gnnsim/network.hpp"

// Closed-form cycle model of the control unit, plus a DSP/BRAM estimate
// against the ZU9CG device budget. Predictions carry an optional pipeline
// fill constant P per stage; with P = 0 they must equal the cycles the
// datapath actually reports, exactly.

namespace gnnsim {

enum class Unit : std::uint8_t {
    mult_add_bank,
    tanh_bank,
    softmax,
    mult,
    accu,
};

const char* unit_name(Unit unit);

struct StageCycles {
    std::string stage;
    Unit unit = Unit::mult_add_bank;
    std::uint64_t cycles = 0;
};

struct CycleReport {
    std::vector<StageCycles> stages;
    std::uint64_t total_forward = 0;
    std::uint64_t total_backward = 0;  // per-sample backward work
    std::uint64_t total_update = 0;    // per-batch accu work
    std::uint64_t total_epoch = 0;     // one sample forward + backward + update
};

// Default pipeline fill charged per stage entry.
inline constexpr std::uint64_t kPipelineFill = 4;

CycleReport schedule_forward(const NetworkConfig& cfg, std::uint64_t fill = kPipelineFill);
// Includes the per-batch accu stages, reported under total_update.
CycleReport schedule_backward(const NetworkConfig& cfg, std::uint64_t fill = kPipelineFill);
// Forward + backward + update with total_epoch filled in.
CycleReport schedule_epoch(const NetworkConfig& cfg, std::uint64_t fill = kPipelineFill);

// Whole-epoch prediction for a dataset of n samples in batches of m:
// n * (forward + backward) + ceil(n/m) * update.
std::uint64_t predict_epoch_cycles(const NetworkConfig& cfg, int n_samples, int batch_size,
                                   std::uint64_t fill = 0);

inline constexpr std::uint64_t kDspBudget = 2520;
inline constexpr std::uint64_t kBramBudgetBits = 32ULL << 20;

struct ResourceReport {
    std::uint64_t dsp_used = 0;
    std::uint64_t bram_bits_used = 0;
    std::uint64_t weight_bits = 0;
    std::uint64_t activation_bits = 0;
    std::uint64_t lut_bits = 0;
    bool dsp_fits = false;
    bool bram_fits = false;

    bool fits() const { return dsp_fits && bram_fits; }
};

ResourceReport estimate_resources(const NetworkConfig& cfg);

// Line-oriented text: one "stage<TAB>unit<TAB>cycles" row per entry, then
// the TOTAL_* and budget summary lines.
std::string format_report(const CycleReport& cycles, const ResourceReport& resources);

}  // namespace gnnsim
