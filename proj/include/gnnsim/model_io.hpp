#pragma once

#include <string>
#include <vector>

#include "gnnsim/lut.hpp"
#include "gnnsim/network.hpp"

// Binary artifacts. All multi-byte integers are little-endian; raw
// fixed-point entries are two's-complement in ceil(total_bits/8) bytes.
//
// Model ("GNN1"): magic, u8 total_bits, u8 frac_bits, u8 activation code,
// u8 reserved=0, u32 layer_count, per layer (u32 in_dim, u32 out_dim),
// then each weight matrix row-major. Save/load/save is byte-exact.
//
// LUT dump ("LUT1"): magic, u8 kind, u8 total_bits, u8 frac_bits,
// u8 reserved=0, f64 x_min, f64 x_max, u32 n, then the n raw entries.

namespace gnnsim {

struct ModelFile {
    QFormat fmt;
    LutKind activation = LutKind::tanh;
    std::vector<WeightMatrix> weights;
};

std::vector<std::uint8_t> encode_model(const ModelFile& model);
ModelFile decode_model(const std::vector<std::uint8_t>& bytes);
void save_model(const ModelFile& model, const std::string& path);
ModelFile load_model(const std::string& path);

std::vector<std::uint8_t> encode_lut(const LutTable& table);
LutTable decode_lut(const std::vector<std::uint8_t>& bytes);
void save_lut(const LutTable& table, const std::string& path);
LutTable load_lut(const std::string& path);

// Reconstructs a runnable network from a model file: dimensions and format
// from the header, default bank width and LUT parameters.
NetworkConfig config_from_model(const ModelFile& model);

}  // namespace gnnsim
