#pragma once

#include <string>
#include <vector>

#include "gnnsim/datapath.hpp"

namespace gnnsim {

// Labeled feature vectors, quantized on load. CSV rows are label-first:
//   <label>,<f1>,...,<fD>
// with no header, LF or CRLF line ends, and an optional trailing newline.
class Dataset {
public:
    Dataset(QFormat fmt, int feature_dim, int num_classes)
        : fmt_(fmt), feature_dim_(feature_dim), num_classes_(num_classes) {}

    int size() const { return int(labels_.size()); }
    int feature_dim() const { return feature_dim_; }
    int num_classes() const { return num_classes_; }
    const QFormat& fmt() const { return fmt_; }

    int label(int i) const { return labels_[std::size_t(i)]; }
    SignalVector sample(int i) const;

    void append(const std::vector<double>& features, int label);

    bool operator==(const Dataset&) const = default;

private:
    QFormat fmt_;
    int feature_dim_;
    int num_classes_;
    std::vector<std::int32_t> features_;  // row-major, quantized
    std::vector<int> labels_;
};

Dataset load_dataset_csv(const std::string& path, int feature_dim, int num_classes,
                         const QFormat& fmt);

// Same parser over in-memory text; the file loader delegates here.
Dataset parse_dataset_csv(const std::string& text, int feature_dim, int num_classes,
                          const QFormat& fmt);

}  // namespace gnnsim
