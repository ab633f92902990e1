#include "gnnsim/dataset.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace gnnsim {

SignalVector Dataset::sample(int i) const {
    if (i < 0 || i >= size()) throw std::invalid_argument("sample index out of range");
    SignalVector v{fmt_, {}};
    const std::size_t base = std::size_t(i) * std::size_t(feature_dim_);
    v.raw.assign(features_.begin() + long(base), features_.begin() + long(base + std::size_t(feature_dim_)));
    return v;
}

void Dataset::append(const std::vector<double>& features, int label) {
    if (int(features.size()) != feature_dim_) throw std::invalid_argument("feature arity mismatch");
    if (label < 0 || label >= num_classes_) throw std::invalid_argument("label out of range");
    for (double f : features) features_.push_back(quantize(f, fmt_).raw);
    labels_.push_back(label);
}

namespace {

[[noreturn]] void fail_line(int line_no, const std::string& what) {
    std::ostringstream msg;
    msg << "line " << line_no << ": " << what;
    throw std::runtime_error(msg.str());
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

}  // namespace

Dataset parse_dataset_csv(const std::string& text, int feature_dim, int num_classes,
                          const QFormat& fmt) {
    if (feature_dim < 1) throw std::invalid_argument("feature_dim must be >= 1");
    if (num_classes < 2) throw std::invalid_argument("num_classes must be >= 2");
    validate_format(fmt);

    Dataset data(fmt, feature_dim, num_classes);
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            // A blank line is permitted only as a trailing terminator.
            if (in.peek() != std::istringstream::traits_type::eof())
                fail_line(line_no, "blank line inside dataset");
            break;
        }

        const std::vector<std::string> fields = split_fields(line);
        if (int(fields.size()) != feature_dim + 1)
            fail_line(line_no, "expected " + std::to_string(feature_dim + 1) + " fields, got " +
                                   std::to_string(int(fields.size())));

        char* end = nullptr;
        const long label = std::strtol(fields[0].c_str(), &end, 10);
        if (end == fields[0].c_str() || *end != '\0')
            fail_line(line_no, "malformed label '" + fields[0] + "'");
        if (label < 0 || label >= num_classes)
            fail_line(line_no, "label " + std::to_string(label) + " out of range [0, " +
                                   std::to_string(num_classes) + ")");

        std::vector<double> features(static_cast<std::size_t>(feature_dim));
        for (int f = 0; f < feature_dim; ++f) {
            const std::string& field = fields[std::size_t(f) + 1];
            const double value = std::strtod(field.c_str(), &end);
            if (end == field.c_str() || *end != '\0')
                fail_line(line_no, "malformed feature '" + field + "'");
            if (!std::isfinite(value)) fail_line(line_no, "non-finite feature");
            features[std::size_t(f)] = value;
        }
        data.append(features, int(label));
    }
    if (data.size() == 0) throw std::runtime_error("empty dataset");
    return data;
}

Dataset load_dataset_csv(const std::string& path, int feature_dim, int num_classes,
                         const QFormat& fmt) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_dataset_csv(buf.str(), feature_dim, num_classes, fmt);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

}  // namespace gnnsim
