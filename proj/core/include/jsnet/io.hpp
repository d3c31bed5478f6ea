#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "jsnet/dataset.hpp"
#include "jsnet/logistic.hpp"
#include "jsnet/network.hpp"

namespace jsnet::io {

// 12-significant-digit formatting (%.12g) used by every CSV writer.
std::string format_value(double v);

// Dataset CSV: header "label,x1,...,xd", one sample per row, labels 1-based
// and contiguous. Throws ParseError (with line number) on malformed input and
// LabelError on bad labels.
LabeledDataset load_dataset(const std::filesystem::path& path);
void save_dataset(const LabeledDataset& data, const std::filesystem::path& path);

// Numeric matrix from a comma- or tab-separated file; a single non-numeric
// leading row is treated as a header and skipped.
Eigen::MatrixXd load_matrix(const std::filesystem::path& path);

struct ModelProvenance {
    std::uint64_t seed = 0;
    std::string config_digest;  // FNV-1a hash of the canonical config string
};

// Model files are JSON. Doubles are written in shortest round-trip form, so
// save followed by load reproduces every weight bit-exactly.
void save_model(const WeightSet& weights, const ModelProvenance& provenance,
                const std::filesystem::path& path);
void save_model(const LlrModel& model, const ModelProvenance& provenance,
                const std::filesystem::path& path);

using AnyModel = std::variant<WeightSet, LlrModel>;

struct LoadedModel {
    AnyModel model;
    ModelProvenance provenance;
};

// Dispatches on the file's "kind" field. Malformed JSON, schema violations,
// unsupported format versions and structurally invalid weights all raise
// ParseError.
LoadedModel load_model(const std::filesystem::path& path);

// Binary 8-bit PGM (P5). Values are clamped to [0, 1]; 0 maps to black.
// Row 0 of the matrix is the top image row.
void write_pgm(const Eigen::MatrixXd& values, const std::filesystem::path& path);

// 64-bit FNV-1a as a 16-digit lowercase hex string.
std::string fnv1a_hex(std::string_view bytes);

}  // namespace jsnet::io
