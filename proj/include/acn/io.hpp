// SPDX-License-Identifier: Apache-2.0
//
// Interchange files: networks and mapped netlists as versioned JSON with
// decimal-string values, binary input corpora as text, CSV reports and SVG plots.
#pragma once

#include "acn/harness.hpp"
#include "acn/model.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace acn::io {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kToolVersion = "0.1.0";

/// Shortest decimal that parses back to the same double.
std::string format_decimal(double value);

/// Strict decimal parse of the whole string; ParseError otherwise.
double parse_decimal(std::string_view text);

Network parse_network(std::string_view json_text);
std::string network_to_json(const Network& network);
Network load_network(const std::filesystem::path& path);
void save_network(const Network& network, const std::filesystem::path& path);

/// How a mapping file was produced.
struct Provenance {
    std::string mapping_kind;
    std::string ct_mode; // "explicit" or "select_ct"
    double ct = 0.0;     // explicit C_T, 0 when selected per neuron
    double c_min = 0.0;
    double v_max = 1.0;
    double pillar_bias = 0.0;
    double pillar_ballast = 0.0;
    double parasitic_pos = 0.0;
    double parasitic_neg = 0.0;
    double prune_threshold = 0.0;
    std::string source;
    std::string tool_version = std::string(kToolVersion);

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct MappingFile {
    Provenance provenance;
    std::vector<MappedAcn> neurons;
};

/// Capacitors per neuron sorted by tree (pos, neg), role (synapse, bias,
/// ballast) and index; every value in fF.
std::string mapping_to_json(std::span<const MappedAcn> layer, const Provenance& provenance);
MappingFile parse_mapping(std::string_view json_text);
void save_mapping(std::span<const MappedAcn> layer, const Provenance& provenance, const std::filesystem::path& path);
MappingFile load_mapping(const std::filesystem::path& path);

/// Text corpus: "# acn-corpus v1", "width <n>", then "<label> <bits>" per line.
Corpus parse_corpus(std::string_view text);
std::string corpus_to_text(const Corpus& corpus);
Corpus load_corpus(const std::filesystem::path& path);

/// Sweep config file: a JSON object (or array of objects), or key=value lines
/// with '#' comments. Keys mirror SweepConfig fields; "mapping" takes the
/// mapping kind name and "weights" takes real|binary. Unset keys keep defaults.
std::vector<SweepConfig> parse_sweep_config(std::string_view text);

std::string sweep_csv(std::span<const SweepResult> results);
std::string report_csv(const MappingReport& report);

std::string svg_histogram(std::span<const double> values, std::size_t bins, double lo, double hi,
                          const std::string& title, const std::string& x_label);

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

std::string svg_lines(std::span<const Series> series, const std::string& title, const std::string& x_label,
                      const std::string& y_label);

std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, std::string_view content);

/// FNV-1a 64 of a file's bytes, hex encoded, for run manifests.
std::string file_digest(const std::filesystem::path& path);

} // namespace acn::io
