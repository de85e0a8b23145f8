// SPDX-License-Identifier: Apache-2.0
//
// Experiment drivers: random-weight Monte Carlo sweeps, whole-layer
// evaluation against a software reference, and unit-capacitor tiling.
#pragma once

#include "acn/mapper.hpp"
#include "acn/model.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace acn {

/// Weights i.i.d. N(0, sigma^2). sigma = 0.1 is the "N(0, 0.01)" (variance) protocol.
struct SweepConfig {
    std::string label;
    std::size_t n = 8;
    std::size_t count = 10000;
    double sigma = 0.1;
    double tau = 0.0;
    MappingKind kind = MappingKind::Conditional;
    double ct = 100.0;
    double pillar_bias = 0.0;
    double pillar_ballast = 0.0;
    double v_max = 1.0;
    bool binarize = false;
    std::uint64_t seed = 1;
    std::size_t exhaustive_limit = 16; // above this, sampled verification
    std::uint64_t samples = 1024;      // per vector when sampled
    unsigned threads = 0;              // 0 = hardware concurrency
};

struct SweepResult {
    SweepConfig config;
    MappingReport report; // mapped vectors only
    std::size_t rejected = 0;
    std::uint64_t checks = 0;
    std::uint64_t mismatches = 0;
    double max_mismatch_margin = 0.0; // largest |w.x - tau| among mismatches
};

/// Weight vector number `index` of a sweep (before binarization).
std::vector<double> sweep_weights(const SweepConfig& config, std::size_t index);

SweepResult sweep_random(const SweepConfig& config);

/// Named reproductions of the random-vector tables: "table1-row1".."table1-row7",
/// "table2-n{8,16,32,64,784}-{real,binary}".
SweepConfig sweep_preset(const std::string& name);
std::vector<std::string> sweep_preset_names();

/// sign(w_i) with 0 -> +1; quantization tagged binary.
NeuronSpec binarize_weights(const NeuronSpec& spec);

struct LayerEvaluation {
    std::vector<MappedAcn> mapped;
    std::vector<NeuronSpec> effective; // hidden specs after pruning, i.e. what was mapped
    std::vector<BitVector> hardware_bits;
    std::vector<BitVector> software_bits;
    std::size_t bit_mismatches = 0;
    double agreement = 1.0; // fraction of (image, neuron) bits that match
    double psi = 0.0;       // over every (image, neuron) evaluation
    double mean_abs_dvm = 0.0;
    double max_abs_dvm = 0.0;
    std::vector<double> cos_theta; // per (image, neuron), skipped when undefined
    std::vector<int> hardware_class;
    std::vector<int> software_class;
    double hardware_accuracy = 0.0; // only when labels present
    double software_accuracy = 0.0;
    MappingReport report;
};

/// Maps the hidden layer, runs every corpus input through the mapped layer and
/// the software layer, and classifies with the readout on each set of bits.
LayerEvaluation evaluate_layer(const Network& network, const Corpus& corpus, const PipelineOptions& options,
                               double tol = 5e-3);

/// Same evaluation for a layer that was mapped elsewhere (e.g. loaded from a
/// mapping file). `mapped` must line up with network.hidden.
LayerEvaluation evaluate_mapped(const Network& network, std::vector<MappedAcn> mapped, const Corpus& corpus,
                                double v_max, double tol = 5e-3);

struct TreeTiles {
    std::vector<std::pair<std::size_t, long long>> synapses; // (index, tiles)
    long long bias = 0;
    long long ballast = 0;
    long long total = 0;
};

struct TilePlan {
    double unit = 0.0;
    TreeTiles pos;
    TreeTiles neg;
};

/// Every physical capacitor expressed as a count of equal unit capacitors.
TilePlan tile_plan(const MappedAcn& m, double unit);

struct BallastPoint {
    double phi_deg = 0.0;
    double cd_pos = 0.0;
    double cd_neg = 0.0;
    double cap_vec_norm = 0.0;
};

/// Conditional ballasts of the unit 2-weight neuron w = (cos phi, sin phi), tau = 0.
std::vector<BallastPoint> ballast_vs_direction(double ct, std::size_t steps);

} // namespace acn
