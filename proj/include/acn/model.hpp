// SPDX-License-Identifier: Apache-2.0
//
// Domain types for abstract neurons and their DTSC capacitive realization.
// All capacitances are femtofarads, all voltages volts.
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace acn {

using BitVector = std::vector<std::uint8_t>;
using BitSpan = std::span<const std::uint8_t>;

/// Sparse index -> value map; ordered so iteration is index-ascending.
using SparseValues = std::map<std::size_t, double>;

enum class QuantizationKind { Real, KBit, Binary };

struct Quantization {
    QuantizationKind kind = QuantizationKind::Real;
    int bits = 0; // only meaningful for KBit

    friend bool operator==(const Quantization&, const Quantization&) = default;
};

/// Abstract binary-activation neuron: y = 1 iff w.x >= tau.
struct NeuronSpec {
    std::string name;
    std::vector<double> weights;
    double bias = 0.0;
    Quantization quantization;

    std::size_t size() const { return weights.size(); }

    friend bool operator==(const NeuronSpec&, const NeuronSpec&) = default;
};

/// Throws InvariantViolation if the spec breaks a NeuronSpec invariant.
void validate(const NeuronSpec& spec);

/// Weights partitioned by sign. Negative magnitudes are stored positive.
struct SplitWeights {
    SparseValues positive;
    SparseValues negative;
    std::set<std::size_t> zeros;
    double wt_pos = 0.0;
    double wt_neg = 0.0;
    double wt = 0.0;

    double delta() const { return wt_pos - wt_neg; }
};

enum class MappingKind { Conditional, ConditionalVectoredBias, Balanced, Relu };

/// True for the mappings that fold tau into an always-on (N+1)th synapse.
constexpr bool is_vectored(MappingKind kind)
{
    return kind == MappingKind::ConditionalVectoredBias || kind == MappingKind::Relu;
}

struct Diagnostics {
    double delta = 0.0; // w_T+ - w_T-
    double ca_pos = 0.0;
    double ca_neg = 0.0;

    friend bool operator==(const Diagnostics&, const Diagnostics&) = default;
};

/// Physical DTSC neuron. `size` is the input width N; for vectored mappings
/// the -tau slot lives in cb_pos/cb_neg and is always switched on.
///
/// par_pos/par_neg model the parasitic capacitance to ground on each membrane
/// node. They are not capacitors the mapper instantiates, but they sit in
/// parallel with the ballast and therefore count toward C_A.
struct MappedAcn {
    std::string name;
    std::size_t size = 0;
    MappingKind kind = MappingKind::Conditional;

    SparseValues cap_pos;
    SparseValues cap_neg;
    double cb_pos = 0.0;
    double cb_neg = 0.0;
    double cd_pos = 0.0;
    double cd_neg = 0.0;

    double ct = 0.0;
    double ct_pos = 0.0;
    double ct_neg = 0.0;

    double par_pos = 0.0;
    double par_neg = 0.0;

    // Applied so far; provenance only, already included in cb/cd.
    double pillar_bias = 0.0;
    double pillar_ballast = 0.0;

    Diagnostics diagnostics;

    double ca_pos() const { return ct_pos + cb_pos + cd_pos + par_pos; }
    double ca_neg() const { return ct_neg + cb_neg + cd_neg + par_neg; }
    double sum_cd() const { return cd_pos + cd_neg; }

    /// Sum of every physical capacitor on both trees.
    double total_capacitance() const { return ct_pos + ct_neg + cb_pos + cb_neg + cd_pos + cd_neg; }

    friend bool operator==(const MappedAcn&, const MappedAcn&) = default;
};

/// Recompute ct_pos/ct_neg (index-ascending sums) and the C_A diagnostics.
void refresh_totals(MappedAcn& m);

struct TechConstraints {
    double c_min = 2.0;
    double pillar_bias = 0.0;
    double pillar_ballast = 0.0;
    double v_max = 1.0;
    double parasitic_pos = 0.0;
    double parasitic_neg = 0.0;
    double v_bias = 0.0;
};

void validate(const TechConstraints& tech);

struct EvalResult {
    double vm_pos = 0.0;
    double vm_neg = 0.0;
    double delta_vm = 0.0;
    bool output = false;
};

struct VoltageInterval {
    double lower = 0.0;
    double upper = 0.0;
};

struct NeuronRecord {
    std::string name;
    double ct = 0.0;
    double sum_cd = 0.0;
    double cap_vec_norm = 0.0;
    double total_capacitance = 0.0;
    std::optional<double> psi; // set when an input corpus was evaluated
    VoltageInterval swing_pos;
    VoltageInterval swing_neg;
};

struct MeanDev {
    double mean = 0.0;
    double dev = 0.0; // population standard deviation

    friend bool operator==(const MeanDev&, const MeanDev&) = default;
};

struct LayerAggregates {
    std::size_t neurons = 0;
    MeanDev ct;
    MeanDev sum_cd;
    MeanDev cap_vec_norm;
    double total_capacitance = 0.0;

    friend bool operator==(const LayerAggregates&, const LayerAggregates&) = default;
};

struct MappingReport {
    std::vector<NeuronRecord> records;
    LayerAggregates aggregates;
};

/// Real-valued output layer applied to the hidden bits (argmax classifier).
struct ReadoutLayer {
    std::vector<std::vector<double>> weights; // [output][hidden]
    std::vector<double> biases;

    friend bool operator==(const ReadoutLayer&, const ReadoutLayer&) = default;
};

/// One binary-activation hidden layer of abstract neurons plus an optional readout.
struct Network {
    std::string name;
    std::size_t inputs = 0;
    std::vector<NeuronSpec> hidden;
    std::optional<ReadoutLayer> readout;

    friend bool operator==(const Network&, const Network&) = default;
};

/// Binary input vectors with optional class labels (-1 when unlabeled).
struct Corpus {
    std::size_t width = 0;
    std::vector<BitVector> inputs;
    std::vector<int> labels;
};

std::string to_string(MappingKind kind);
MappingKind parse_mapping_kind(const std::string& text);
std::string to_string(QuantizationKind kind);

} // namespace acn
