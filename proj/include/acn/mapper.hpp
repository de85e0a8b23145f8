// SPDX-License-Identifier: Apache-2.0
//
// Weight-to-capacitance lowering passes. Every pass is a pure function that
// returns a new MappedAcn.
#pragma once

#include "acn/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace acn {

SplitWeights split_weights(const NeuronSpec& spec);

/// Appends w_N = -tau as an always-on weight and zeroes the bias.
NeuronSpec augment_bias(const NeuronSpec& spec);

/// Ballast on one tree only; minimizes sum C_d and maximizes |C|.
MappedAcn conditional_map(const NeuronSpec& spec, double ct);

/// Conditional mapping of the (N+1)-vector with tau folded in as weight -tau.
/// The folded slot is stored as the bias capacitor of whichever tree it lands on.
MappedAcn vectored_bias_map(const NeuronSpec& spec, double ct);

/// Ballast on both trees (C_d+ = C_T- + C_b-, C_d- = C_T+ + C_b+).
MappedAcn balanced_map(const NeuronSpec& spec, double ct);

/// Dot-product preserving mapping: V_max * C.x == w.x - tau for every input.
/// Requires w_T+ <= v_max and w_T- <= v_max on the augmented vector.
MappedAcn relu_map(const NeuronSpec& spec, double ct, double v_max);

/// Dispatch on kind; v_max is only used by the ReLU mapping.
MappedAcn map_neuron(const NeuronSpec& spec, MappingKind kind, double ct, double v_max = 1.0);

/// Adds equal bias and ballast pillars to both trees.
MappedAcn apply_pillars(const MappedAcn& m, const TechConstraints& tech);

/// Shrinks each ballast by the parasitic estimate on its node. If a ballast
/// would go negative, an equal ballast pillar of the larger deficit is added to
/// both trees first. The parasitics are recorded on the result.
MappedAcn compensate_parasitics(const MappedAcn& m, const TechConstraints& tech);

/// C_T = c_min * w_T / min|w_i| over nonzero weights, so the smallest synapse is c_min.
double select_ct(const NeuronSpec& spec, const TechConstraints& tech);

/// Zeroes every weight with |w_i| < threshold.
NeuronSpec prune(const NeuronSpec& spec, double threshold);

enum class Tree { Pos, Neg };
enum class CapRole { Synapse, Bias, Ballast };

std::string to_string(Tree tree);
std::string to_string(CapRole role);

struct RealizabilityViolation {
    Tree tree = Tree::Pos;
    CapRole role = CapRole::Synapse;
    std::size_t index = 0; // synapse index; 0 for bias/ballast
    double value = 0.0;
};

/// Relative slack below c_min still accepted, so values that equal c_min up to
/// rounding (e.g. after select_ct) are not reported.
inline constexpr double kRealizableSlack = 1e-9;

/// Every nonzero capacitor smaller than c_min. Zero-valued bias/ballast
/// entries are no-fits and pass.
std::vector<RealizabilityViolation> check_realizable(const MappedAcn& m, const TechConstraints& tech);

/// Full lowering pipeline for one neuron: prune, choose C_T, map, add pillars,
/// compensate parasitics.
struct PipelineOptions {
    MappingKind kind = MappingKind::Conditional;
    std::optional<double> ct;    // explicit C_T; otherwise select_ct()
    double prune_threshold = 0.0;
    TechConstraints tech;
};

/// The spec after pruning; what the mapped neuron is equivalent to.
NeuronSpec pipeline_spec(const NeuronSpec& spec, const PipelineOptions& options);

/// C_T the pipeline uses for an already-pruned spec. Vectored kinds size it on
/// the augmented vector so the folded bias is realizable too.
double pipeline_ct(const NeuronSpec& pruned, const PipelineOptions& options);

MappedAcn compile_neuron(const NeuronSpec& spec, const PipelineOptions& options);

} // namespace acn
