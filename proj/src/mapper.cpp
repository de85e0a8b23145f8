// SPDX-License-Identifier: Apache-2.0
#include "acn/mapper.hpp"

#include "acn/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace acn {

namespace {

void require_positive_ct(double ct)
{
    if (!(ct > 0.0) || !std::isfinite(ct))
        throw Error(ErrorCode::InvalidArgument, "C_T must be positive and finite");
}

// Capacitance per unit weight. A neuron whose weights are all zero still needs
// a bias capacitor, so it is scaled by |tau| instead.
double unit_scale(const SplitWeights& split, double tau, double ct)
{
    const double denom = split.wt > 0.0 ? split.wt : std::abs(tau);
    return ct / denom;
}

// Synapses and (non-vectored) bias capacitors shared by conditional and balanced.
MappedAcn place_synapses_and_bias(const NeuronSpec& spec, const SplitWeights& split, double ct)
{
    const double scale = unit_scale(split, spec.bias, ct);

    MappedAcn m;
    m.name = spec.name;
    m.size = spec.size();
    m.ct = ct;
    for (const auto& [i, w] : split.positive)
        m.cap_pos.emplace(i, scale * w);
    for (const auto& [i, w] : split.negative)
        m.cap_neg.emplace(i, scale * w);
    if (spec.bias >= 0.0)
        m.cb_neg = spec.bias * scale;
    else
        m.cb_pos = -spec.bias * scale;
    m.diagnostics.delta = split.delta();
    refresh_totals(m);
    return m;
}

// Conditional ballast sizing on already-placed capacitors. The tie goes to the
// negative-ballast branch.
void size_conditional_ballast(MappedAcn& m)
{
    if (m.ct_pos >= m.ct_neg) {
        m.cd_neg = m.ct_pos - m.ct_neg + m.cb_pos;
        m.cd_pos = m.cb_neg;
    } else {
        m.cd_pos = m.ct_neg - m.ct_pos + m.cb_neg;
        m.cd_neg = m.cb_pos;
    }
    refresh_totals(m);
}

// Moves the folded -tau slot (index N of the augmented vector) into the bias
// capacitor of its tree.
void fold_slot_into_bias(MappedAcn& m, std::size_t slot)
{
    if (auto it = m.cap_pos.find(slot); it != m.cap_pos.end()) {
        m.cb_pos = it->second;
        m.cap_pos.erase(it);
    }
    if (auto it = m.cap_neg.find(slot); it != m.cap_neg.end()) {
        m.cb_neg = it->second;
        m.cap_neg.erase(it);
    }
    m.size = slot;
    refresh_totals(m);
}

} // namespace

SplitWeights split_weights(const NeuronSpec& spec)
{
    validate(spec);
    SplitWeights split;
    for (std::size_t i = 0; i < spec.weights.size(); ++i) {
        const double w = spec.weights[i];
        if (w > 0.0) {
            split.positive.emplace(i, w);
            split.wt_pos += w;
        } else if (w < 0.0) {
            split.negative.emplace(i, -w);
            split.wt_neg += -w;
        } else {
            split.zeros.insert(i);
        }
    }
    split.wt = split.wt_pos + split.wt_neg;
    if (split.wt == 0.0 && spec.bias == 0.0)
        throw Error(ErrorCode::AllZeroWeights, "neuron '" + spec.name + "' has all-zero weights and zero bias");
    return split;
}

NeuronSpec augment_bias(const NeuronSpec& spec)
{
    NeuronSpec out = spec;
    out.weights.push_back(-spec.bias);
    out.bias = 0.0;
    if (out.quantization.kind == QuantizationKind::Binary && spec.bias != 1.0 && spec.bias != -1.0)
        out.quantization = {};
    return out;
}

MappedAcn conditional_map(const NeuronSpec& spec, double ct)
{
    require_positive_ct(ct);
    const SplitWeights split = split_weights(spec);
    MappedAcn m = place_synapses_and_bias(spec, split, ct);
    m.kind = MappingKind::Conditional;
    size_conditional_ballast(m);
    return m;
}

MappedAcn vectored_bias_map(const NeuronSpec& spec, double ct)
{
    require_positive_ct(ct);
    validate(spec);
    const NeuronSpec augmented = augment_bias(spec);
    const SplitWeights split = split_weights(augmented);
    MappedAcn m = place_synapses_and_bias(augmented, split, ct);
    m.name = spec.name;
    m.kind = MappingKind::ConditionalVectoredBias;
    fold_slot_into_bias(m, spec.size());

    // Always-on slot counts as part of its tree's switched total; no bias term remains.
    const double pos = m.ct_pos + m.cb_pos;
    const double neg = m.ct_neg + m.cb_neg;
    if (pos >= neg) {
        m.cd_neg = pos - neg;
        m.cd_pos = 0.0;
    } else {
        m.cd_pos = neg - pos;
        m.cd_neg = 0.0;
    }
    refresh_totals(m);
    return m;
}

MappedAcn balanced_map(const NeuronSpec& spec, double ct)
{
    require_positive_ct(ct);
    const SplitWeights split = split_weights(spec);
    MappedAcn m = place_synapses_and_bias(spec, split, ct);
    m.kind = MappingKind::Balanced;
    m.cd_pos = m.ct_neg + m.cb_neg;
    m.cd_neg = m.ct_pos + m.cb_pos;
    refresh_totals(m);
    return m;
}

MappedAcn relu_map(const NeuronSpec& spec, double ct, double v_max)
{
    require_positive_ct(ct);
    if (!(v_max > 0.0))
        throw Error(ErrorCode::InvalidArgument, "v_max must be positive");
    validate(spec);
    const NeuronSpec augmented = augment_bias(spec);
    const SplitWeights split = split_weights(augmented);
    if (split.wt_pos > v_max || split.wt_neg > v_max)
        throw Error(ErrorCode::WeightNormExceedsVmax,
                    "neuron '" + spec.name + "': w_T+ = " + std::to_string(split.wt_pos) + ", w_T- = "
                        + std::to_string(split.wt_neg) + " exceed V_max = " + std::to_string(v_max));

    MappedAcn m = place_synapses_and_bias(augmented, split, ct);
    m.name = spec.name;
    m.kind = MappingKind::Relu;
    fold_slot_into_bias(m, spec.size());

    // Both trees total C_T * V_max / w_T, so every on-capacitor divides to |w_i| / V_max.
    const double tree_total = ct / split.wt * v_max;
    m.cd_pos = std::max(0.0, tree_total - (m.ct_pos + m.cb_pos));
    m.cd_neg = std::max(0.0, tree_total - (m.ct_neg + m.cb_neg));
    refresh_totals(m);
    return m;
}

MappedAcn map_neuron(const NeuronSpec& spec, MappingKind kind, double ct, double v_max)
{
    switch (kind) {
    case MappingKind::Conditional: return conditional_map(spec, ct);
    case MappingKind::ConditionalVectoredBias: return vectored_bias_map(spec, ct);
    case MappingKind::Balanced: return balanced_map(spec, ct);
    case MappingKind::Relu: return relu_map(spec, ct, v_max);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown mapping kind");
}

MappedAcn apply_pillars(const MappedAcn& m, const TechConstraints& tech)
{
    if (tech.pillar_bias < 0.0 || tech.pillar_ballast < 0.0)
        throw Error(ErrorCode::InvalidArgument, "pillars must be non-negative");
    MappedAcn out = m;
    out.cb_pos += tech.pillar_bias;
    out.cb_neg += tech.pillar_bias;
    out.cd_pos += tech.pillar_ballast;
    out.cd_neg += tech.pillar_ballast;
    out.pillar_bias += tech.pillar_bias;
    out.pillar_ballast += tech.pillar_ballast;
    refresh_totals(out);
    return out;
}

MappedAcn compensate_parasitics(const MappedAcn& m, const TechConstraints& tech)
{
    if (tech.parasitic_pos < 0.0 || tech.parasitic_neg < 0.0)
        throw Error(ErrorCode::InvalidArgument, "parasitic estimates must be non-negative");
    MappedAcn out = m;
    const double deficit_pos = std::max(0.0, tech.parasitic_pos - out.cd_pos);
    const double deficit_neg = std::max(0.0, tech.parasitic_neg - out.cd_neg);
    const double pillar = std::max(deficit_pos, deficit_neg);
    if (pillar > 0.0) {
        out.cd_pos += pillar;
        out.cd_neg += pillar;
        out.pillar_ballast += pillar;
    }
    out.cd_pos = std::max(0.0, out.cd_pos - tech.parasitic_pos);
    out.cd_neg = std::max(0.0, out.cd_neg - tech.parasitic_neg);
    out.par_pos += tech.parasitic_pos;
    out.par_neg += tech.parasitic_neg;
    refresh_totals(out);
    return out;
}

double select_ct(const NeuronSpec& spec, const TechConstraints& tech)
{
    validate(spec);
    if (!(tech.c_min > 0.0))
        throw Error(ErrorCode::InvalidArgument, "c_min must be positive");
    double wt = 0.0;
    double smallest = std::numeric_limits<double>::infinity();
    for (const double w : spec.weights) {
        if (w == 0.0)
            continue;
        wt += std::abs(w);
        smallest = std::min(smallest, std::abs(w));
    }
    if (wt == 0.0)
        throw Error(ErrorCode::AllZeroWeights, "neuron '" + spec.name + "' has no nonzero weight to size C_T");
    return tech.c_min * wt / smallest;
}

NeuronSpec prune(const NeuronSpec& spec, double threshold)
{
    if (!(threshold >= 0.0))
        throw Error(ErrorCode::InvalidArgument, "pruning threshold must be non-negative");
    validate(spec);
    NeuronSpec out = spec;
    bool changed = false;
    bool any_nonzero = false;
    for (double& w : out.weights) {
        if (std::abs(w) < threshold && w != 0.0) {
            w = 0.0;
            changed = true;
        }
        any_nonzero = any_nonzero || w != 0.0;
    }
    if (!any_nonzero && out.bias == 0.0)
        throw Error(ErrorCode::AllZeroWeights, "pruning removed every weight of neuron '" + spec.name + "'");
    if (changed && out.quantization.kind == QuantizationKind::Binary)
        out.quantization = {};
    return out;
}

std::string to_string(Tree tree)
{
    return tree == Tree::Pos ? "pos" : "neg";
}

std::string to_string(CapRole role)
{
    switch (role) {
    case CapRole::Synapse: return "synapse";
    case CapRole::Bias: return "bias";
    case CapRole::Ballast: return "ballast";
    }
    return "unknown";
}

std::vector<RealizabilityViolation> check_realizable(const MappedAcn& m, const TechConstraints& tech)
{
    const double floor = tech.c_min * (1.0 - kRealizableSlack);
    std::vector<RealizabilityViolation> out;
    auto audit = [&](Tree tree, CapRole role, std::size_t index, double value) {
        if (value > 0.0 && value < floor)
            out.push_back({tree, role, index, value});
    };
    for (const auto& [i, c] : m.cap_pos)
        audit(Tree::Pos, CapRole::Synapse, i, c);
    for (const auto& [i, c] : m.cap_neg)
        audit(Tree::Neg, CapRole::Synapse, i, c);
    audit(Tree::Pos, CapRole::Bias, 0, m.cb_pos);
    audit(Tree::Neg, CapRole::Bias, 0, m.cb_neg);
    audit(Tree::Pos, CapRole::Ballast, 0, m.cd_pos);
    audit(Tree::Neg, CapRole::Ballast, 0, m.cd_neg);
    return out;
}

} // namespace acn

namespace acn {

NeuronSpec pipeline_spec(const NeuronSpec& spec, const PipelineOptions& options)
{
    return options.prune_threshold > 0.0 ? prune(spec, options.prune_threshold) : spec;
}

double pipeline_ct(const NeuronSpec& pruned, const PipelineOptions& options)
{
    if (options.ct)
        return *options.ct;
    return select_ct(is_vectored(options.kind) ? augment_bias(pruned) : pruned, options.tech);
}

MappedAcn compile_neuron(const NeuronSpec& spec, const PipelineOptions& options)
{
    validate(options.tech);
    const NeuronSpec pruned = pipeline_spec(spec, options);
    const double ct = pipeline_ct(pruned, options);
    MappedAcn m = map_neuron(pruned, options.kind, ct, options.tech.v_max);
    if (options.tech.pillar_bias > 0.0 || options.tech.pillar_ballast > 0.0)
        m = apply_pillars(m, options.tech);
    if (options.tech.parasitic_pos > 0.0 || options.tech.parasitic_neg > 0.0)
        m = compensate_parasitics(m, options.tech);
    return m;
}

} // namespace acn
