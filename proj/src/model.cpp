// SPDX-License-Identifier: Apache-2.0
#include "acn/model.hpp"

#include "acn/error.hpp"

#include <cmath>

namespace acn {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::AllZeroWeights: return "AllZeroWeights";
    case ErrorCode::WeightNormExceedsVmax: return "WeightNormExceedsVmax";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::TooLargeForExhaustive: return "TooLargeForExhaustive";
    case ErrorCode::NotUnitQuantized: return "NotUnitQuantized";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaVersionError: return "SchemaVersionError";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

int exit_code(ErrorCode code)
{
    // 0 = success, 1 = verification mismatches, 2 = command-line usage.
    switch (code) {
    case ErrorCode::InvalidArgument: return 2;
    case ErrorCode::ParseError: return 3;
    case ErrorCode::SchemaVersionError: return 4;
    case ErrorCode::InvariantViolation: return 5;
    case ErrorCode::AllZeroWeights: return 6;
    case ErrorCode::WeightNormExceedsVmax: return 7;
    case ErrorCode::TooLargeForExhaustive: return 8;
    case ErrorCode::NotUnitQuantized: return 9;
    case ErrorCode::IoError: return 10;
    case ErrorCode::DimensionMismatch: return 11;
    case ErrorCode::SchemaMismatch: return 12;
    }
    return 70;
}

void validate(const NeuronSpec& spec)
{
    if (spec.weights.empty())
        throw Error(ErrorCode::InvariantViolation, "neuron '" + spec.name + "' has no weights");
    if (!std::isfinite(spec.bias))
        throw Error(ErrorCode::InvariantViolation, "neuron '" + spec.name + "' has a non-finite bias");
    for (std::size_t i = 0; i < spec.weights.size(); ++i) {
        const double w = spec.weights[i];
        if (!std::isfinite(w))
            throw Error(ErrorCode::InvariantViolation,
                        "neuron '" + spec.name + "' weight " + std::to_string(i) + " is not finite");
        if (spec.quantization.kind == QuantizationKind::Binary && w != 1.0 && w != -1.0)
            throw Error(ErrorCode::InvariantViolation, "neuron '" + spec.name + "' is tagged binary but weight "
                                                           + std::to_string(i) + " is not +/-1");
    }
    if (spec.quantization.kind == QuantizationKind::KBit && spec.quantization.bits < 1)
        throw Error(ErrorCode::InvariantViolation, "neuron '" + spec.name + "' kbit quantization needs bits >= 1");
}

void validate(const TechConstraints& tech)
{
    if (!(tech.c_min > 0.0))
        throw Error(ErrorCode::InvalidArgument, "c_min must be positive");
    if (!(tech.v_max > 0.0))
        throw Error(ErrorCode::InvalidArgument, "v_max must be positive");
    if (tech.pillar_bias < 0.0 || tech.pillar_ballast < 0.0)
        throw Error(ErrorCode::InvalidArgument, "pillars must be non-negative");
    if (tech.parasitic_pos < 0.0 || tech.parasitic_neg < 0.0)
        throw Error(ErrorCode::InvalidArgument, "parasitic estimates must be non-negative");
}

void refresh_totals(MappedAcn& m)
{
    double pos = 0.0;
    for (const auto& [i, c] : m.cap_pos)
        pos += c;
    double neg = 0.0;
    for (const auto& [i, c] : m.cap_neg)
        neg += c;
    m.ct_pos = pos;
    m.ct_neg = neg;
    m.diagnostics.ca_pos = m.ca_pos();
    m.diagnostics.ca_neg = m.ca_neg();
}

std::string to_string(MappingKind kind)
{
    switch (kind) {
    case MappingKind::Conditional: return "conditional";
    case MappingKind::ConditionalVectoredBias: return "vectored";
    case MappingKind::Balanced: return "balanced";
    case MappingKind::Relu: return "relu";
    }
    return "unknown";
}

MappingKind parse_mapping_kind(const std::string& text)
{
    if (text == "conditional")
        return MappingKind::Conditional;
    if (text == "vectored" || text == "conditional_vectored_bias")
        return MappingKind::ConditionalVectoredBias;
    if (text == "balanced")
        return MappingKind::Balanced;
    if (text == "relu")
        return MappingKind::Relu;
    throw Error(ErrorCode::InvalidArgument, "unknown mapping kind '" + text + "'");
}

std::string to_string(QuantizationKind kind)
{
    switch (kind) {
    case QuantizationKind::Real: return "real";
    case QuantizationKind::KBit: return "kbit";
    case QuantizationKind::Binary: return "binary";
    }
    return "unknown";
}

} // namespace acn
