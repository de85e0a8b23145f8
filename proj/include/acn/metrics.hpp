// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "acn/model.hpp"

#include <span>
#include <vector>

namespace acn {

/// Comparator tolerance used for the instability metric unless overridden.
inline constexpr double kDefaultInstabilityTolerance = 5e-3; // volts

/// Fraction of inputs whose |delta_vm| at V_pc = v_max falls below tol.
double instability(const MappedAcn& m, std::span<const BitVector> inputs, double tol, double v_max = 1.0);

/// Euclidean norm of normalized_cap_vector().
double cap_vec_norm(const MappedAcn& m);

struct SwingRange {
    VoltageInterval pos;
    VoltageInterval neg;
};

/// Membrane voltage range at the sampling instant: all inputs off to all on.
SwingRange swing_range(const MappedAcn& m, double v_max);

/// Cosine of the angle between a signed vector and a binary input.
double cos_theta(std::span<const double> v, BitSpan x);

MeanDev mean_dev(std::span<const double> values);

LayerAggregates layer_stats(std::span<const MappedAcn> layer);

/// Per-neuron records plus aggregates. Psi is filled in when inputs are given.
MappingReport build_report(std::span<const MappedAcn> layer, double v_max, std::span<const BitVector> inputs = {},
                           double tol = kDefaultInstabilityTolerance);

/// Aggregates recomputed from the records alone (records carry every field needed).
LayerAggregates aggregate_records(std::span<const NeuronRecord> records);

} // namespace acn
