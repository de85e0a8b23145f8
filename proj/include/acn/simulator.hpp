// SPDX-License-Identifier: Apache-2.0
//
// Ideal behavioral model of the dual-tree capacitive neuron: two capacitive
// dividers driven by the power clock and a comparator, sampled at the clock
// peak. Also the abstract reference neuron and the equivalence checker.
#pragma once

#include "acn/model.hpp"

#include <cstdint>
#include <vector>

namespace acn {

/// w.x - tau; the reference neuron fires when this is >= 0.
double an_margin(const NeuronSpec& spec, BitSpan x);

bool an_output(const NeuronSpec& spec, BitSpan x);

struct MembraneVoltages {
    double pos = 0.0;
    double neg = 0.0;
};

/// Divider form: v = V_B + V_pc * (sum C_i x_i + C_b) / C_A per tree.
MembraneVoltages membrane_voltages(const MappedAcn& m, BitSpan x, double v_pc, double v_b = 0.0);

/// Same voltages from the switched-on/switched-off split, C_on / (C_on + C_off).
MembraneVoltages membrane_voltages_on_off(const MappedAcn& m, BitSpan x, double v_pc, double v_b = 0.0);

double delta_vm(const MappedAcn& m, BitSpan x, double v_max);

/// Comparator output at V_pc = v_pc; ties (delta_vm == 0) resolve to 1.
EvalResult acn_output(const MappedAcn& m, BitSpan x, double v_pc = 1.0, double v_b = 0.0);

/// Signed vector C with delta_vm = V_max * (C.x + bias_offset). Component i is
/// +C_i+/C_A+ or -C_i-/C_A-. Vectored mappings get an extra always-on
/// component N carrying the folded bias, and their bias_offset is zero.
std::vector<double> normalized_cap_vector(const MappedAcn& m);

/// cb+/C_A+ - cb-/C_A- for non-vectored mappings (0 for vectored ones).
double bias_offset(const MappedAcn& m);

/// Input extended with the always-on slot when the mapping is vectored.
BitVector augmented_input(const MappedAcn& m, BitSpan x);

/// Bits of input number k: x_i = (k >> i) & 1.
BitVector input_from_index(std::uint64_t k, std::size_t n);

/// Uniform random input keyed by (seed, stream, sample).
BitVector sampled_input(std::uint64_t seed, std::uint64_t stream, std::uint64_t sample, std::size_t n);

inline constexpr std::size_t kMaxExhaustiveInputs = 24;

struct VerifyStrategy {
    enum class Kind { Exhaustive, Sampled };
    Kind kind = Kind::Exhaustive;
    std::uint64_t count = 0; // sampled only
    std::uint64_t seed = 0;
    std::uint64_t stream = 0; // usually the neuron index

    static VerifyStrategy exhaustive() { return {}; }
    static VerifyStrategy sampled(std::uint64_t count, std::uint64_t seed, std::uint64_t stream = 0)
    {
        return {Kind::Sampled, count, seed, stream};
    }
};

struct Mismatch {
    std::uint64_t input_index = 0; // input number (exhaustive) or sample number
    BitVector x;
    double delta_vm = 0.0;
    double margin = 0.0; // w.x - tau
    bool an = false;
    bool acn = false;
};

/// Number of inputs the strategy checks for a neuron of width n.
std::uint64_t check_count(const VerifyStrategy& strategy, std::size_t n);

/// Every input where the reference neuron and the mapped circuit disagree,
/// ordered by input index. Evaluated at V_pc = v_max.
std::vector<Mismatch> verify_equivalence(const NeuronSpec& spec, const MappedAcn& m, const VerifyStrategy& strategy,
                                         double v_max = 1.0);

} // namespace acn
