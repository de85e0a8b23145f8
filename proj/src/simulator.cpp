// SPDX-License-Identifier: Apache-2.0
#include "acn/simulator.hpp"

#include "acn/error.hpp"
#include "acn/rng.hpp"

#include <string>

namespace acn {

namespace {

void require_width(std::size_t expected, BitSpan x)
{
    if (x.size() != expected)
        throw Error(ErrorCode::DimensionMismatch,
                    "input has " + std::to_string(x.size()) + " bits, neuron expects " + std::to_string(expected));
}

double switched_on(const SparseValues& caps, BitSpan x)
{
    double on = 0.0;
    for (const auto& [i, c] : caps)
        if (x[i] != 0)
            on += c;
    return on;
}

double switched_off(const SparseValues& caps, BitSpan x)
{
    double off = 0.0;
    for (const auto& [i, c] : caps)
        if (x[i] == 0)
            off += c;
    return off;
}

// Dense per-index view for the verification loop. Accumulation order matches
// switched_on(), so results are bit-identical to membrane_voltages().
struct DenseAcn {
    std::vector<double> pos;
    std::vector<double> neg;
    double cb_pos;
    double cb_neg;
    double ca_pos;
    double ca_neg;

    explicit DenseAcn(const MappedAcn& m)
        : pos(m.size, 0.0), neg(m.size, 0.0), cb_pos(m.cb_pos), cb_neg(m.cb_neg), ca_pos(m.ca_pos()),
          ca_neg(m.ca_neg())
    {
        for (const auto& [i, c] : m.cap_pos)
            pos[i] = c;
        for (const auto& [i, c] : m.cap_neg)
            neg[i] = c;
    }

    double delta_vm(BitSpan x, double v_pc) const
    {
        double on_pos = 0.0;
        double on_neg = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] == 0)
                continue;
            on_pos += pos[i]; // adding an absent (0.0) entry is exact
            on_neg += neg[i];
        }
        return v_pc * ((on_pos + cb_pos) / ca_pos) - v_pc * ((on_neg + cb_neg) / ca_neg);
    }
};

} // namespace

double an_margin(const NeuronSpec& spec, BitSpan x)
{
    require_width(spec.size(), x);
    double dot = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != 0)
            dot += spec.weights[i];
    return dot - spec.bias;
}

bool an_output(const NeuronSpec& spec, BitSpan x)
{
    require_width(spec.size(), x);
    double dot = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != 0)
            dot += spec.weights[i];
    return dot >= spec.bias;
}

MembraneVoltages membrane_voltages(const MappedAcn& m, BitSpan x, double v_pc, double v_b)
{
    require_width(m.size, x);
    if (v_pc < 0.0)
        throw Error(ErrorCode::InvalidArgument, "power clock voltage must be non-negative");
    MembraneVoltages v;
    v.pos = v_b + v_pc * ((switched_on(m.cap_pos, x) + m.cb_pos) / m.ca_pos());
    v.neg = v_b + v_pc * ((switched_on(m.cap_neg, x) + m.cb_neg) / m.ca_neg());
    return v;
}

MembraneVoltages membrane_voltages_on_off(const MappedAcn& m, BitSpan x, double v_pc, double v_b)
{
    require_width(m.size, x);
    const double on_pos = switched_on(m.cap_pos, x) + m.cb_pos;
    const double off_pos = switched_off(m.cap_pos, x) + m.cd_pos + m.par_pos;
    const double on_neg = switched_on(m.cap_neg, x) + m.cb_neg;
    const double off_neg = switched_off(m.cap_neg, x) + m.cd_neg + m.par_neg;
    return {v_b + v_pc * on_pos / (on_pos + off_pos), v_b + v_pc * on_neg / (on_neg + off_neg)};
}

double delta_vm(const MappedAcn& m, BitSpan x, double v_max)
{
    const MembraneVoltages v = membrane_voltages(m, x, v_max, 0.0);
    return v.pos - v.neg;
}

EvalResult acn_output(const MappedAcn& m, BitSpan x, double v_pc, double v_b)
{
    const MembraneVoltages v = membrane_voltages(m, x, v_pc, v_b);
    EvalResult r;
    r.vm_pos = v.pos;
    r.vm_neg = v.neg;
    r.delta_vm = v.pos - v.neg;
    r.output = r.delta_vm >= 0.0;
    return r;
}

std::vector<double> normalized_cap_vector(const MappedAcn& m)
{
    const double ca_pos = m.ca_pos();
    const double ca_neg = m.ca_neg();
    std::vector<double> c(m.size + (is_vectored(m.kind) ? 1 : 0), 0.0);
    for (const auto& [i, v] : m.cap_pos)
        c[i] += v / ca_pos;
    for (const auto& [i, v] : m.cap_neg)
        c[i] -= v / ca_neg;
    if (is_vectored(m.kind))
        c[m.size] = m.cb_pos / ca_pos - m.cb_neg / ca_neg;
    return c;
}

double bias_offset(const MappedAcn& m)
{
    if (is_vectored(m.kind))
        return 0.0;
    return m.cb_pos / m.ca_pos() - m.cb_neg / m.ca_neg();
}

BitVector augmented_input(const MappedAcn& m, BitSpan x)
{
    require_width(m.size, x);
    BitVector out(x.begin(), x.end());
    if (is_vectored(m.kind))
        out.push_back(1);
    return out;
}

BitVector input_from_index(std::uint64_t k, std::size_t n)
{
    BitVector x(n, 0);
    for (std::size_t i = 0; i < n && i < 64; ++i)
        x[i] = static_cast<std::uint8_t>((k >> i) & 1U);
    return x;
}

BitVector sampled_input(std::uint64_t seed, std::uint64_t stream, std::uint64_t sample, std::size_t n)
{
    rng::Stream s(rng::derive_key(seed, stream, sample));
    BitVector x(n, 0);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i % 64 == 0)
            word = s.next_u64();
        x[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1U);
    }
    return x;
}

std::uint64_t check_count(const VerifyStrategy& strategy, std::size_t n)
{
    if (strategy.kind == VerifyStrategy::Kind::Sampled)
        return strategy.count;
    if (n > kMaxExhaustiveInputs)
        throw Error(ErrorCode::TooLargeForExhaustive,
                    "exhaustive verification limited to " + std::to_string(kMaxExhaustiveInputs) + " inputs, got "
                        + std::to_string(n));
    return std::uint64_t{1} << n;
}

std::vector<Mismatch> verify_equivalence(const NeuronSpec& spec, const MappedAcn& m, const VerifyStrategy& strategy,
                                         double v_max)
{
    if (spec.size() != m.size)
        throw Error(ErrorCode::DimensionMismatch, "spec '" + spec.name + "' has " + std::to_string(spec.size())
                                                      + " weights, mapping has " + std::to_string(m.size));
    const std::uint64_t total = check_count(strategy, spec.size());
    const DenseAcn dense(m);

    std::vector<Mismatch> out;
    BitVector x(spec.size(), 0);
    for (std::uint64_t k = 0; k < total; ++k) {
        if (strategy.kind == VerifyStrategy::Kind::Exhaustive)
            x = input_from_index(k, spec.size());
        else
            x = sampled_input(strategy.seed, strategy.stream, k, spec.size());
        const bool reference = an_output(spec, x);
        const double dv = dense.delta_vm(x, v_max);
        const bool hardware = dv >= 0.0;
        if (reference != hardware)
            out.push_back({k, x, dv, an_margin(spec, x), reference, hardware});
    }
    return out;
}

} // namespace acn
