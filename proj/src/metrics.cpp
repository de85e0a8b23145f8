// SPDX-License-Identifier: Apache-2.0
#include "acn/metrics.hpp"

#include "acn/error.hpp"
#include "acn/simulator.hpp"

#include <cmath>

namespace acn {

double instability(const MappedAcn& m, std::span<const BitVector> inputs, double tol, double v_max)
{
    if (!(tol > 0.0))
        throw Error(ErrorCode::InvalidArgument, "instability tolerance must be positive");
    if (inputs.empty())
        throw Error(ErrorCode::InvalidArgument, "instability needs a non-empty input corpus");
    std::size_t unstable = 0;
    for (const BitVector& x : inputs)
        if (std::abs(delta_vm(m, x, v_max)) < tol)
            ++unstable;
    return static_cast<double>(unstable) / static_cast<double>(inputs.size());
}

double cap_vec_norm(const MappedAcn& m)
{
    double sq = 0.0;
    for (const double c : normalized_cap_vector(m))
        sq += c * c;
    return std::sqrt(sq);
}

SwingRange swing_range(const MappedAcn& m, double v_max)
{
    if (!(v_max > 0.0))
        throw Error(ErrorCode::InvalidArgument, "v_max must be positive");
    // Same expression shape as membrane_voltages() so the endpoints match it exactly.
    const double ca_pos = m.ca_pos();
    const double ca_neg = m.ca_neg();
    SwingRange r;
    r.pos = {v_max * ((0.0 + m.cb_pos) / ca_pos), v_max * ((m.ct_pos + m.cb_pos) / ca_pos)};
    r.neg = {v_max * ((0.0 + m.cb_neg) / ca_neg), v_max * ((m.ct_neg + m.cb_neg) / ca_neg)};
    return r;
}

double cos_theta(std::span<const double> v, BitSpan x)
{
    if (v.size() != x.size())
        throw Error(ErrorCode::DimensionMismatch, "cos_theta operands differ in length");
    double dot = 0.0;
    double vv = 0.0;
    double xx = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        vv += v[i] * v[i];
        if (x[i] != 0) {
            dot += v[i];
            xx += 1.0;
        }
    }
    if (vv == 0.0 || xx == 0.0)
        throw Error(ErrorCode::InvalidArgument, "cos_theta of a zero vector is undefined");
    return dot / (std::sqrt(vv) * std::sqrt(xx));
}

MeanDev mean_dev(std::span<const double> values)
{
    if (values.empty())
        return {};
    double sum = 0.0;
    for (const double v : values)
        sum += v;
    const double mean = sum / static_cast<double>(values.size());
    double ss = 0.0;
    for (const double v : values)
        ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / static_cast<double>(values.size()))};
}

LayerAggregates aggregate_records(std::span<const NeuronRecord> records)
{
    std::vector<double> ct;
    std::vector<double> cd;
    std::vector<double> norm;
    LayerAggregates agg;
    agg.neurons = records.size();
    for (const NeuronRecord& r : records) {
        ct.push_back(r.ct);
        cd.push_back(r.sum_cd);
        norm.push_back(r.cap_vec_norm);
        agg.total_capacitance += r.total_capacitance;
    }
    agg.ct = mean_dev(ct);
    agg.sum_cd = mean_dev(cd);
    agg.cap_vec_norm = mean_dev(norm);
    return agg;
}

MappingReport build_report(std::span<const MappedAcn> layer, double v_max, std::span<const BitVector> inputs,
                           double tol)
{
    MappingReport report;
    report.records.reserve(layer.size());
    for (const MappedAcn& m : layer) {
        NeuronRecord r;
        r.name = m.name;
        r.ct = m.ct;
        r.sum_cd = m.sum_cd();
        r.cap_vec_norm = cap_vec_norm(m);
        r.total_capacitance = m.total_capacitance();
        if (!inputs.empty())
            r.psi = instability(m, inputs, tol, v_max);
        const SwingRange s = swing_range(m, v_max);
        r.swing_pos = s.pos;
        r.swing_neg = s.neg;
        report.records.push_back(std::move(r));
    }
    report.aggregates = aggregate_records(report.records);
    return report;
}

LayerAggregates layer_stats(std::span<const MappedAcn> layer)
{
    if (layer.empty())
        throw Error(ErrorCode::InvalidArgument, "layer_stats needs at least one neuron");
    return build_report(layer, 1.0).aggregates;
}

} // namespace acn
