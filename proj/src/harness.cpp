// SPDX-License-Identifier: Apache-2.0
#include "acn/harness.hpp"

#include "acn/error.hpp"
#include "acn/metrics.hpp"
#include "acn/rng.hpp"
#include "acn/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

namespace acn {

namespace {

constexpr std::uint64_t kVerifyStreamSalt = 0x7665726966790001ULL;

struct SweepSlot {
    bool rejected = false;
    NeuronRecord record;
    std::uint64_t checks = 0;
    std::uint64_t mismatches = 0;
    double max_margin = 0.0;
};

SweepSlot run_one(const SweepConfig& config, std::size_t index)
{
    NeuronSpec spec;
    spec.name = "v" + std::to_string(index);
    spec.weights = sweep_weights(config, index);
    spec.bias = config.tau;
    if (config.binarize)
        spec = binarize_weights(spec);

    SweepSlot slot;
    MappedAcn m;
    try {
        m = map_neuron(spec, config.kind, config.ct, config.v_max);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::WeightNormExceedsVmax && e.code() != ErrorCode::AllZeroWeights)
            throw;
        slot.rejected = true;
        return slot;
    }
    if (config.pillar_bias > 0.0 || config.pillar_ballast > 0.0) {
        TechConstraints tech;
        tech.pillar_bias = config.pillar_bias;
        tech.pillar_ballast = config.pillar_ballast;
        m = apply_pillars(m, tech);
    }

    const VerifyStrategy strategy = config.n <= config.exhaustive_limit
                                        ? VerifyStrategy::exhaustive()
                                        : VerifyStrategy::sampled(config.samples,
                                                                  rng::derive_key(config.seed, kVerifyStreamSalt),
                                                                  index);
    slot.checks = check_count(strategy, config.n);
    const auto mismatches = verify_equivalence(spec, m, strategy, config.v_max);
    slot.mismatches = mismatches.size();
    for (const Mismatch& mm : mismatches)
        slot.max_margin = std::max(slot.max_margin, std::abs(mm.margin));

    slot.record.name = m.name;
    slot.record.ct = m.ct;
    slot.record.sum_cd = m.sum_cd();
    slot.record.cap_vec_norm = cap_vec_norm(m);
    slot.record.total_capacitance = m.total_capacitance();
    const SwingRange swing = swing_range(m, config.v_max);
    slot.record.swing_pos = swing.pos;
    slot.record.swing_neg = swing.neg;
    return slot;
}

// Strided split of [0, count) across workers; each index is written by exactly
// one worker, so the merged result does not depend on the thread count.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn)
{
    if (threads == 0)
        threads = std::max(1U, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (std::size_t i = t; i < count; i += threads)
                        fn(i);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

SweepConfig table1(const std::string& label, MappingKind kind, double tau)
{
    SweepConfig c;
    c.label = label;
    c.kind = kind;
    c.tau = tau;
    return c;
}

} // namespace

std::vector<double> sweep_weights(const SweepConfig& config, std::size_t index)
{
    rng::Stream stream(rng::derive_key(config.seed, index));
    std::vector<double> w(config.n);
    for (double& v : w)
        v = config.sigma * stream.normal();
    return w;
}

SweepResult sweep_random(const SweepConfig& config)
{
    if (config.count < 1 || config.n < 1)
        throw Error(ErrorCode::InvalidArgument, "sweep needs count >= 1 and n >= 1");
    if (!(config.sigma > 0.0))
        throw Error(ErrorCode::InvalidArgument, "sweep sigma must be positive");

    std::vector<SweepSlot> slots(config.count);
    parallel_for(config.count, config.threads, [&](std::size_t i) { slots[i] = run_one(config, i); });

    SweepResult result;
    result.config = config;
    for (SweepSlot& s : slots) {
        if (s.rejected) {
            ++result.rejected;
            continue;
        }
        result.checks += s.checks;
        result.mismatches += s.mismatches;
        result.max_mismatch_margin = std::max(result.max_mismatch_margin, s.max_margin);
        result.report.records.push_back(std::move(s.record));
    }
    result.report.aggregates = aggregate_records(result.report.records);
    return result;
}

SweepConfig sweep_preset(const std::string& name)
{
    if (name == "table1-row1")
        return table1(name, MappingKind::Conditional, 0.0);
    if (name == "table1-row2")
        return table1(name, MappingKind::ConditionalVectoredBias, 0.1);
    if (name == "table1-row3")
        return table1(name, MappingKind::Conditional, 0.1);
    if (name == "table1-row4") {
        SweepConfig c = table1(name, MappingKind::Conditional, 0.1);
        c.pillar_bias = 2.0;
        c.pillar_ballast = 5.0;
        return c;
    }
    if (name == "table1-row5")
        return table1(name, MappingKind::Conditional, -0.1);
    if (name == "table1-row6")
        return table1(name, MappingKind::Balanced, 0.1);
    if (name == "table1-row7")
        return table1(name, MappingKind::Relu, 0.1);

    for (const std::size_t n : {8, 16, 32, 64, 784}) {
        for (const bool binary : {false, true}) {
            const std::string preset = "table2-n" + std::to_string(n) + (binary ? "-binary" : "-real");
            if (name != preset)
                continue;
            SweepConfig c = table1(name, MappingKind::Conditional, 0.0);
            c.n = n;
            c.binarize = binary;
            if (n > 64)
                c.samples = 64;
            return c;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown sweep preset '" + name + "'");
}

std::vector<std::string> sweep_preset_names()
{
    std::vector<std::string> names;
    for (int row = 1; row <= 7; ++row)
        names.push_back("table1-row" + std::to_string(row));
    for (const int n : {8, 16, 32, 64, 784})
        for (const char* kind : {"real", "binary"})
            names.push_back("table2-n" + std::to_string(n) + "-" + kind);
    return names;
}

NeuronSpec binarize_weights(const NeuronSpec& spec)
{
    NeuronSpec out = spec;
    for (double& w : out.weights)
        w = w < 0.0 ? -1.0 : 1.0;
    out.quantization = {QuantizationKind::Binary, 1};
    return out;
}

namespace {

void check_layer_shapes(const Network& network, const Corpus& corpus)
{
    if (network.hidden.empty())
        throw Error(ErrorCode::SchemaMismatch, "network '" + network.name + "' has no hidden layer");
    for (const NeuronSpec& spec : network.hidden)
        if (spec.size() != network.inputs)
            throw Error(ErrorCode::SchemaMismatch, "hidden neuron '" + spec.name + "' width differs from network inputs");
    if (network.readout) {
        if (network.readout->weights.size() != network.readout->biases.size())
            throw Error(ErrorCode::SchemaMismatch, "readout weights and biases differ in length");
        for (const auto& row : network.readout->weights)
            if (row.size() != network.hidden.size())
                throw Error(ErrorCode::SchemaMismatch, "readout row width differs from hidden layer size");
    }
    if (!corpus.inputs.empty() && corpus.width != network.inputs)
        throw Error(ErrorCode::SchemaMismatch, "corpus width " + std::to_string(corpus.width)
                                                   + " differs from network inputs " + std::to_string(network.inputs));
}

} // namespace

LayerEvaluation evaluate_layer(const Network& network, const Corpus& corpus, const PipelineOptions& options,
                               double tol)
{
    check_layer_shapes(network, corpus);
    std::vector<MappedAcn> mapped;
    std::vector<NeuronSpec> effective;
    for (const NeuronSpec& spec : network.hidden) {
        effective.push_back(pipeline_spec(spec, options));
        mapped.push_back(compile_neuron(spec, options));
    }
    LayerEvaluation ev = evaluate_mapped(network, std::move(mapped), corpus, options.tech.v_max, tol);
    ev.effective = std::move(effective);
    return ev;
}

LayerEvaluation evaluate_mapped(const Network& network, std::vector<MappedAcn> mapped, const Corpus& corpus,
                                double v_max, double tol)
{
    check_layer_shapes(network, corpus);
    if (mapped.size() != network.hidden.size())
        throw Error(ErrorCode::SchemaMismatch, "mapping has " + std::to_string(mapped.size())
                                                   + " neurons, network hidden layer has "
                                                   + std::to_string(network.hidden.size()));
    for (std::size_t j = 0; j < mapped.size(); ++j)
        if (mapped[j].size != network.hidden[j].size())
            throw Error(ErrorCode::SchemaMismatch, "mapped neuron '" + mapped[j].name + "' width differs from network");

    LayerEvaluation ev;
    ev.mapped = std::move(mapped);
    std::vector<std::vector<double>> cap_vectors;
    for (const MappedAcn& m : ev.mapped)
        cap_vectors.push_back(normalized_cap_vector(m));

    auto classify = [&](const BitVector& h) {
        const ReadoutLayer& r = *network.readout;
        int best = 0;
        double best_score = -std::numeric_limits<double>::infinity();
        for (std::size_t o = 0; o < r.weights.size(); ++o) {
            double score = r.biases[o];
            for (std::size_t j = 0; j < h.size(); ++j)
                if (h[j] != 0)
                    score += r.weights[o][j];
            if (score > best_score) {
                best_score = score;
                best = static_cast<int>(o);
            }
        }
        return best;
    };

    std::size_t unstable = 0;
    std::size_t evaluations = 0;
    double abs_sum = 0.0;
    std::size_t hw_correct = 0;
    std::size_t sw_correct = 0;
    std::size_t labeled = 0;
    for (std::size_t img = 0; img < corpus.inputs.size(); ++img) {
        const BitVector& x = corpus.inputs[img];
        BitVector hw(network.hidden.size(), 0);
        BitVector sw(network.hidden.size(), 0);
        for (std::size_t j = 0; j < network.hidden.size(); ++j) {
            const EvalResult r = acn_output(ev.mapped[j], x, v_max);
            hw[j] = r.output ? 1 : 0;
            sw[j] = an_output(network.hidden[j], x) ? 1 : 0;
            if (hw[j] != sw[j])
                ++ev.bit_mismatches;
            const double mag = std::abs(r.delta_vm);
            if (mag < tol)
                ++unstable;
            abs_sum += mag;
            ev.max_abs_dvm = std::max(ev.max_abs_dvm, mag);
            ++evaluations;
            const BitVector xa = augmented_input(ev.mapped[j], x);
            if (std::any_of(xa.begin(), xa.end(), [](std::uint8_t b) { return b != 0; }))
                ev.cos_theta.push_back(cos_theta(cap_vectors[j], xa));
        }
        if (network.readout) {
            ev.hardware_class.push_back(classify(hw));
            ev.software_class.push_back(classify(sw));
            if (img < corpus.labels.size() && corpus.labels[img] >= 0) {
                ++labeled;
                hw_correct += ev.hardware_class.back() == corpus.labels[img] ? 1 : 0;
                sw_correct += ev.software_class.back() == corpus.labels[img] ? 1 : 0;
            }
        }
        ev.hardware_bits.push_back(std::move(hw));
        ev.software_bits.push_back(std::move(sw));
    }
    if (evaluations > 0) {
        ev.psi = static_cast<double>(unstable) / static_cast<double>(evaluations);
        ev.mean_abs_dvm = abs_sum / static_cast<double>(evaluations);
        ev.agreement = 1.0 - static_cast<double>(ev.bit_mismatches) / static_cast<double>(evaluations);
    }
    if (labeled > 0) {
        ev.hardware_accuracy = static_cast<double>(hw_correct) / static_cast<double>(labeled);
        ev.software_accuracy = static_cast<double>(sw_correct) / static_cast<double>(labeled);
    }
    ev.report = build_report(ev.mapped, v_max, corpus.inputs, tol);
    return ev;
}

TilePlan tile_plan(const MappedAcn& m, double unit)
{
    if (!(unit > 0.0))
        throw Error(ErrorCode::InvalidArgument, "unit capacitance must be positive");
    auto tiles = [unit](double value, const std::string& what) -> long long {
        if (value == 0.0)
            return 0;
        const long long k = std::llround(value / unit);
        if (k < 1 || std::abs(value - static_cast<double>(k) * unit) > 1e-6 * value)
            throw Error(ErrorCode::NotUnitQuantized,
                        what + " = " + std::to_string(value) + " fF is not a multiple of " + std::to_string(unit) + " fF");
        return k;
    };
    auto tree = [&](const SparseValues& caps, double cb, double cd, const std::string& side) {
        TreeTiles t;
        for (const auto& [i, c] : caps) {
            t.synapses.emplace_back(i, tiles(c, side + " synapse " + std::to_string(i)));
            t.total += t.synapses.back().second;
        }
        t.bias = tiles(cb, side + " bias");
        t.ballast = tiles(cd, side + " ballast");
        t.total += t.bias + t.ballast;
        return t;
    };
    TilePlan plan;
    plan.unit = unit;
    plan.pos = tree(m.cap_pos, m.cb_pos, m.cd_pos, "pos");
    plan.neg = tree(m.cap_neg, m.cb_neg, m.cd_neg, "neg");
    return plan;
}

std::vector<BallastPoint> ballast_vs_direction(double ct, std::size_t steps)
{
    if (steps == 0)
        throw Error(ErrorCode::InvalidArgument, "steps must be positive");
    std::vector<BallastPoint> out;
    for (std::size_t s = 0; s < steps; ++s) {
        const double phi = 360.0 * static_cast<double>(s) / static_cast<double>(steps);
        const double rad = phi * std::numbers::pi / 180.0;
        NeuronSpec spec;
        spec.name = "phi";
        spec.weights = {std::cos(rad), std::sin(rad)};
        const MappedAcn m = conditional_map(spec, ct);
        out.push_back({phi, m.cd_pos, m.cd_neg, cap_vec_norm(m)});
    }
    return out;
}

} // namespace acn
