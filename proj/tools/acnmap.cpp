// SPDX-License-Identifier: Apache-2.0
//
// acnmap: map, verify, sweep, report and tile capacitive neuron layers.
#include "acn/error.hpp"
#include "acn/harness.hpp"
#include "acn/io.hpp"
#include "acn/mapper.hpp"
#include "acn/metrics.hpp"
#include "acn/simulator.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace acn;

namespace {

// Everything a run needs to be repeated: what was read, what was asked for, what came out.
struct Manifest {
    std::string command;
    std::vector<std::string> argv;
    json inputs = json::array();
    json flags = json::object();
    json outputs = json::array();
    json result = json::object();

    void input(const fs::path& p) { inputs.push_back({{"path", p.string()}, {"fnv1a64", io::file_digest(p)}}); }
    void output(const fs::path& p) { outputs.push_back({{"path", p.string()}, {"fnv1a64", io::file_digest(p)}}); }

    void write(const fs::path& path, int exit_code) const
    {
        json doc = {{"format", "acn-manifest"},
                    {"schema_version", io::kSchemaVersion},
                    {"tool", "acnmap"},
                    {"tool_version", std::string(io::kToolVersion)},
                    {"command", command},
                    {"argv", argv},
                    {"inputs", inputs},
                    {"flags", flags},
                    {"outputs", outputs},
                    {"result", result},
                    {"exit_code", exit_code},
                    {"build",
                     {{"compiler", __VERSION__},
                      {"fmt", FMT_VERSION},
                      {"json", fmt::format("{}.{}.{}", NLOHMANN_JSON_VERSION_MAJOR, NLOHMANN_JSON_VERSION_MINOR,
                                           NLOHMANN_JSON_VERSION_PATCH)},
                      {"cli11", CLI11_VERSION}}}};
        io::write_text(path, doc.dump(1) + "\n");
    }
};

struct MapFlags {
    std::string mapping = "conditional";
    std::optional<double> ct;
    double c_min = 2.0;
    double prune = 0.0;
    double pillar_bias = 0.0;
    double pillar_ballast = 0.0;
    double parasitic_pos = 0.0;
    double parasitic_neg = 0.0;
    double v_max = 1.0;
    bool tau_vectored = false;

    void attach(CLI::App* app)
    {
        app->add_option("--mapping", mapping, "conditional | vectored | balanced | relu")
            ->check(CLI::IsMember({"conditional", "vectored", "balanced", "relu"}))
            ->capture_default_str();
        app->add_option("--ct", ct, "explicit C_T in fF (default: smallest synapse lands on --cmin)");
        app->add_option("--cmin", c_min, "smallest realizable capacitor, fF")->capture_default_str();
        app->add_option("--prune", prune, "zero weights with |w| below this before mapping")->capture_default_str();
        app->add_option("--pillar-bias", pillar_bias, "bias pillar added to both trees, fF")->capture_default_str();
        app->add_option("--pillar-ballast", pillar_ballast, "ballast pillar added to both trees, fF")
            ->capture_default_str();
        app->add_option("--parasitic-pos", parasitic_pos, "estimated parasitic on the + node, fF")
            ->capture_default_str();
        app->add_option("--parasitic-neg", parasitic_neg, "estimated parasitic on the - node, fF")
            ->capture_default_str();
        app->add_option("--vmax", v_max, "power clock peak, V")->capture_default_str();
        app->add_flag("--tau-vectored", tau_vectored, "fold the bias into the weight vector as an always-on input");
    }

    PipelineOptions options() const
    {
        PipelineOptions o;
        o.kind = parse_mapping_kind(mapping);
        if (tau_vectored) {
            if (o.kind == MappingKind::Balanced)
                throw Error(ErrorCode::InvalidArgument, "--tau-vectored does not apply to balanced mapping");
            if (o.kind == MappingKind::Conditional)
                o.kind = MappingKind::ConditionalVectoredBias;
        }
        o.ct = ct;
        o.prune_threshold = prune;
        o.tech.c_min = c_min;
        o.tech.pillar_bias = pillar_bias;
        o.tech.pillar_ballast = pillar_ballast;
        o.tech.parasitic_pos = parasitic_pos;
        o.tech.parasitic_neg = parasitic_neg;
        o.tech.v_max = v_max;
        return o;
    }

    io::Provenance provenance(const PipelineOptions& o, const std::string& source) const
    {
        io::Provenance p;
        p.mapping_kind = to_string(o.kind);
        p.ct_mode = o.ct ? "explicit" : "select_ct";
        p.ct = o.ct.value_or(0.0);
        p.c_min = o.tech.c_min;
        p.v_max = o.tech.v_max;
        p.pillar_bias = o.tech.pillar_bias;
        p.pillar_ballast = o.tech.pillar_ballast;
        p.parasitic_pos = o.tech.parasitic_pos;
        p.parasitic_neg = o.tech.parasitic_neg;
        p.prune_threshold = o.prune_threshold;
        p.source = source;
        return p;
    }

    void record(json& flags) const
    {
        flags["mapping"] = mapping;
        flags["ct"] = ct ? json(*ct) : json(nullptr);
        flags["cmin"] = c_min;
        flags["prune"] = prune;
        flags["pillar_bias"] = pillar_bias;
        flags["pillar_ballast"] = pillar_ballast;
        flags["parasitic_pos"] = parasitic_pos;
        flags["parasitic_neg"] = parasitic_neg;
        flags["vmax"] = v_max;
        flags["tau_vectored"] = tau_vectored;
    }
};

fs::path default_manifest(const std::string& out, const std::string& command)
{
    return out.empty() ? fs::path("acnmap-" + command + ".manifest.json") : fs::path(out + ".manifest.json");
}

// A layer either loaded from a mapping file or compiled from the network on the spot.
struct Layer {
    std::vector<MappedAcn> mapped;
    std::vector<NeuronSpec> effective; // empty when no network was given
    double v_max = 1.0;
};

Layer obtain_layer(const std::string& network_path, const std::string& mapping_path, const MapFlags& flags,
                   Manifest& manifest, std::optional<Network>& network)
{
    Layer layer;
    if (!network_path.empty()) {
        network = io::load_network(network_path);
        manifest.input(network_path);
    }
    if (!mapping_path.empty()) {
        io::MappingFile file = io::load_mapping(mapping_path);
        manifest.input(mapping_path);
        layer.mapped = std::move(file.neurons);
        layer.v_max = file.provenance.v_max;
        if (network) {
            PipelineOptions o;
            o.prune_threshold = file.provenance.prune_threshold;
            for (const NeuronSpec& s : network->hidden)
                layer.effective.push_back(pipeline_spec(s, o));
        }
        return layer;
    }
    if (!network)
        throw Error(ErrorCode::InvalidArgument, "need --network or --mapping-file");
    const PipelineOptions o = flags.options();
    flags.record(manifest.flags);
    for (const NeuronSpec& s : network->hidden) {
        layer.effective.push_back(pipeline_spec(s, o));
        layer.mapped.push_back(compile_neuron(s, o));
    }
    layer.v_max = o.tech.v_max;
    return layer;
}

int cmd_map(const std::string& network_path, const std::string& out, const MapFlags& flags, Manifest& manifest)
{
    const Network network = io::load_network(network_path);
    manifest.input(network_path);
    flags.record(manifest.flags);
    const PipelineOptions o = flags.options();

    std::vector<MappedAcn> layer;
    std::size_t violations = 0;
    for (const NeuronSpec& spec : network.hidden) {
        layer.push_back(compile_neuron(spec, o));
        for (const RealizabilityViolation& v : check_realizable(layer.back(), o.tech)) {
            ++violations;
            std::cerr << fmt::format("warning: {} {} {}{} = {} fF is below c_min = {} fF\n", spec.name,
                                     to_string(v.tree), to_string(v.role),
                                     v.role == CapRole::Synapse ? fmt::format("[{}]", v.index) : "", v.value,
                                     o.tech.c_min);
        }
    }
    io::save_mapping(layer, flags.provenance(o, network_path), out);
    manifest.output(out);

    const LayerAggregates a = layer_stats(layer);
    std::cout << fmt::format("mapped {} neurons ({}), mean C_T {:.3f} fF, mean sum C_d {:.3f} fF, mean |C| {:.4f}, "
                             "layer {:.3f} pF, {} realizability warnings\n",
                             a.neurons, to_string(o.kind), a.ct.mean, a.sum_cd.mean, a.cap_vec_norm.mean,
                             a.total_capacitance / 1000.0, violations);
    manifest.result = {{"neurons", a.neurons},
                       {"mean_ct_fF", a.ct.mean},
                       {"mean_sum_cd_fF", a.sum_cd.mean},
                       {"mean_cap_vec_norm", a.cap_vec_norm.mean},
                       {"layer_total_fF", a.total_capacitance},
                       {"realizability_warnings", violations}};
    return 0;
}

int cmd_verify(const std::string& network_path, const std::string& mapping_path, const std::string& corpus_path,
               const MapFlags& flags, std::size_t exhaustive_limit, std::uint64_t samples, std::uint64_t seed,
               Manifest& manifest)
{
    if (network_path.empty())
        throw Error(ErrorCode::InvalidArgument, "verify needs --network");
    std::optional<Network> network;
    const Layer layer = obtain_layer(network_path, mapping_path, flags, manifest, network);
    if (layer.mapped.size() != layer.effective.size())
        throw Error(ErrorCode::SchemaMismatch, fmt::format("mapping has {} neurons, network has {}",
                                                           layer.mapped.size(), layer.effective.size()));
    manifest.flags["exhaustive_limit"] = exhaustive_limit;
    manifest.flags["samples"] = samples;
    manifest.flags["seed"] = seed;

    std::optional<Corpus> corpus;
    if (!corpus_path.empty()) {
        corpus = io::load_corpus(corpus_path);
        manifest.input(corpus_path);
    }

    std::uint64_t checks = 0;
    std::uint64_t mismatches = 0;
    for (std::size_t j = 0; j < layer.mapped.size(); ++j) {
        const NeuronSpec& spec = layer.effective[j];
        const MappedAcn& m = layer.mapped[j];
        const VerifyStrategy strategy = spec.size() <= exhaustive_limit ? VerifyStrategy::exhaustive()
                                                                        : VerifyStrategy::sampled(samples, seed, j);
        const auto found = verify_equivalence(spec, m, strategy, layer.v_max);
        std::uint64_t neuron_checks = check_count(strategy, spec.size());
        std::size_t neuron_mismatches = found.size();
        if (corpus) {
            if (corpus->width != spec.size())
                throw Error(ErrorCode::SchemaMismatch, "corpus width differs from network inputs");
            for (const BitVector& x : corpus->inputs) {
                ++neuron_checks;
                if (an_output(spec, x) != acn_output(m, x, layer.v_max).output)
                    ++neuron_mismatches;
            }
        }
        checks += neuron_checks;
        mismatches += neuron_mismatches;
        std::cout << fmt::format("{:<12} {:>10} {:>12} checks {:>4} mismatches\n", spec.name,
                                 strategy.kind == VerifyStrategy::Kind::Exhaustive ? "exhaustive" : "sampled",
                                 neuron_checks, neuron_mismatches);
        for (const Mismatch& mm : found)
            std::cout << fmt::format("  input {} dvm {:.3e} V margin {:.3e}\n", mm.input_index, mm.delta_vm,
                                     mm.margin);
    }
    std::cout << fmt::format("total: {} checks, {} mismatches\n", checks, mismatches);
    manifest.result = {{"checks", checks}, {"mismatches", mismatches}};
    return mismatches == 0 ? 0 : 1;
}

int cmd_sweep(const std::vector<std::string>& presets, const std::string& config_path, const std::string& out,
              std::optional<std::uint64_t> seed, std::optional<std::size_t> count,
              std::optional<std::size_t> exhaustive_limit, std::optional<std::uint64_t> samples, unsigned threads,
              const std::string& svg_ballast, Manifest& manifest)
{
    std::vector<SweepConfig> configs;
    for (const std::string& name : presets) {
        if (name == "all") {
            for (const std::string& p : sweep_preset_names())
                configs.push_back(sweep_preset(p));
        } else {
            configs.push_back(sweep_preset(name));
        }
    }
    if (!config_path.empty()) {
        for (SweepConfig& c : io::parse_sweep_config(io::read_text(config_path)))
            configs.push_back(std::move(c));
        manifest.input(config_path);
    }
    if (configs.empty())
        throw Error(ErrorCode::InvalidArgument, "sweep needs --preset or --config");

    manifest.flags["presets"] = presets;
    json resolved = json::array();
    std::vector<SweepResult> results;
    for (SweepConfig& c : configs) {
        if (seed)
            c.seed = *seed;
        if (count)
            c.count = *count;
        if (exhaustive_limit)
            c.exhaustive_limit = *exhaustive_limit;
        if (samples)
            c.samples = *samples;
        c.threads = threads;
        if (c.label.empty())
            c.label = "custom";
        resolved.push_back({{"label", c.label},
                            {"n", c.n},
                            {"count", c.count},
                            {"sigma", c.sigma},
                            {"tau", c.tau},
                            {"mapping", to_string(c.kind)},
                            {"ct", c.ct},
                            {"pillar_bias", c.pillar_bias},
                            {"pillar_ballast", c.pillar_ballast},
                            {"v_max", c.v_max},
                            {"weights", c.binarize ? "binary" : "real"},
                            {"seed", c.seed},
                            {"exhaustive_limit", c.exhaustive_limit},
                            {"samples", c.samples}});
        results.push_back(sweep_random(c));
        const SweepResult& r = results.back();
        std::cerr << fmt::format("{:<20} mean sum C_d {:8.3f} fF ({:.3f})  mean |C| {:.4f} ({:.4f})  rejected {:>5}  "
                                 "{} checks, {} mismatches\n",
                                 c.label, r.report.aggregates.sum_cd.mean, r.report.aggregates.sum_cd.dev,
                                 r.report.aggregates.cap_vec_norm.mean, r.report.aggregates.cap_vec_norm.dev,
                                 r.rejected, r.checks, r.mismatches);
    }
    manifest.flags["configs"] = resolved;

    const std::string csv = io::sweep_csv(results);
    if (out.empty()) {
        std::cout << csv;
    } else {
        io::write_text(out, csv);
        manifest.output(out);
    }
    if (!svg_ballast.empty()) {
        std::vector<io::Series> series(3);
        series[0].name = "C_d+ / C_T";
        series[1].name = "C_d- / C_T";
        series[2].name = "|C|";
        for (const BallastPoint& p : ballast_vs_direction(1.0, 360)) {
            for (auto& s : series)
                s.x.push_back(p.phi_deg);
            series[0].y.push_back(p.cd_pos);
            series[1].y.push_back(p.cd_neg);
            series[2].y.push_back(p.cap_vec_norm);
        }
        io::write_text(svg_ballast,
                       io::svg_lines(series, "Conditional ballast vs weight direction, w = (cos phi, sin phi)",
                                     "phi (deg)", "fraction of C_T"));
        manifest.output(svg_ballast);
    }
    std::uint64_t mismatches = 0;
    for (const SweepResult& r : results)
        mismatches += r.mismatches;
    manifest.result = {{"sweeps", results.size()}, {"mismatches", mismatches}};
    return 0;
}

int cmd_report(const std::string& network_path, const std::string& mapping_path, const std::string& corpus_path,
               const MapFlags& flags, double tolerance_mv, const std::string& out, const std::string& svg_cos,
               Manifest& manifest)
{
    std::optional<Network> network;
    const Layer layer = obtain_layer(network_path, mapping_path, flags, manifest, network);
    const Corpus corpus = io::load_corpus(corpus_path);
    manifest.input(corpus_path);
    manifest.flags["tolerance_mv"] = tolerance_mv;
    const double tol = tolerance_mv * 1e-3;

    MappingReport report;
    std::vector<double> cos_values;
    json result;
    if (network) {
        const LayerEvaluation ev = evaluate_mapped(*network, layer.mapped, corpus, layer.v_max, tol);
        report = ev.report;
        cos_values = ev.cos_theta;
        std::cout << fmt::format("hidden bits: {} of {} agree ({:.4f}), psi({} mV) = {:.4f}, mean |dvm| {:.4f} V\n",
                                 ev.hardware_bits.size() * network->hidden.size() - ev.bit_mismatches,
                                 ev.hardware_bits.size() * network->hidden.size(), ev.agreement, tolerance_mv, ev.psi,
                                 ev.mean_abs_dvm);
        if (network->readout && !corpus.labels.empty())
            std::cout << fmt::format("accuracy: hardware {:.4f}, software {:.4f}\n", ev.hardware_accuracy,
                                     ev.software_accuracy);
        result = {{"agreement", ev.agreement},
                  {"bit_mismatches", ev.bit_mismatches},
                  {"psi", ev.psi},
                  {"mean_abs_dvm", ev.mean_abs_dvm},
                  {"hardware_accuracy", ev.hardware_accuracy},
                  {"software_accuracy", ev.software_accuracy}};
    } else {
        report = build_report(layer.mapped, layer.v_max, corpus.inputs, tol);
        std::size_t unstable = 0;
        for (const MappedAcn& m : layer.mapped) {
            const auto c = normalized_cap_vector(m);
            for (const BitVector& x : corpus.inputs) {
                if (std::abs(delta_vm(m, x, layer.v_max)) < tol)
                    ++unstable;
                const BitVector xa = augmented_input(m, x);
                if (std::find(xa.begin(), xa.end(), 1) != xa.end())
                    cos_values.push_back(cos_theta(c, xa));
            }
        }
        const double evaluations = static_cast<double>(layer.mapped.size() * corpus.inputs.size());
        const double psi = evaluations > 0 ? static_cast<double>(unstable) / evaluations : 0.0;
        std::cout << fmt::format("psi({} mV) = {:.4f} over {} evaluations\n", tolerance_mv, psi, evaluations);
        result = {{"psi", psi}};
    }
    const LayerAggregates& a = report.aggregates;
    std::cout << fmt::format("{} neurons, mean C_T {:.3f} fF, mean sum C_d {:.3f} fF, mean |C| {:.4f}, layer {:.3f} pF\n",
                             a.neurons, a.ct.mean, a.sum_cd.mean, a.cap_vec_norm.mean, a.total_capacitance / 1000.0);
    result["layer_total_fF"] = a.total_capacitance;
    result["mean_cap_vec_norm"] = a.cap_vec_norm.mean;
    manifest.result = result;

    const std::string csv = io::report_csv(report);
    if (!out.empty()) {
        io::write_text(out, csv);
        manifest.output(out);
    } else {
        std::cout << csv;
    }
    if (!svg_cos.empty()) {
        io::write_text(svg_cos, io::svg_histogram(cos_values, 40, -1.0, 1.0, "Sampling distribution of cos theta",
                                                  "cos theta"));
        manifest.output(svg_cos);
    }
    return 0;
}

int cmd_tile(const std::string& mapping_path, double unit, const std::string& neuron, Manifest& manifest)
{
    const io::MappingFile file = io::load_mapping(mapping_path);
    manifest.input(mapping_path);
    manifest.flags["unit"] = unit;
    manifest.flags["neuron"] = neuron;
    json plans = json::array();
    bool any = false;
    for (std::size_t j = 0; j < file.neurons.size(); ++j) {
        const MappedAcn& m = file.neurons[j];
        if (!neuron.empty() && neuron != m.name && neuron != std::to_string(j))
            continue;
        any = true;
        const TilePlan plan = tile_plan(m, unit);
        auto count_synapses = [](const TreeTiles& t) {
            long long s = 0;
            for (const auto& [i, k] : t.synapses)
                s += k;
            return s;
        };
        std::cout << fmt::format("{}: unit {} fF\n", m.name, unit);
        for (const auto& [label, t] : {std::pair{"+", &plan.pos}, std::pair{"-", &plan.neg}})
            std::cout << fmt::format("  tree {}  synapse tiles {:>5} over {:>4} capacitors  bias {:>4}  ballast {:>4}  "
                                     "total {:>5}\n",
                                     label, count_synapses(*t), t->synapses.size(), t->bias, t->ballast, t->total);
        plans.push_back({{"neuron", m.name},
                         {"pos", {{"synapse", count_synapses(plan.pos)}, {"bias", plan.pos.bias},
                                  {"ballast", plan.pos.ballast}, {"total", plan.pos.total}}},
                         {"neg", {{"synapse", count_synapses(plan.neg)}, {"bias", plan.neg.bias},
                                  {"ballast", plan.neg.ballast}, {"total", plan.neg.total}}}});
    }
    if (!any)
        throw Error(ErrorCode::InvalidArgument, "no neuron named '" + neuron + "'");
    manifest.result = {{"plans", plans}};
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Weight-to-capacitance compiler for dual-tree adiabatic capacitive neurons"};
    app.set_version_flag("--version", std::string(io::kToolVersion));
    app.require_subcommand(1);

    Manifest manifest;
    manifest.argv.assign(argv, argv + argc);
    std::string manifest_path;
    std::string network_path;
    std::string mapping_path;
    std::string corpus_path;
    std::string out;
    MapFlags map_flags;

    auto common_manifest = [&](CLI::App* sub) {
        sub->add_option("--manifest", manifest_path, "run manifest path (default: next to the output)");
    };

    CLI::App* map = app.add_subcommand("map", "map a network's hidden layer to capacitors");
    map->add_option("--network", network_path, "interchange network JSON")->required()->check(CLI::ExistingFile);
    map->add_option("--out", out, "mapping file to write")->required();
    map_flags.attach(map);
    common_manifest(map);

    CLI::App* verify = app.add_subcommand("verify", "check mapped neurons against the reference neurons");
    std::size_t exhaustive_limit = 16;
    std::uint64_t samples = 4096;
    std::uint64_t seed = 1;
    verify->add_option("--network", network_path, "interchange network JSON")->required()->check(CLI::ExistingFile);
    verify->add_option("--mapping-file", mapping_path, "mapping to verify (default: map with the flags below)")
        ->check(CLI::ExistingFile);
    verify->add_option("--corpus", corpus_path, "also check every corpus input")->check(CLI::ExistingFile);
    verify->add_option("--exhaustive-limit", exhaustive_limit, "widest neuron checked on all 2^N inputs")
        ->capture_default_str()
        ->check(CLI::Range(std::size_t{0}, kMaxExhaustiveInputs));
    verify->add_option("--samples", samples, "random inputs per wider neuron")->capture_default_str();
    verify->add_option("--seed", seed, "seed for sampled inputs")->capture_default_str();
    map_flags.attach(verify);
    common_manifest(verify);

    CLI::App* sweep = app.add_subcommand("sweep", "random-weight Monte Carlo statistics");
    std::vector<std::string> presets;
    std::string config_path;
    std::optional<std::uint64_t> sweep_seed;
    std::optional<std::size_t> sweep_count;
    std::optional<std::size_t> sweep_limit;
    std::optional<std::uint64_t> sweep_samples;
    unsigned threads = 0;
    std::string svg_ballast;
    sweep->add_option("--preset", presets, "named preset(s), or 'all'")->expected(1, -1);
    sweep->add_option("--config", config_path, "sweep config: JSON or key=value")->check(CLI::ExistingFile);
    sweep->add_option("--out", out, "CSV output (default: stdout)");
    sweep->add_option("--seed", sweep_seed, "override the seed");
    sweep->add_option("--count", sweep_count, "override the number of weight vectors");
    sweep->add_option("--exhaustive-limit", sweep_limit, "widest vector checked on all 2^N inputs")
        ->check(CLI::Range(std::size_t{0}, kMaxExhaustiveInputs));
    sweep->add_option("--samples", sweep_samples, "random inputs per wider vector");
    sweep->add_option("--threads", threads, "worker threads, 0 = all cores")->capture_default_str();
    sweep->add_option("--svg-ballast", svg_ballast, "also plot conditional ballast against weight direction");
    common_manifest(sweep);

    CLI::App* report = app.add_subcommand("report", "metrics of a mapped layer over an input corpus");
    double tolerance_mv = kDefaultInstabilityTolerance * 1e3;
    std::string svg_cos;
    report->add_option("--network", network_path, "network JSON (enables hardware/software comparison)")
        ->check(CLI::ExistingFile);
    report->add_option("--mapping-file", mapping_path, "mapping to report on (default: map the network)")
        ->check(CLI::ExistingFile);
    report->add_option("--corpus", corpus_path, "binary input corpus")->required()->check(CLI::ExistingFile);
    report->add_option("--tolerance-mv", tolerance_mv, "comparator tolerance for the instability metric, mV")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    report->add_option("--out", out, "per-neuron CSV (default: stdout)");
    report->add_option("--svg-cos", svg_cos, "histogram of cos theta over the corpus");
    map_flags.attach(report);
    common_manifest(report);

    CLI::App* tile = app.add_subcommand("tile", "express a mapping in equal unit capacitors");
    double unit = 0.0;
    std::string neuron;
    tile->add_option("--mapping-file", mapping_path, "mapping file")->required()->check(CLI::ExistingFile);
    tile->add_option("--unit", unit, "unit capacitor, fF")->required()->check(CLI::PositiveNumber);
    tile->add_option("--neuron", neuron, "neuron name or index (default: all)");
    common_manifest(tile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_code(ErrorCode::InvalidArgument);
    }

    CLI::App* chosen = app.get_subcommands().front();
    manifest.command = chosen->get_name();
    if (manifest_path.empty())
        manifest_path = default_manifest(out, manifest.command).string();

    int rc = 0;
    try {
        if (chosen == map)
            rc = cmd_map(network_path, out, map_flags, manifest);
        else if (chosen == verify)
            rc = cmd_verify(network_path, mapping_path, corpus_path, map_flags, exhaustive_limit, samples, seed,
                            manifest);
        else if (chosen == sweep)
            rc = cmd_sweep(presets, config_path, out, sweep_seed, sweep_count, sweep_limit, sweep_samples, threads,
                           svg_ballast, manifest);
        else if (chosen == report)
            rc = cmd_report(network_path, mapping_path, corpus_path, map_flags, tolerance_mv, out, svg_cos, manifest);
        else
            rc = cmd_tile(mapping_path, unit, neuron, manifest);
    } catch (const Error& e) {
        std::cerr << "acnmap: " << e.what() << "\n";
        rc = exit_code(e.code());
        manifest.result = {{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
    }
    try {
        manifest.write(manifest_path, rc);
    } catch (const Error& e) {
        std::cerr << "acnmap: " << e.what() << "\n";
        if (rc == 0)
            rc = exit_code(e.code());
    }
    return rc;
}
