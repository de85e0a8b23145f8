// SPDX-License-Identifier: Apache-2.0
#include "acn/io.hpp"

#include "acn/error.hpp"
#include "acn/mapper.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace acn::io {

using nlohmann::json;

namespace {

const json kUnits = {{"capacitance", "fF"}, {"voltage", "V"}};

[[noreturn]] void schema_error(const std::string& what)
{
    throw Error(ErrorCode::SchemaMismatch, what);
}

double read_value(const json& j, const std::string& where)
{
    if (j.is_string())
        return parse_decimal(j.get<std::string>());
    if (j.is_number())
        return j.get<double>();
    schema_error(where + ": expected a decimal string");
}

const json& require(const json& j, const char* key, const std::string& where)
{
    if (!j.is_object() || !j.contains(key))
        schema_error(where + ": missing '" + key + "'");
    return j.at(key);
}

void check_header(const json& doc, const std::string& format)
{
    if (!doc.is_object())
        throw Error(ErrorCode::ParseError, "top level must be a JSON object");
    if (doc.value("format", std::string()) != format)
        schema_error("expected format '" + format + "'");
    const json& version = require(doc, "schema_version", format);
    if (!version.is_number_integer() || version.get<int>() != kSchemaVersion)
        throw Error(ErrorCode::SchemaVersionError,
                    "unsupported schema_version " + version.dump() + " (supported: " + std::to_string(kSchemaVersion) + ")");
    if (doc.contains("units") && doc.at("units") != kUnits)
        schema_error("units must be " + kUnits.dump());
}

json parse_json(std::string_view text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

Quantization parse_quantization(const json& j, const std::string& where)
{
    const std::string kind = j.is_string() ? j.get<std::string>() : require(j, "kind", where).get<std::string>();
    if (kind == "real")
        return {QuantizationKind::Real, 0};
    if (kind == "binary")
        return {QuantizationKind::Binary, 1};
    if (kind == "kbit") {
        if (!j.is_object() || !j.contains("bits") || !j.at("bits").is_number_integer())
            schema_error(where + ": kbit quantization needs integer 'bits'");
        return {QuantizationKind::KBit, j.at("bits").get<int>()};
    }
    schema_error(where + ": unknown quantization '" + kind + "'");
}

json quantization_json(const Quantization& q)
{
    json j = {{"kind", to_string(q.kind)}};
    if (q.kind == QuantizationKind::KBit)
        j["bits"] = q.bits;
    return j;
}

json decimals(std::span<const double> values)
{
    json arr = json::array();
    for (const double v : values)
        arr.push_back(format_decimal(v));
    return arr;
}

std::vector<double> read_values(const json& arr, const std::string& where)
{
    if (!arr.is_array())
        schema_error(where + ": expected an array");
    std::vector<double> out;
    out.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i)
        out.push_back(read_value(arr[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

Tree parse_tree(const std::string& s, const std::string& where)
{
    if (s == "pos")
        return Tree::Pos;
    if (s == "neg")
        return Tree::Neg;
    schema_error(where + ": unknown tree '" + s + "'");
}

CapRole parse_role(const std::string& s, const std::string& where)
{
    if (s == "synapse")
        return CapRole::Synapse;
    if (s == "bias")
        return CapRole::Bias;
    if (s == "ballast")
        return CapRole::Ballast;
    schema_error(where + ": unknown role '" + s + "'");
}

json capacitor(Tree tree, CapRole role, std::size_t index, double value)
{
    return {{"tree", to_string(tree)}, {"role", to_string(role)}, {"index", index}, {"fF", format_decimal(value)}};
}

std::string xml_escape(const std::string& s)
{
    std::string out;
    for (const char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

std::string format_decimal(double value)
{
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

double parse_decimal(std::string_view text)
{
    double value = 0.0;
    const char* begin = text.data();
    const char* end = text.data() + text.size();
    if (begin != end && *begin == '+')
        ++begin;
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc() || res.ptr != end || !std::isfinite(value))
        throw Error(ErrorCode::ParseError, "not a finite decimal: '" + std::string(text) + "'");
    return value;
}

Network parse_network(std::string_view json_text)
{
    const json doc = parse_json(json_text);
    check_header(doc, "acn-network");

    Network net;
    net.name = doc.value("name", std::string());
    const json& inputs = require(doc, "inputs", "network");
    if (!inputs.is_number_unsigned())
        schema_error("network: 'inputs' must be a non-negative integer");
    net.inputs = inputs.get<std::size_t>();

    const json& hidden = require(doc, "hidden", "network");
    if (hidden.value("activation", std::string("binary")) != "binary")
        schema_error("hidden layer activation must be 'binary'");
    const json& neurons = require(hidden, "neurons", "hidden");
    if (!neurons.is_array())
        schema_error("hidden.neurons must be an array");
    for (std::size_t k = 0; k < neurons.size(); ++k) {
        const json& jn = neurons[k];
        const std::string where = "hidden.neurons[" + std::to_string(k) + "]";
        NeuronSpec spec;
        spec.name = jn.value("name", "n" + std::to_string(k));
        spec.weights = read_values(require(jn, "weights", where), where + ".weights");
        spec.bias = read_value(require(jn, "bias", where), where + ".bias");
        if (jn.contains("quantization"))
            spec.quantization = parse_quantization(jn.at("quantization"), where);
        if (spec.size() != net.inputs)
            schema_error(where + ": has " + std::to_string(spec.size()) + " weights, network declares "
                         + std::to_string(net.inputs) + " inputs");
        validate(spec);
        net.hidden.push_back(std::move(spec));
    }

    if (doc.contains("readout") && !doc.at("readout").is_null()) {
        const json& jr = doc.at("readout");
        ReadoutLayer r;
        const json& rows = require(jr, "weights", "readout");
        if (!rows.is_array())
            schema_error("readout.weights must be an array of rows");
        for (std::size_t o = 0; o < rows.size(); ++o) {
            r.weights.push_back(read_values(rows[o], "readout.weights[" + std::to_string(o) + "]"));
            if (r.weights.back().size() != net.hidden.size())
                schema_error("readout row " + std::to_string(o) + " width differs from hidden layer size");
        }
        r.biases = read_values(require(jr, "biases", "readout"), "readout.biases");
        if (r.biases.size() != r.weights.size())
            schema_error("readout biases and weights differ in length");
        net.readout = std::move(r);
    }
    return net;
}

std::string network_to_json(const Network& network)
{
    json neurons = json::array();
    for (const NeuronSpec& spec : network.hidden) {
        neurons.push_back({{"name", spec.name},
                           {"quantization", quantization_json(spec.quantization)},
                           {"weights", decimals(spec.weights)},
                           {"bias", format_decimal(spec.bias)}});
    }
    json doc = {{"format", "acn-network"},
                {"schema_version", kSchemaVersion},
                {"units", kUnits},
                {"name", network.name},
                {"inputs", network.inputs},
                {"hidden", {{"activation", "binary"}, {"neurons", neurons}}}};
    if (network.readout) {
        json rows = json::array();
        for (const auto& row : network.readout->weights)
            rows.push_back(decimals(row));
        doc["readout"] = {{"weights", rows}, {"biases", decimals(network.readout->biases)}};
    }
    return doc.dump(1) + "\n";
}

Network load_network(const std::filesystem::path& path)
{
    return parse_network(read_text(path));
}

void save_network(const Network& network, const std::filesystem::path& path)
{
    write_text(path, network_to_json(network));
}

std::string mapping_to_json(std::span<const MappedAcn> layer, const Provenance& p)
{
    json neurons = json::array();
    for (const MappedAcn& m : layer) {
        json caps = json::array();
        for (const auto& [i, c] : m.cap_pos)
            caps.push_back(capacitor(Tree::Pos, CapRole::Synapse, i, c));
        caps.push_back(capacitor(Tree::Pos, CapRole::Bias, 0, m.cb_pos));
        caps.push_back(capacitor(Tree::Pos, CapRole::Ballast, 0, m.cd_pos));
        for (const auto& [i, c] : m.cap_neg)
            caps.push_back(capacitor(Tree::Neg, CapRole::Synapse, i, c));
        caps.push_back(capacitor(Tree::Neg, CapRole::Bias, 0, m.cb_neg));
        caps.push_back(capacitor(Tree::Neg, CapRole::Ballast, 0, m.cd_neg));
        neurons.push_back({{"name", m.name},
                           {"size", m.size},
                           {"mapping_kind", to_string(m.kind)},
                           {"ct", format_decimal(m.ct)},
                           {"ct_pos", format_decimal(m.ct_pos)},
                           {"ct_neg", format_decimal(m.ct_neg)},
                           {"pillar_bias", format_decimal(m.pillar_bias)},
                           {"pillar_ballast", format_decimal(m.pillar_ballast)},
                           {"parasitic", {{"pos", format_decimal(m.par_pos)}, {"neg", format_decimal(m.par_neg)}}},
                           {"diagnostics",
                            {{"delta", format_decimal(m.diagnostics.delta)},
                             {"ca_pos", format_decimal(m.diagnostics.ca_pos)},
                             {"ca_neg", format_decimal(m.diagnostics.ca_neg)}}},
                           {"capacitors", caps}});
    }
    const json provenance = {{"mapping_kind", p.mapping_kind},
                             {"ct_mode", p.ct_mode},
                             {"ct", format_decimal(p.ct)},
                             {"c_min", format_decimal(p.c_min)},
                             {"v_max", format_decimal(p.v_max)},
                             {"pillar_bias", format_decimal(p.pillar_bias)},
                             {"pillar_ballast", format_decimal(p.pillar_ballast)},
                             {"parasitic_pos", format_decimal(p.parasitic_pos)},
                             {"parasitic_neg", format_decimal(p.parasitic_neg)},
                             {"prune_threshold", format_decimal(p.prune_threshold)},
                             {"source", p.source},
                             {"tool_version", p.tool_version}};
    const json doc = {{"format", "acn-mapping"},
                      {"schema_version", kSchemaVersion},
                      {"units", kUnits},
                      {"provenance", provenance},
                      {"neurons", neurons}};
    return doc.dump(1) + "\n";
}

MappingFile parse_mapping(std::string_view json_text)
{
    const json doc = parse_json(json_text);
    check_header(doc, "acn-mapping");

    MappingFile file;
    const json& p = require(doc, "provenance", "mapping");
    file.provenance.mapping_kind = p.value("mapping_kind", std::string());
    file.provenance.ct_mode = p.value("ct_mode", std::string());
    file.provenance.ct = read_value(require(p, "ct", "provenance"), "provenance.ct");
    file.provenance.c_min = read_value(require(p, "c_min", "provenance"), "provenance.c_min");
    file.provenance.v_max = read_value(require(p, "v_max", "provenance"), "provenance.v_max");
    file.provenance.pillar_bias = read_value(require(p, "pillar_bias", "provenance"), "provenance.pillar_bias");
    file.provenance.pillar_ballast = read_value(require(p, "pillar_ballast", "provenance"), "provenance.pillar_ballast");
    file.provenance.parasitic_pos = read_value(require(p, "parasitic_pos", "provenance"), "provenance.parasitic_pos");
    file.provenance.parasitic_neg = read_value(require(p, "parasitic_neg", "provenance"), "provenance.parasitic_neg");
    file.provenance.prune_threshold =
        read_value(require(p, "prune_threshold", "provenance"), "provenance.prune_threshold");
    file.provenance.source = p.value("source", std::string());
    file.provenance.tool_version = p.value("tool_version", std::string());

    const json& neurons = require(doc, "neurons", "mapping");
    if (!neurons.is_array())
        schema_error("mapping.neurons must be an array");
    for (std::size_t k = 0; k < neurons.size(); ++k) {
        const json& jn = neurons[k];
        const std::string where = "neurons[" + std::to_string(k) + "]";
        MappedAcn m;
        m.name = jn.value("name", std::string());
        m.size = require(jn, "size", where).get<std::size_t>();
        m.kind = parse_mapping_kind(require(jn, "mapping_kind", where).get<std::string>());
        m.ct = read_value(require(jn, "ct", where), where + ".ct");
        m.ct_pos = read_value(require(jn, "ct_pos", where), where + ".ct_pos");
        m.ct_neg = read_value(require(jn, "ct_neg", where), where + ".ct_neg");
        m.pillar_bias = read_value(require(jn, "pillar_bias", where), where + ".pillar_bias");
        m.pillar_ballast = read_value(require(jn, "pillar_ballast", where), where + ".pillar_ballast");
        const json& par = require(jn, "parasitic", where);
        m.par_pos = read_value(require(par, "pos", where), where + ".parasitic.pos");
        m.par_neg = read_value(require(par, "neg", where), where + ".parasitic.neg");
        const json& diag = require(jn, "diagnostics", where);
        m.diagnostics.delta = read_value(require(diag, "delta", where), where + ".diagnostics.delta");
        m.diagnostics.ca_pos = read_value(require(diag, "ca_pos", where), where + ".diagnostics.ca_pos");
        m.diagnostics.ca_neg = read_value(require(diag, "ca_neg", where), where + ".diagnostics.ca_neg");

        const json& caps = require(jn, "capacitors", where);
        if (!caps.is_array())
            schema_error(where + ".capacitors must be an array");
        for (const json& jc : caps) {
            const Tree tree = parse_tree(require(jc, "tree", where).get<std::string>(), where);
            const CapRole role = parse_role(require(jc, "role", where).get<std::string>(), where);
            const double value = read_value(require(jc, "fF", where), where + ".fF");
            if (value < 0.0)
                throw Error(ErrorCode::InvariantViolation, where + ": negative capacitance");
            const bool pos = tree == Tree::Pos;
            switch (role) {
            case CapRole::Synapse: {
                const auto index = require(jc, "index", where).get<std::size_t>();
                if (index >= m.size)
                    schema_error(where + ": synapse index out of range");
                (pos ? m.cap_pos : m.cap_neg)[index] = value;
                break;
            }
            case CapRole::Bias: (pos ? m.cb_pos : m.cb_neg) = value; break;
            case CapRole::Ballast: (pos ? m.cd_pos : m.cd_neg) = value; break;
            }
        }
        file.neurons.push_back(std::move(m));
    }
    return file;
}

void save_mapping(std::span<const MappedAcn> layer, const Provenance& provenance, const std::filesystem::path& path)
{
    write_text(path, mapping_to_json(layer, provenance));
}

MappingFile load_mapping(const std::filesystem::path& path)
{
    return parse_mapping(read_text(path));
}

Corpus parse_corpus(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || line.rfind("# acn-corpus v", 0) != 0)
        throw Error(ErrorCode::ParseError, "corpus must start with '# acn-corpus v1'");
    if (line != "# acn-corpus v" + std::to_string(kSchemaVersion))
        throw Error(ErrorCode::SchemaVersionError, "unsupported corpus header '" + line + "'");

    Corpus corpus;
    bool have_width = false;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream fields(line);
        std::string first;
        std::string second;
        fields >> first >> second;
        if (first == "width") {
            corpus.width = static_cast<std::size_t>(std::stoul(second));
            have_width = true;
            continue;
        }
        if (!have_width)
            throw Error(ErrorCode::ParseError, "corpus line " + std::to_string(line_no) + ": 'width' must come first");
        int label = 0;
        const auto res = std::from_chars(first.data(), first.data() + first.size(), label);
        if (res.ec != std::errc() || res.ptr != first.data() + first.size())
            throw Error(ErrorCode::ParseError, "corpus line " + std::to_string(line_no) + ": bad label");
        if (second.size() != corpus.width)
            throw Error(ErrorCode::SchemaMismatch, "corpus line " + std::to_string(line_no) + ": expected "
                                                       + std::to_string(corpus.width) + " bits");
        BitVector x(second.size());
        for (std::size_t i = 0; i < second.size(); ++i) {
            if (second[i] != '0' && second[i] != '1')
                throw Error(ErrorCode::ParseError, "corpus line " + std::to_string(line_no) + ": bits must be 0/1");
            x[i] = second[i] == '1' ? 1 : 0;
        }
        corpus.inputs.push_back(std::move(x));
        corpus.labels.push_back(label);
    }
    if (!have_width)
        throw Error(ErrorCode::ParseError, "corpus has no 'width' line");
    return corpus;
}

std::string corpus_to_text(const Corpus& corpus)
{
    std::string out = "# acn-corpus v" + std::to_string(kSchemaVersion) + "\nwidth " + std::to_string(corpus.width) + "\n";
    for (std::size_t k = 0; k < corpus.inputs.size(); ++k) {
        out += std::to_string(k < corpus.labels.size() ? corpus.labels[k] : -1);
        out += ' ';
        for (const std::uint8_t b : corpus.inputs[k])
            out += b ? '1' : '0';
        out += '\n';
    }
    return out;
}

Corpus load_corpus(const std::filesystem::path& path)
{
    return parse_corpus(read_text(path));
}

namespace {

std::uint64_t parse_count(const std::string& key, const std::string& text)
{
    std::uint64_t v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw Error(ErrorCode::ParseError, "sweep config: '" + key + "' needs a non-negative integer, got '" + text + "'");
    return v;
}

void set_sweep_key(SweepConfig& c, const std::string& key, const std::string& value)
{
    if (key == "label")
        c.label = value;
    else if (key == "n")
        c.n = parse_count(key, value);
    else if (key == "count")
        c.count = parse_count(key, value);
    else if (key == "sigma")
        c.sigma = parse_decimal(value);
    else if (key == "tau")
        c.tau = parse_decimal(value);
    else if (key == "mapping")
        c.kind = parse_mapping_kind(value);
    else if (key == "ct")
        c.ct = parse_decimal(value);
    else if (key == "pillar_bias")
        c.pillar_bias = parse_decimal(value);
    else if (key == "pillar_ballast")
        c.pillar_ballast = parse_decimal(value);
    else if (key == "v_max")
        c.v_max = parse_decimal(value);
    else if (key == "weights") {
        if (value != "real" && value != "binary")
            throw Error(ErrorCode::ParseError, "sweep config: weights must be real or binary");
        c.binarize = value == "binary";
    } else if (key == "seed")
        c.seed = parse_count(key, value);
    else if (key == "exhaustive_limit")
        c.exhaustive_limit = parse_count(key, value);
    else if (key == "samples")
        c.samples = parse_count(key, value);
    else if (key == "threads")
        c.threads = static_cast<unsigned>(parse_count(key, value));
    else
        throw Error(ErrorCode::ParseError, "sweep config: unknown key '" + key + "'");
}

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

SweepConfig sweep_from_json(const json& j)
{
    if (!j.is_object())
        throw Error(ErrorCode::ParseError, "sweep config entries must be JSON objects");
    SweepConfig c;
    for (const auto& [key, value] : j.items()) {
        if (value.is_string())
            set_sweep_key(c, key, value.get<std::string>());
        else if (value.is_boolean() && key == "binarize")
            c.binarize = value.get<bool>();
        else if (value.is_number())
            set_sweep_key(c, key, value.dump());
        else
            throw Error(ErrorCode::ParseError, "sweep config: bad value for '" + key + "'");
    }
    return c;
}

} // namespace

std::vector<SweepConfig> parse_sweep_config(std::string_view text)
{
    const std::string body = trim(text);
    std::vector<SweepConfig> out;
    if (!body.empty() && (body[0] == '{' || body[0] == '[')) {
        const json doc = parse_json(body);
        if (doc.is_array()) {
            for (const json& j : doc)
                out.push_back(sweep_from_json(j));
        } else {
            out.push_back(sweep_from_json(doc));
        }
    } else {
        SweepConfig c;
        std::istringstream in{std::string(text)};
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const std::string t = trim(line);
            if (t.empty() || t[0] == '#')
                continue;
            const auto eq = t.find('=');
            if (eq == std::string::npos)
                throw Error(ErrorCode::ParseError, "sweep config line " + std::to_string(line_no) + ": expected key=value");
            set_sweep_key(c, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
        }
        out.push_back(c);
    }
    if (out.empty())
        throw Error(ErrorCode::ParseError, "sweep config is empty");
    return out;
}

std::string sweep_csv(std::span<const SweepResult> results)
{
    std::string out = "label,mapping,n,weights,tau,sigma,count,seed,ct_fF,pillar_bias_fF,pillar_ballast_fF,v_max_V,"
                      "rejected,mean_cd_fF,dev_cd_fF,mean_C,dev_C,checks,mismatches\n";
    for (const SweepResult& r : results) {
        const SweepConfig& c = r.config;
        const LayerAggregates& a = r.report.aggregates;
        out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{:.4f},{:.4f},{:.6f},{:.6f},{},{}\n", c.label,
                           to_string(c.kind), c.n, c.binarize ? "binary" : "real", format_decimal(c.tau),
                           format_decimal(c.sigma), c.count, c.seed, format_decimal(c.ct),
                           format_decimal(c.pillar_bias), format_decimal(c.pillar_ballast), format_decimal(c.v_max),
                           r.rejected, a.sum_cd.mean, a.sum_cd.dev, a.cap_vec_norm.mean, a.cap_vec_norm.dev, r.checks,
                           r.mismatches);
    }
    return out;
}

std::string report_csv(const MappingReport& report)
{
    std::string out = "neuron,ct_fF,sum_cd_fF,cap_vec_norm,total_fF,psi,swing_pos_lo_V,swing_pos_hi_V,"
                      "swing_neg_lo_V,swing_neg_hi_V\n";
    for (const NeuronRecord& r : report.records) {
        out += fmt::format("{},{:.6f},{:.6f},{:.6f},{:.6f},{},{:.6f},{:.6f},{:.6f},{:.6f}\n", r.name, r.ct, r.sum_cd,
                           r.cap_vec_norm, r.total_capacitance, r.psi ? fmt::format("{:.6f}", *r.psi) : "",
                           r.swing_pos.lower, r.swing_pos.upper, r.swing_neg.lower, r.swing_neg.upper);
    }
    const LayerAggregates& a = report.aggregates;
    out += fmt::format("# neurons={} mean_ct_fF={:.4f} dev_ct_fF={:.4f} mean_cd_fF={:.4f} dev_cd_fF={:.4f} "
                       "mean_C={:.6f} dev_C={:.6f} layer_total_fF={:.4f} (population deviations)\n",
                       a.neurons, a.ct.mean, a.ct.dev, a.sum_cd.mean, a.sum_cd.dev, a.cap_vec_norm.mean,
                       a.cap_vec_norm.dev, a.total_capacitance);
    return out;
}

std::string svg_histogram(std::span<const double> values, std::size_t bins, double lo, double hi,
                          const std::string& title, const std::string& x_label)
{
    if (bins == 0 || !(hi > lo))
        throw Error(ErrorCode::InvalidArgument, "histogram needs bins > 0 and hi > lo");
    std::vector<std::size_t> counts(bins, 0);
    for (const double v : values) {
        if (v < lo || v > hi)
            continue;
        auto b = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
        counts[std::min(b, bins - 1)]++;
    }
    const std::size_t peak = std::max<std::size_t>(1, *std::max_element(counts.begin(), counts.end()));
    constexpr double width = 640, height = 400, left = 60, right = 20, top = 40, bottom = 50;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" "
        "font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
        width, height, width / 2, xml_escape(title));
    for (std::size_t b = 0; b < bins; ++b) {
        const double h = plot_h * static_cast<double>(counts[b]) / static_cast<double>(peak);
        svg += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"#4a7ab7\"/>\n",
                           left + plot_w * static_cast<double>(b) / static_cast<double>(bins), top + plot_h - h,
                           plot_w / static_cast<double>(bins) * 0.95, h);
    }
    svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", left, top + plot_h,
                       left + plot_w);
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{:.3g}</text>\n", left, top + plot_h + 16, lo);
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{:.3g}</text>\n", left + plot_w,
                       top + plot_h + 16, hi);
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", left + plot_w / 2, height - 12,
                       xml_escape(x_label));
    svg += fmt::format("<text x=\"12\" y=\"{}\">{}</text>\n", top + 12, peak);
    svg += "</svg>\n";
    return svg;
}

std::string svg_lines(std::span<const Series> series, const std::string& title, const std::string& x_label,
                      const std::string& y_label)
{
    double x_lo = std::numeric_limits<double>::infinity();
    double x_hi = -x_lo;
    double y_lo = 0.0;
    double y_hi = -std::numeric_limits<double>::infinity();
    for (const Series& s : series) {
        for (const double x : s.x) {
            x_lo = std::min(x_lo, x);
            x_hi = std::max(x_hi, x);
        }
        for (const double y : s.y) {
            y_lo = std::min(y_lo, y);
            y_hi = std::max(y_hi, y);
        }
    }
    if (!(x_hi > x_lo))
        x_hi = x_lo + 1.0;
    if (!(y_hi > y_lo))
        y_hi = y_lo + 1.0;
    constexpr double width = 640, height = 400, left = 60, right = 20, top = 40, bottom = 50;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;
    auto px = [&](double x) { return left + plot_w * (x - x_lo) / (x_hi - x_lo); };
    auto py = [&](double y) { return top + plot_h * (1.0 - (y - y_lo) / (y_hi - y_lo)); };
    static constexpr std::array<const char*, 4> colors = {"#c0392b", "#27ae60", "#2c3e50", "#8e44ad"};

    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\" font-family=\"sans-serif\" "
        "font-size=\"12\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
        width, height, width / 2, xml_escape(title));
    svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n", left,
                       top, plot_w, plot_h);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const Series& s = series[k];
        std::string points;
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
            points += fmt::format("{:.2f},{:.2f} ", px(s.x[i]), py(s.y[i]));
        svg += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
                           colors[k % colors.size()], points);
        svg += fmt::format("<text x=\"{}\" y=\"{}\" fill=\"{}\">{}</text>\n", left + 8, top + 16 + 14 * k,
                           colors[k % colors.size()], xml_escape(s.name));
    }
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{:.3g}</text>\n", left, top + plot_h + 16, x_lo);
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{:.3g}</text>\n", left + plot_w,
                       top + plot_h + 16, x_hi);
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.3g}</text>\n", left - 4, top + 4, y_hi);
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.3g}</text>\n", left - 4, top + plot_h, y_lo);
    svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", left + plot_w / 2, height - 12,
                       xml_escape(x_label));
    svg += fmt::format("<text x=\"14\" y=\"{}\" transform=\"rotate(-90 14 {})\" text-anchor=\"middle\">{}</text>\n",
                       top + plot_h / 2, top + plot_h / 2, xml_escape(y_label));
    svg += "</svg>\n";
    return svg;
}

std::string read_text(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
        throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
}

std::string file_digest(const std::filesystem::path& path)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : read_text(path)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

} // namespace acn::io
