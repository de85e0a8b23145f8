// SPDX-License-Identifier: Apache-2.0
#include "acn/harness.hpp"
#include "acn/io.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>

using namespace acn;

namespace {

const std::filesystem::path kDir = ACN_FIXTURE_DIR;

std::vector<BitVector> read_hidden(const std::string& name)
{
    std::ifstream in(kDir / name);
    std::vector<BitVector> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        BitVector row;
        for (const char c : line)
            row.push_back(c == '1' ? 1 : 0);
        rows.push_back(row);
    }
    return rows;
}

} // namespace

TEST(Fixtures, BinaryNetworkShape)
{
    const Network net = io::load_network(kDir / "digits_binary.json");
    EXPECT_EQ(net.inputs, 64U);
    ASSERT_EQ(net.hidden.size(), 16U);
    for (const NeuronSpec& s : net.hidden) {
        EXPECT_EQ(s.quantization.kind, QuantizationKind::Binary);
        for (const double w : s.weights)
            EXPECT_TRUE(w == 1.0 || w == -1.0);
    }
    ASSERT_TRUE(net.readout.has_value());
    EXPECT_EQ(net.readout->weights.size(), 10U);
}

TEST(Fixtures, CorpusShape)
{
    const Corpus c = io::load_corpus(kDir / "digits100.corpus");
    EXPECT_EQ(c.width, 64U);
    EXPECT_EQ(c.inputs.size(), 100U);
    EXPECT_EQ(c.labels.size(), 100U);
}

class FixtureLayer : public ::testing::TestWithParam<const char*> {};

TEST_P(FixtureLayer, HardwareBitsMatchShippedSoftwareBits)
{
    const std::string kind = GetParam();
    const Network net = io::load_network(kDir / ("digits_" + kind + ".json"));
    const Corpus corpus = io::load_corpus(kDir / "digits100.corpus");
    const auto expected = read_hidden("digits_" + kind + ".hidden");
    for (const MappingKind mk : {MappingKind::Conditional, MappingKind::ConditionalVectoredBias,
                                 MappingKind::Balanced}) {
        PipelineOptions opts;
        opts.kind = mk;
        opts.tech.c_min = 2.0;
        opts.tech.pillar_bias = 2.0;
        opts.tech.pillar_ballast = 2.0;
        const LayerEvaluation ev = evaluate_layer(net, corpus, opts);
        EXPECT_EQ(ev.software_bits, expected) << to_string(mk);
        EXPECT_EQ(ev.hardware_bits, expected) << to_string(mk);
        EXPECT_EQ(ev.hardware_accuracy, ev.software_accuracy);
    }
}

INSTANTIATE_TEST_SUITE_P(Digits, FixtureLayer, ::testing::Values("real", "kbit", "binary"));
