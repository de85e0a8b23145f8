// SPDX-License-Identifier: Apache-2.0
//
// Test-only reference computations. Nothing here calls into the mapper or the
// simulator, so the checks stay independent of the code under test.
#pragma once

#include "acn/model.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace acn::test {

inline std::vector<std::uint8_t> bits_of(std::uint64_t k, std::size_t n)
{
    std::vector<std::uint8_t> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = static_cast<std::uint8_t>((k >> i) & 1U);
    return x;
}

inline double naive_dot(const std::vector<double>& w, const std::vector<std::uint8_t>& x)
{
    double s = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
        s += w[i] * static_cast<double>(x[i]);
    return s;
}

/// Membrane voltage of one tree by explicit charge sharing: every capacitor
/// hangs off the node, the switched-on ones (and the bias) see V_pc, the rest
/// see ground.
struct TreeCaps {
    std::vector<double> synapse; // dense, 0 where absent
    double bias = 0.0;
    double ballast = 0.0;
    double parasitic = 0.0;
};

inline double divider(const TreeCaps& t, const std::vector<std::uint8_t>& x, double v_pc)
{
    double driven = t.bias;
    double grounded = t.ballast + t.parasitic;
    for (std::size_t i = 0; i < t.synapse.size(); ++i)
        (x[i] ? driven : grounded) += t.synapse[i];
    return v_pc * driven / (driven + grounded);
}

inline TreeCaps pos_tree(const MappedAcn& m)
{
    TreeCaps t;
    t.synapse.assign(m.size, 0.0);
    for (const auto& [i, c] : m.cap_pos)
        t.synapse[i] = c;
    t.bias = m.cb_pos;
    t.ballast = m.cd_pos;
    t.parasitic = m.par_pos;
    return t;
}

inline TreeCaps neg_tree(const MappedAcn& m)
{
    TreeCaps t;
    t.synapse.assign(m.size, 0.0);
    for (const auto& [i, c] : m.cap_neg)
        t.synapse[i] = c;
    t.bias = m.cb_neg;
    t.ballast = m.cd_neg;
    t.parasitic = m.par_neg;
    return t;
}

/// Comparator decision from the charge-sharing oracle.
inline bool oracle_output(const MappedAcn& m, const std::vector<std::uint8_t>& x, double v_pc = 1.0)
{
    return divider(pos_tree(m), x, v_pc) >= divider(neg_tree(m), x, v_pc);
}

/// Random spec with N(0, sigma) weights and the given bias.
inline NeuronSpec random_spec(std::mt19937_64& gen, std::size_t n, double sigma, double tau)
{
    std::normal_distribution<double> dist(0.0, sigma);
    NeuronSpec spec;
    spec.name = "rand";
    spec.weights.resize(n);
    for (double& w : spec.weights)
        w = dist(gen);
    spec.bias = tau;
    return spec;
}

inline double relative_gap(double a, double b)
{
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

} // namespace acn::test
