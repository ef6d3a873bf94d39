/*
 * SPDX-FileCopyrightText: Copyright 2026 The htscout Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include "htscout/activity.hpp"
#include "htscout/error.hpp"
#include "support.hpp"

using namespace htscout;

namespace {

bool scalar_gate(GateKind kind, const std::vector<bool> &in) {
    switch (kind) {
    case GateKind::And:
        return std::all_of(in.begin(), in.end(), [](bool b) { return b; });
    case GateKind::Nand:
        return !std::all_of(in.begin(), in.end(), [](bool b) { return b; });
    case GateKind::Or:
        return std::any_of(in.begin(), in.end(), [](bool b) { return b; });
    case GateKind::Nor:
        return !std::any_of(in.begin(), in.end(), [](bool b) { return b; });
    case GateKind::Xor:
        return std::count(in.begin(), in.end(), true) % 2 == 1;
    case GateKind::Xnor:
        return std::count(in.begin(), in.end(), true) % 2 == 0;
    case GateKind::Not:
        return !in[0];
    case GateKind::Const1:
        return true;
    case GateKind::Const0:
        return false;
    default:
        return in.empty() ? false : in[0];
    }
}

// Two-pass oracle: record every net's full waveform one vector at a time,
// then count value changes.
std::vector<std::uint64_t> waveform_toggles(const Netlist &nl, std::uint64_t vectors, std::uint64_t seed) {
    std::vector<std::vector<bool>> wave(nl.net_count());
    const auto pis = nl.primary_inputs();
    for (std::uint64_t v = 0; v < vectors; ++v) {
        std::vector<bool> value(nl.net_count(), false);
        for (std::size_t k = 0; k < pis.size(); ++k)
            value[index_of(pis[k])] = (input_word(seed, k, v / 64) >> (v % 64)) & 1u;
        for (GateId g : nl.topo_order()) {
            const Gate &gate = nl.gate(g);
            if (!gate.output || gate.kind == GateKind::Input)
                continue;
            std::vector<bool> in;
            for (NetId n : gate.inputs)
                in.push_back(value[index_of(n)]);
            value[index_of(*gate.output)] = scalar_gate(gate.kind, in);
        }
        for (std::size_t n = 0; n < nl.net_count(); ++n)
            wave[n].push_back(value[n]);
    }
    std::vector<std::uint64_t> toggles(nl.net_count(), 0);
    for (std::size_t n = 0; n < nl.net_count(); ++n)
        for (std::size_t v = 1; v < wave[n].size(); ++v)
            toggles[n] += wave[n][v] != wave[n][v - 1];
    return toggles;
}

} // namespace

TEST_CASE("bit-parallel activity matches the waveform oracle") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        const Netlist nl = test::random_netlist(seed, 4, 10);
        for (std::uint64_t vectors : {2ull, 63ull, 64ull, 65ull, 200ull, 1000ull}) {
            const ActivityProfile p = simulate_random(nl, vectors, seed * 31, 1);
            CHECK(p.toggles == waveform_toggles(nl, vectors, seed * 31));
        }
    }
}

TEST_CASE("chunk boundaries are counted once") {
    // 256 blocks per chunk: cross the boundary.
    const Netlist nl = test::c17();
    const std::uint64_t vectors = 64 * 256 + 100;
    const ActivityProfile p = simulate_random(nl, vectors, 5, 1);
    CHECK(p.toggles == waveform_toggles(nl, vectors, 5));
}

TEST_CASE("result is independent of the worker count") {
    const Netlist nl = test::random_netlist(77, 8, 60);
    const auto a = simulate_random(nl, 100000, 9, 1);
    const auto b = simulate_random(nl, 100000, 9, 4);
    CHECK(a.toggles == b.toggles);
    CHECK(simulate_random(nl, 100000, 9, 1).toggles == a.toggles);
}

TEST_CASE("constant net never toggles") {
    const Netlist nl = parse_bench("INPUT(x)\nnx = NOT(x)\nz = AND(x, nx)\ny = OR(z, x)\nOUTPUT(y)\n");
    const auto p = simulate_random(nl, 10000, 1);
    CHECK(p.of(nl.net_id("z")) == 0.0);
    const auto v = vulnerable_nets(p, nl, 1e-9);
    REQUIRE(v.nets.size() == 1);
    CHECK(v.nets[0] == nl.net_id("z"));
}

TEST_CASE("primary-input activity is close to one half") {
    const Netlist nl = parse_bench("INPUT(a)\nb = BUF(a)\nOUTPUT(b)\n");
    const auto p = simulate_random(nl, 100000, 3);
    CHECK(std::abs(p.of(nl.net_id("a")) - 0.5) < 0.01);
    CHECK(std::abs(p.of(nl.net_id("b")) - 0.5) < 0.01);
}

TEST_CASE("vulnerable set boundaries") {
    const Netlist nl = test::c17();
    const auto p = simulate_random(nl, 20000, 2);
    CHECK(vulnerable_nets(p, nl, 1e-3).nets.empty());
    CHECK(vulnerable_nets(p, nl, 1.0).nets.size() == nl.net_count() - nl.primary_inputs().size());
    CHECK_THROWS_AS((void)vulnerable_nets(p, nl, 0.0), ConfigError);
    CHECK_THROWS_AS((void)simulate_random(nl, 1, 2), ConfigError);
}

TEST_CASE("vulnerable sets are monotone in the threshold and ordered") {
    for (std::uint64_t seed = 40; seed < 50; ++seed) {
        const Netlist nl = test::random_netlist(seed, 6, 40);
        const auto p = simulate_random(nl, 5000, seed);
        std::vector<NetId> prev;
        for (double t : {0.05, 0.1, 0.2, 0.3, 0.5, 1.0}) {
            const auto v = vulnerable_nets(p, nl, t);
            for (NetId n : prev)
                CHECK(std::find(v.nets.begin(), v.nets.end(), n) != v.nets.end());
            for (std::size_t k = 0; k < v.nets.size(); ++k) {
                CHECK(p.of(v.nets[k]) < t);
                if (k > 0) {
                    const double a = p.of(v.nets[k - 1]);
                    const double b = p.of(v.nets[k]);
                    CHECK((a < b || (a == b && index_of(v.nets[k - 1]) < index_of(v.nets[k]))));
                }
            }
            prev = v.nets;
        }
    }
}

TEST_CASE("activity csv has one row per net") {
    const Netlist nl = test::c17();
    const std::string csv = activity_csv(simulate_random(nl, 1000, 1), nl);
    CHECK(csv.rfind("net,toggles,activity\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(nl.net_count() + 1));
}
