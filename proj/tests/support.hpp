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

// Shared fixtures and hand-rolled generators for the unit tests.
#ifndef HTSCOUT_TESTS_SUPPORT_HPP
#define HTSCOUT_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "htscout/logic_sim.hpp"
#include "htscout/netlist.hpp"
#include "htscout/path.hpp"

namespace test {

inline std::string data_path(const std::string &name) { return std::string(HTSCOUT_DATA_DIR) + "/" + name; }

inline htscout::Netlist c17() { return htscout::load_bench(data_path("bench/c17.bench")); }

/// Random combinational netlist: each gate reads 1-3 earlier nets, every
/// net left without a reader becomes a primary output.
inline htscout::NetlistDraft random_draft(std::uint64_t seed, int inputs, int gates,
                                          std::vector<htscout::GateKind> kinds = {}) {
    using htscout::GateKind;
    if (kinds.empty())
        kinds = {GateKind::And, GateKind::Nand, GateKind::Or, GateKind::Nor,
                 GateKind::Xor, GateKind::Xnor, GateKind::Not, GateKind::Buf};
    std::mt19937_64 rng(seed);
    htscout::NetlistDraft d;
    std::vector<std::string> nets;
    std::vector<int> readers;
    for (int i = 0; i < inputs; ++i) {
        nets.push_back("i" + std::to_string(i));
        readers.push_back(0);
        d.add_input(nets.back());
    }
    for (int g = 0; g < gates; ++g) {
        const GateKind kind = kinds[rng() % kinds.size()];
        const bool unary = kind == GateKind::Not || kind == GateKind::Buf;
        const std::size_t fanin = unary ? 1 : 2 + rng() % 2;
        std::vector<std::string> in;
        for (std::size_t k = 0; k < fanin; ++k) {
            // Bias towards recent nets to get deeper circuits.
            const std::size_t span = std::min<std::size_t>(nets.size(), 8);
            std::size_t pick = rng() % 3 == 0 ? rng() % nets.size() : nets.size() - 1 - rng() % span;
            if (std::find(in.begin(), in.end(), nets[pick]) != in.end())
                pick = rng() % nets.size();
            if (std::find(in.begin(), in.end(), nets[pick]) != in.end())
                continue;
            in.push_back(nets[pick]);
            ++readers[pick];
        }
        if (in.size() < (unary ? 1u : 2u)) {
            for (std::size_t pick = 0; pick < nets.size() && in.size() < 2; ++pick)
                if (std::find(in.begin(), in.end(), nets[pick]) == in.end()) {
                    in.push_back(nets[pick]);
                    ++readers[pick];
                }
        }
        nets.push_back("g" + std::to_string(g));
        readers.push_back(0);
        d.add_gate(nets.back(), kind, in);
    }
    for (std::size_t n = static_cast<std::size_t>(inputs); n < nets.size(); ++n)
        if (readers[n] == 0)
            d.add_output(nets[n]);
    return d;
}

inline htscout::Netlist random_netlist(std::uint64_t seed, int inputs, int gates,
                                       std::vector<htscout::GateKind> kinds = {}) {
    return htscout::Netlist::build(random_draft(seed, inputs, gates, std::move(kinds)));
}

/// Net values for one input assignment (bit k of `bits` drives PI k).
inline std::vector<bool> evaluate(const htscout::Netlist &nl, std::uint64_t bits) {
    std::vector<std::uint64_t> pi(nl.primary_inputs().size());
    for (std::size_t k = 0; k < pi.size(); ++k)
        pi[k] = (bits >> k) & 1u ? ~std::uint64_t{0} : 0;
    std::vector<std::uint64_t> words;
    htscout::LogicSimulator(nl).evaluate(pi, words);
    std::vector<bool> out(words.size());
    for (std::size_t n = 0; n < words.size(); ++n)
        out[n] = words[n] & 1u;
    return out;
}

/// Every PI-to-PO path by plain DFS over net sinks, as net-id sequences.
inline std::vector<std::vector<htscout::NetId>> dfs_paths(const htscout::Netlist &nl) {
    std::vector<std::vector<htscout::NetId>> out;
    std::vector<htscout::NetId> stack;
    std::function<void(htscout::NetId)> walk = [&](htscout::NetId n) {
        stack.push_back(n);
        const auto &net = nl.net(n);
        if (net.primary_output && stack.size() > 1)
            out.push_back(stack);
        for (const auto &s : net.sinks)
            walk(*nl.gate(s.gate).output);
        stack.pop_back();
    };
    for (htscout::NetId pi : nl.primary_inputs())
        walk(pi);
    return out;
}

} // namespace test

#endif // HTSCOUT_TESTS_SUPPORT_HPP
