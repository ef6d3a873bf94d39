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

#include "htscout/logic_sim.hpp"

#include "htscout/error.hpp"

namespace htscout {

namespace {

struct NetWordRange {
    const std::vector<NetId> *inputs;
    const std::vector<std::uint64_t> *words;

    struct Iter {
        std::vector<NetId>::const_iterator it;
        const std::vector<std::uint64_t> *words;
        std::uint64_t operator*() const { return (*words)[index_of(*it)]; }
        Iter &operator++() {
            ++it;
            return *this;
        }
        bool operator!=(const Iter &o) const { return it != o.it; }
    };
    [[nodiscard]] Iter begin() const { return {inputs->begin(), words}; }
    [[nodiscard]] Iter end() const { return {inputs->end(), words}; }
};

} // namespace

void LogicSimulator::evaluate(std::span<const std::uint64_t> pi_words,
                              std::vector<std::uint64_t> &net_words) const {
    const Netlist &nl = *netlist_;
    if (pi_words.size() != nl.primary_inputs().size())
        throw ConfigError("simulator: expected " + std::to_string(nl.primary_inputs().size()) +
                          " input words, got " + std::to_string(pi_words.size()));
    net_words.assign(nl.net_count(), 0);
    const auto pis = nl.primary_inputs();
    for (std::size_t k = 0; k < pis.size(); ++k)
        net_words[index_of(pis[k])] = pi_words[k];
    for (GateId gid : nl.topo_order()) {
        const Gate &g = nl.gate(gid);
        if (!g.output || g.kind == GateKind::Input)
            continue;
        net_words[index_of(*g.output)] =
            evaluate_word(g.kind, NetWordRange{&g.inputs, &net_words});
    }
}

std::vector<std::uint64_t>
LogicSimulator::outputs(std::span<const std::uint64_t> pi_words) const {
    std::vector<std::uint64_t> nets;
    evaluate(pi_words, nets);
    std::vector<std::uint64_t> out;
    for (NetId po : netlist_->primary_outputs())
        out.push_back(nets[index_of(po)]);
    return out;
}

} // namespace htscout
