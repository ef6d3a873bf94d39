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

#include "htscout/activity.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "htscout/error.hpp"
#include "htscout/logic_sim.hpp"
#include "htscout/util.hpp"

namespace htscout {

namespace {

constexpr std::uint64_t kBlocksPerChunk = 256;

std::uint64_t low_mask(std::uint64_t bits) {
    return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

} // namespace

ActivityProfile simulate_random(const Netlist &netlist, std::uint64_t vector_count,
                                std::uint64_t seed, unsigned jobs) {
    if (vector_count < 2)
        throw ConfigError("activity: at least 2 vectors are required");
    const LogicSimulator sim(netlist);
    const std::size_t pi_count = netlist.primary_inputs().size();
    const std::size_t net_count = netlist.net_count();
    const std::uint64_t blocks = (vector_count + 63) / 64;
    const std::uint64_t chunks = (blocks + kBlocksPerChunk - 1) / kBlocksPerChunk;

    std::vector<std::vector<std::uint64_t>> partial(chunks);
    parallel_for(chunks, jobs, [&](std::size_t c) {
        std::vector<std::uint64_t> counts(net_count, 0);
        std::vector<std::uint64_t> pi_words(pi_count);
        std::vector<std::uint64_t> values;
        std::vector<std::uint64_t> prev_last(net_count, 0);
        const std::uint64_t first = c * kBlocksPerChunk;
        const std::uint64_t last = std::min(blocks, first + kBlocksPerChunk);
        // The toggle between block b-1's last vector and block b's first
        // belongs to block b, so a chunk re-simulates its predecessor block.
        const std::uint64_t start = first == 0 ? 0 : first - 1;
        for (std::uint64_t b = start; b < last; ++b) {
            for (std::size_t k = 0; k < pi_count; ++k)
                pi_words[k] = input_word(seed, k, b);
            sim.evaluate(pi_words, values);
            const std::uint64_t valid = std::min<std::uint64_t>(64, vector_count - b * 64);
            if (b >= first) {
                // Bit j of (w ^ (w >> 1)) compares vectors j and j+1.
                const std::uint64_t inner = low_mask(valid - 1);
                for (std::size_t n = 0; n < net_count; ++n) {
                    const std::uint64_t w = values[n];
                    std::uint64_t t = static_cast<std::uint64_t>(std::popcount((w ^ (w >> 1)) & inner));
                    if (b > 0)
                        t += ((w & 1) != prev_last[n]) ? 1 : 0;
                    counts[n] += t;
                }
            }
            for (std::size_t n = 0; n < net_count; ++n)
                prev_last[n] = (values[n] >> 63) & 1;
        }
        partial[c] = std::move(counts);
    });

    ActivityProfile profile;
    profile.vectors_applied = vector_count;
    profile.toggles.assign(net_count, 0);
    for (const auto &counts : partial)
        for (std::size_t n = 0; n < net_count; ++n)
            profile.toggles[n] += counts[n];
    profile.activity.resize(net_count);
    const double transitions = static_cast<double>(vector_count - 1);
    for (std::size_t n = 0; n < net_count; ++n)
        profile.activity[n] = static_cast<double>(profile.toggles[n]) / transitions;
    return profile;
}

VulnerableNetSet vulnerable_nets(const ActivityProfile &profile, const Netlist &netlist,
                                 double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0))
        throw ConfigError("activity threshold must lie in (0, 1]");
    if (profile.activity.size() != netlist.net_count())
        throw ConfigError("activity profile does not match the netlist");
    VulnerableNetSet set;
    set.threshold = threshold;
    for (std::size_t n = 0; n < netlist.net_count(); ++n) {
        const Net &net = netlist.nets()[n];
        if (net.primary_input || is_constant(netlist.gate(net.driver).kind))
            continue;
        if (profile.activity[n] < threshold)
            set.nets.push_back(NetId{static_cast<std::uint32_t>(n)});
    }
    std::stable_sort(set.nets.begin(), set.nets.end(), [&](NetId a, NetId b) {
        return profile.of(a) < profile.of(b);
    });
    return set;
}

std::string activity_csv(const ActivityProfile &profile, const Netlist &netlist) {
    std::ostringstream out;
    out << "net,toggles,activity\n";
    for (std::size_t n = 0; n < netlist.net_count(); ++n)
        out << netlist.nets()[n].name << ',' << profile.toggles.at(n) << ','
            << format_double(profile.activity.at(n)) << '\n';
    return out.str();
}

} // namespace htscout
