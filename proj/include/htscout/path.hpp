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

#ifndef HTSCOUT_PATH_HPP
#define HTSCOUT_PATH_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "htscout/netlist.hpp"

namespace htscout {

enum class Transition { Rise, Fall };

constexpr Transition flip(Transition t) {
    return t == Transition::Rise ? Transition::Fall : Transition::Rise;
}

std::string_view to_string(Transition t);

/// Structural PI-to-PO path. `hops` lists the logic gates traversed with the
/// on-path pin of each; `nets` is [start, output of hop 1, ..., end], so
/// nets.size() == hops.size() + 1.
struct Path {
    std::vector<PinRef> hops;
    NetId start{};
    NetId end{};
    std::vector<NetId> nets;

    /// Number of logic gates.
    [[nodiscard]] std::size_t length() const { return hops.size(); }
    [[nodiscard]] bool contains(NetId net) const;
    [[nodiscard]] bool contains_gate(GateId gate) const;

    bool operator==(const Path &) const = default;
};

struct PathLimits {
    std::size_t max_paths = 10000;
    std::size_t max_length = 64;
};

struct PathSet {
    std::vector<Path> paths;
    bool truncated = false; ///< some path was dropped by a limit
};

/// Every structural path whose net list contains `net`: backward prefixes
/// to primary inputs combined with forward suffixes to primary outputs.
/// Order: prefix-major, prefixes by pin order, suffixes by sink order with
/// a primary-output end before the net's sinks.
PathSet enumerate_paths(const Netlist &netlist, NetId net, const PathLimits &limits = {});

/// Every structural PI-to-PO path, grouped by primary input in PI order.
PathSet enumerate_all_paths(const Netlist &netlist, const PathLimits &limits);

/// Number of structural paths (with at least one gate), without building them.
double count_paths(const Netlist &netlist);

/// Throws NetlistError if `path` is not a connected PI-to-PO path of `netlist`.
void check_path(const Netlist &netlist, const Path &path);

/// Transition arriving at each hop's on-path input.
std::vector<Transition> transition_polarity(const Path &path, const Netlist &netlist,
                                            Transition input);

std::vector<GateKind> kind_sequence(const Path &path, const Netlist &netlist);

nlohmann::json path_json(const Path &path, const Netlist &netlist);
/// One JSON object per line: {net_sequence, gate_sequence, sensitizable}.
std::string paths_jsonl(const std::vector<Path> &paths, const std::vector<bool> &sensitizable,
                        const Netlist &netlist);

/// Rebuilds a path from its net-name sequence in `netlist`; hop pins are the
/// first pin of each sink gate reading the previous net.
Path path_from_net_names(const Netlist &netlist, const std::vector<std::string> &nets);

} // namespace htscout

#endif // HTSCOUT_PATH_HPP
