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

#ifndef HTSCOUT_ACTIVITY_HPP
#define HTSCOUT_ACTIVITY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "htscout/netlist.hpp"
#include "htscout/util.hpp"

namespace htscout {

/// Toggle counts between consecutive random vectors, indexed by net id.
struct ActivityProfile {
    std::uint64_t vectors_applied = 0;
    std::vector<std::uint64_t> toggles;
    std::vector<double> activity; ///< toggles / (vectors_applied - 1)

    [[nodiscard]] double of(NetId net) const { return activity.at(index_of(net)); }
};

struct VulnerableNetSet {
    double threshold = 1e-3;
    std::vector<NetId> nets; ///< ascending activity, ties by net id
};

/// Word of 64 consecutive input values for primary input `pi` in vector
/// block `block`. Counter-based, so any block can be regenerated alone.
constexpr std::uint64_t input_word(std::uint64_t seed, std::uint64_t pi, std::uint64_t block) {
    return counter_seed(counter_seed(seed, pi), block);
}

/// Applies `vector_count` uniform random vectors. The result depends only on
/// (netlist, vector_count, seed), never on `jobs`.
ActivityProfile simulate_random(const Netlist &netlist, std::uint64_t vector_count,
                                std::uint64_t seed, unsigned jobs = 1);

/// Non-PI, non-tie nets with activity strictly below `threshold`.
VulnerableNetSet vulnerable_nets(const ActivityProfile &profile, const Netlist &netlist,
                                 double threshold);

/// CSV `net,toggles,activity`, one row per net in id order.
std::string activity_csv(const ActivityProfile &profile, const Netlist &netlist);

} // namespace htscout

#endif // HTSCOUT_ACTIVITY_HPP
