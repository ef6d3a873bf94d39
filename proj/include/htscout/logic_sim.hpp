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

#ifndef HTSCOUT_LOGIC_SIM_HPP
#define HTSCOUT_LOGIC_SIM_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "htscout/netlist.hpp"

namespace htscout {

/// Bit-parallel zero-delay evaluator: bit j of every word belongs to vector j.
class LogicSimulator {
public:
    explicit LogicSimulator(const Netlist &netlist) : netlist_(&netlist) {}

    /// `pi_words[k]` drives primary_inputs()[k]; `net_words` is resized to
    /// net_count() and receives the value of every net.
    void evaluate(std::span<const std::uint64_t> pi_words,
                  std::vector<std::uint64_t> &net_words) const;

    /// Values of the primary outputs, in primary_outputs() order.
    [[nodiscard]] std::vector<std::uint64_t>
    outputs(std::span<const std::uint64_t> pi_words) const;

private:
    const Netlist *netlist_;
};

} // namespace htscout

#endif // HTSCOUT_LOGIC_SIM_HPP
