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

#include "htscout/gate_kind.hpp"

#include <algorithm>
#include <cctype>

namespace htscout {

namespace {

constexpr std::array<std::string_view, kGateKindCount> kNames = {
    "INPUT", "OUTPUT", "AND", "NAND", "OR",     "NOR",
    "XOR",   "XNOR",   "NOT", "BUF",  "CONST0", "CONST1",
};

} // namespace

std::string_view to_string(GateKind kind) { return kNames[to_index(kind)]; }

std::optional<GateKind> parse_gate_kind(std::string_view text) {
    std::string upper(text);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    if (upper == "BUFF")
        return GateKind::Buf;
    if (upper == "INV")
        return GateKind::Not;
    for (std::size_t i = 0; i < kNames.size(); ++i) {
        if (kNames[i] == upper)
            return kAllGateKinds[i];
    }
    return std::nullopt;
}

} // namespace htscout
