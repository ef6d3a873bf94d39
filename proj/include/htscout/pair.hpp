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

#ifndef HTSCOUT_PAIR_HPP
#define HTSCOUT_PAIR_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "htscout/path.hpp"

namespace htscout {

/// Type1: identical gate-kind sequences. Type2: equal kind multisets in a
/// different order.
enum class SymmetryType { Type1, Type2, None };

std::string_view to_string(SymmetryType t);
SymmetryType parse_symmetry(std::string_view text);

struct SymmetricPathPair {
    std::size_t id = 0;
    Path suspect;   ///< passes through covered_net
    Path reference; ///< avoids covered_net
    SymmetryType symmetry = SymmetryType::None;
    double rank = 0.0; ///< mean matched-gate distance
    NetId covered_net{};
    /// First gate after covered_net on the suspect path (the fanout branch).
    std::optional<GateId> branch;
    bool created = false; ///< reference synthesized by gate insertion
    std::vector<std::string> extra_gates;
    /// Sum over matched gates of |fanout(suspect gate) - fanout(reference gate)|.
    std::size_t fanout_difference = 0;
};

} // namespace htscout

#endif // HTSCOUT_PAIR_HPP
