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

#ifndef HTSCOUT_EQUIVALENCE_HPP
#define HTSCOUT_EQUIVALENCE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "htscout/netlist.hpp"

namespace htscout {

struct EquivalenceOptions {
    std::uint64_t random_vectors = 100000;
    std::uint64_t seed = 1;
    std::size_t sat_max_inputs = 20; ///< SAT miter only at or below this PI count
    std::int64_t conflict_limit = -1;
};

struct EquivalenceResult {
    bool random_ok = false;
    std::uint64_t vectors_checked = 0;
    bool sat_attempted = false;
    bool sat_proved = false;
    /// First distinguishing input assignment found, by primary-input name.
    std::optional<std::vector<std::pair<std::string, bool>>> counterexample;

    [[nodiscard]] bool equivalent() const {
        return random_ok && (!sat_attempted || sat_proved);
    }
};

/// Compares primary outputs matched by name under random vectors and, for
/// small input counts, proves equivalence with a SAT miter.
EquivalenceResult check_equivalence(const Netlist &a, const Netlist &b,
                                    const EquivalenceOptions &options = {});

} // namespace htscout

#endif // HTSCOUT_EQUIVALENCE_HPP
