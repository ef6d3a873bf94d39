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

#ifndef HTSCOUT_SENSITIZE_HPP
#define HTSCOUT_SENSITIZE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "htscout/cnf.hpp"
#include "htscout/path.hpp"
#include "htscout/sat.hpp"

namespace htscout {

enum class SensitizationCriterion {
    /// Every off-path input of every on-path gate with a controlling value
    /// can simultaneously hold the non-controlling value.
    NonControlling,
};

std::string_view to_string(SensitizationCriterion c);
SensitizationCriterion parse_criterion(std::string_view text);

enum class SensitizeOutcome { Sensitizable, NotSensitizable, Timeout };

struct SensitizeOptions {
    SensitizationCriterion criterion = SensitizationCriterion::NonControlling;
    std::int64_t conflict_limit = 200000; ///< per query; < 0 disables
};

/// Incremental checker over one netlist: the circuit is encoded once and
/// each path becomes a set of assumptions. Results are memoized on the
/// assumption set. Not thread-safe; use one checker per worker.
class SensitizationChecker {
public:
    SensitizationChecker(const Netlist &netlist, SensitizeOptions options = {});

    SensitizeOutcome check(const Path &path);
    /// Timeout counts as not sensitizable.
    bool is_sensitizable(const Path &path) {
        return check(path) == SensitizeOutcome::Sensitizable;
    }

    /// Assumption literals for `path` (sorted, deduplicated).
    [[nodiscard]] std::vector<int> constraints(const Path &path) const;

    /// CNF of the circuit plus the path's side-input constraints as units.
    [[nodiscard]] std::string dimacs(const Path &path) const;

    [[nodiscard]] std::uint64_t timeouts() const { return timeouts_; }
    [[nodiscard]] std::uint64_t queries() const { return queries_; }

    /// Model from the last Sensitizable answer (bit per primary input), if
    /// the answer was not served from the memo.
    [[nodiscard]] const std::vector<bool> &last_witness() const { return witness_; }

private:
    const Netlist *netlist_;
    SensitizeOptions options_;
    CircuitEncoding encoding_;
    sat::Solver solver_;
    std::map<std::vector<int>, SensitizeOutcome> memo_;
    std::vector<bool> witness_;
    std::uint64_t timeouts_ = 0;
    std::uint64_t queries_ = 0;
};

/// One-shot convenience wrapper.
bool is_sensitizable(const Netlist &netlist, const Path &path,
                     SensitizationCriterion criterion = SensitizationCriterion::NonControlling);

} // namespace htscout

#endif // HTSCOUT_SENSITIZE_HPP
