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

#ifndef HTSCOUT_SYMMETRY_HPP
#define HTSCOUT_SYMMETRY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "htscout/delay.hpp"
#include "htscout/equivalence.hpp"
#include "htscout/pair.hpp"
#include "htscout/path.hpp"
#include "htscout/placement.hpp"
#include "htscout/sensitize.hpp"

namespace htscout {

/// Type1 for equal sequences, Type2 for equal multisets, None otherwise.
SymmetryType classify_kinds(const std::vector<GateKind> &a, const std::vector<GateKind> &b);
/// As classify_kinds, except that a path is never symmetric to itself.
SymmetryType classify_pair(const Netlist &netlist, const Path &a, const Path &b);

struct RankResult {
    double rank = 0.0;
    /// matched[i] is the reference hop index assigned to suspect hop i.
    std::vector<std::size_t> matched;
};

/// Greedy assignment: suspect gates in path order each take the nearest
/// still-unmatched reference gate of the same kind (lowest hop index on
/// ties). Throws Error if some kind cannot be matched.
RankResult greedy_rank(const std::vector<GateKind> &suspect_kinds,
                       const std::vector<Point> &suspect_points,
                       const std::vector<GateKind> &reference_kinds,
                       const std::vector<Point> &reference_points);

RankResult rank_pair(const Netlist &netlist, const Path &suspect, const Path &reference,
                     const Placement &placement);

struct SelectionOptions {
    PathLimits limits;                      ///< per-net suspect enumeration
    std::size_t global_path_cap = 1000000;  ///< candidate universe size
    /// Universe paths SAT-checked up front for the sensitizable share; larger
    /// universes are sampled evenly. Matching checks candidates on demand.
    std::size_t full_check_limit = 200000;
    /// Candidate-count buckets above this size are estimated from a sample.
    std::size_t candidate_count_limit = 20000;
    SensitizeOptions sensitize;
    double timing_budget = 0.7; ///< non-critical: worst delay <= budget * critical delay
    bool create_references = true;
    EquivalenceOptions equivalence;
    unsigned jobs = 1;
};

/// Per vulnerable net bookkeeping.
struct NetSelection {
    NetId net{};
    std::size_t suspect_paths = 0;       ///< structural paths through the net
    std::size_t sensitizable_suspects = 0;
    bool truncated = false;
    /// Symmetric sensitizable candidates avoiding the net, summed over the
    /// chosen suspects (the attacker must match one of these).
    std::size_t symmetric_candidates = 0;
    bool candidates_estimated = false; ///< count scaled up from a bucket sample
    enum class Status { Covered, Created, Uncoverable, Unresolvable } status = Status::Unresolvable;
    std::vector<std::size_t> pair_ids;
};

std::string_view to_string(NetSelection::Status s);

struct SelectionResult {
    Netlist netlist;     ///< final netlist (with any inserted reference gates)
    Placement placement; ///< placement of the final netlist
    std::vector<SymmetricPathPair> pairs;
    std::vector<NetSelection> nets; ///< vulnerable-set order
    std::size_t extra_gates_added = 0; ///< logic gates inserted (tie cells excluded)
    double extra_area = 0.0;
    double original_area = 0.0;
    double area_overhead = 0.0; ///< extra_area / original_area
    /// Candidate universe of the original netlist.
    std::size_t universe_paths = 0;
    std::size_t universe_checked = 0; ///< paths whose sensitizability was decided
    std::size_t universe_sensitizable = 0;
    bool universe_truncated = false;
    std::uint64_t sat_timeouts = 0;

    [[nodiscard]] std::vector<NetId> covered() const;
    [[nodiscard]] std::vector<NetId> uncovered_resolved() const;
    [[nodiscard]] std::vector<NetId> unresolved() const;

    [[nodiscard]] nlohmann::json to_json() const;
};

SelectionResult select_pairs(const Netlist &netlist, const std::vector<NetId> &vulnerable,
                             const Placement &placement, const SelectionOptions &options = {});

struct ReferenceCreation {
    Netlist netlist;
    SymmetricPathPair pair; ///< rank not yet computed
    std::vector<GateId> inserted; ///< new logic gates, chain order
    double extra_area = 0.0;
    EquivalenceResult equivalence;
};

struct ReferenceBudget {
    double max_delay = 0.0; ///< limit for paths through the rewired pin and for p_sub
    /// Pins that must keep their driver (used by earlier selections).
    std::vector<PinRef> frozen_pins;
};

/// Synthesizes a reference path for `net` by inserting the gates missing
/// from a shorter non-critical path. Returns nullopt when every candidate
/// fails; `why` then lists the rejection reasons.
std::optional<ReferenceCreation>
create_reference_path(NetId net, const std::vector<Path> &sensitizable_paths,
                      const Netlist &netlist, const Placement &placement,
                      const ReferenceBudget &budget, const SelectionOptions &options,
                      std::vector<std::string> *why = nullptr);

/// Fraction of non-tie nets lying on any suspect or reference path.
double net_coverage(const SelectionResult &result, const Netlist &netlist);
double net_coverage(const std::vector<SymmetricPathPair> &pairs, const Netlist &netlist);

} // namespace htscout

#endif // HTSCOUT_SYMMETRY_HPP
