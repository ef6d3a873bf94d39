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

#include "htscout/sensitize.hpp"

#include <algorithm>
#include <iostream>

#include "htscout/error.hpp"

namespace htscout {

std::string_view to_string(SensitizationCriterion c) {
    switch (c) {
    case SensitizationCriterion::NonControlling:
        return "non_controlling";
    }
    return "non_controlling";
}

SensitizationCriterion parse_criterion(std::string_view text) {
    if (text == "non_controlling" || text == "NonControlling" || text == "static")
        return SensitizationCriterion::NonControlling;
    throw ConfigError("unknown sensitization criterion '" + std::string(text) + "'");
}

SensitizationChecker::SensitizationChecker(const Netlist &netlist, SensitizeOptions options)
    : netlist_(&netlist), options_(options), encoding_(encode_circuit(netlist)) {
    encoding_.cnf.load_into(solver_);
}

std::vector<int> SensitizationChecker::constraints(const Path &path) const {
    std::vector<int> lits;
    for (const PinRef &h : path.hops) {
        const Gate &g = netlist_->gate(h.gate);
        const auto controlling = controlling_value(g.kind);
        if (!controlling)
            continue;
        for (std::uint32_t pin = 0; pin < g.inputs.size(); ++pin) {
            if (pin == h.pin)
                continue;
            const int v = encoding_.net_var[index_of(g.inputs[pin])];
            lits.push_back(*controlling ? -v : v);
        }
    }
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    return lits;
}

SensitizeOutcome SensitizationChecker::check(const Path &path) {
    ++queries_;
    witness_.clear();
    const std::vector<int> lits = constraints(path);
    if (auto it = memo_.find(lits); it != memo_.end())
        return it->second;
    // Contradictory side-input demands need no search.
    for (int l : lits) {
        if (l < 0 && std::binary_search(lits.begin(), lits.end(), -l)) {
            memo_.emplace(lits, SensitizeOutcome::NotSensitizable);
            return SensitizeOutcome::NotSensitizable;
        }
    }
    SensitizeOutcome outcome = SensitizeOutcome::NotSensitizable;
    switch (solver_.solve(lits, options_.conflict_limit)) {
    case sat::Result::Sat:
        outcome = SensitizeOutcome::Sensitizable;
        for (NetId pi : netlist_->primary_inputs())
            witness_.push_back(solver_.model_value(encoding_.net_var[index_of(pi)]));
        break;
    case sat::Result::Unsat:
        outcome = SensitizeOutcome::NotSensitizable;
        break;
    case sat::Result::Unknown:
        outcome = SensitizeOutcome::Timeout;
        ++timeouts_;
        std::cerr << "warning: sensitization query hit the conflict limit; path through '"
                  << netlist_->net(path.start).name << "' treated as not sensitizable\n";
        break;
    }
    memo_.emplace(lits, outcome);
    return outcome;
}

std::string SensitizationChecker::dimacs(const Path &path) const {
    Cnf cnf = encoding_.cnf;
    for (int l : constraints(path))
        cnf.add({l});
    std::vector<std::string> comments;
    for (std::size_t n = 0; n < netlist_->net_count(); ++n)
        comments.push_back("net " + std::to_string(encoding_.net_var[n]) + " " +
                           netlist_->nets()[n].name);
    return cnf.to_dimacs(comments);
}

bool is_sensitizable(const Netlist &netlist, const Path &path, SensitizationCriterion criterion) {
    SensitizationChecker checker(netlist, {criterion, 200000});
    return checker.is_sensitizable(path);
}

} // namespace htscout
