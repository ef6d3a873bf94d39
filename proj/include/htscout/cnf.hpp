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

#ifndef HTSCOUT_CNF_HPP
#define HTSCOUT_CNF_HPP

#include <string>
#include <vector>

#include "htscout/netlist.hpp"
#include "htscout/sat.hpp"

namespace htscout {

/// Clause list in DIMACS literal convention.
struct Cnf {
    int vars = 0;
    std::vector<std::vector<int>> clauses;

    int new_var() { return ++vars; }
    void add(std::vector<int> clause) { clauses.push_back(std::move(clause)); }

    [[nodiscard]] std::string to_dimacs(const std::vector<std::string> &comments = {}) const;
    /// Loads every clause into `solver`, creating variables as needed.
    void load_into(sat::Solver &solver) const;
};

/// Clauses stating out <-> kind(inputs).
void encode_gate(Cnf &cnf, GateKind kind, const std::vector<int> &inputs, int out);

/// Tseitin encoding of a netlist; `net_var[n]` is the variable of net n.
struct CircuitEncoding {
    Cnf cnf;
    std::vector<int> net_var;
};

CircuitEncoding encode_circuit(const Netlist &netlist);

/// Miter of two netlists whose primary inputs and outputs match by name:
/// inputs are shared and the formula is satisfiable iff some output differs.
/// `pi_vars` lists the shared variables in `a`'s primary input order.
struct Miter {
    Cnf cnf;
    std::vector<int> pi_vars;
};

/// Throws ConfigError if the interfaces differ.
Miter build_miter(const Netlist &a, const Netlist &b);

} // namespace htscout

#endif // HTSCOUT_CNF_HPP
