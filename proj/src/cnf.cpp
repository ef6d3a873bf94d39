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

#include "htscout/cnf.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "htscout/error.hpp"

namespace htscout {

std::string Cnf::to_dimacs(const std::vector<std::string> &comments) const {
    std::ostringstream out;
    for (const auto &c : comments)
        out << "c " << c << '\n';
    out << "p cnf " << vars << ' ' << clauses.size() << '\n';
    for (const auto &clause : clauses) {
        for (int l : clause)
            out << l << ' ';
        out << "0\n";
    }
    return out.str();
}

void Cnf::load_into(sat::Solver &solver) const {
    solver.reserve_vars(vars);
    for (const auto &clause : clauses)
        solver.add_clause(clause);
}

namespace {

void encode_and(Cnf &cnf, const std::vector<int> &ins, int out) {
    std::vector<int> big{out};
    for (int a : ins) {
        cnf.add({-out, a});
        big.push_back(-a);
    }
    cnf.add(std::move(big));
}

void encode_or(Cnf &cnf, const std::vector<int> &ins, int out) {
    std::vector<int> big{-out};
    for (int a : ins) {
        cnf.add({out, -a});
        big.push_back(a);
    }
    cnf.add(std::move(big));
}

void encode_xor2(Cnf &cnf, int a, int b, int out) {
    cnf.add({-out, a, b});
    cnf.add({-out, -a, -b});
    cnf.add({out, -a, b});
    cnf.add({out, a, -b});
}

} // namespace

void encode_gate(Cnf &cnf, GateKind kind, const std::vector<int> &ins, int out) {
    switch (kind) {
    case GateKind::And:
        encode_and(cnf, ins, out);
        break;
    case GateKind::Nand:
        encode_and(cnf, ins, -out);
        break;
    case GateKind::Or:
        encode_or(cnf, ins, out);
        break;
    case GateKind::Nor:
        encode_or(cnf, ins, -out);
        break;
    case GateKind::Xor:
    case GateKind::Xnor: {
        int acc = ins[0];
        for (std::size_t i = 1; i + 1 < ins.size(); ++i) {
            const int t = cnf.new_var();
            encode_xor2(cnf, acc, ins[i], t);
            acc = t;
        }
        encode_xor2(cnf, acc, ins.back(), kind == GateKind::Xor ? out : -out);
        break;
    }
    case GateKind::Buf:
    case GateKind::Output:
        cnf.add({-out, ins[0]});
        cnf.add({out, -ins[0]});
        break;
    case GateKind::Not:
        cnf.add({-out, -ins[0]});
        cnf.add({out, ins[0]});
        break;
    case GateKind::Const0:
        cnf.add({-out});
        break;
    case GateKind::Const1:
        cnf.add({out});
        break;
    case GateKind::Input:
        break;
    }
}

namespace {

void encode_into(Cnf &cnf, const Netlist &nl, std::vector<int> &net_var,
                 const std::unordered_map<std::string, int> *shared_pis) {
    net_var.assign(nl.net_count(), 0);
    for (std::size_t n = 0; n < nl.net_count(); ++n) {
        const Net &net = nl.nets()[n];
        if (net.primary_input && shared_pis)
            net_var[n] = shared_pis->at(net.name);
        else
            net_var[n] = cnf.new_var();
    }
    for (GateId gid : nl.topo_order()) {
        const Gate &g = nl.gate(gid);
        if (!g.output || g.kind == GateKind::Input)
            continue;
        std::vector<int> ins;
        ins.reserve(g.inputs.size());
        for (NetId in : g.inputs)
            ins.push_back(net_var[index_of(in)]);
        encode_gate(cnf, g.kind, ins, net_var[index_of(*g.output)]);
    }
}

} // namespace

CircuitEncoding encode_circuit(const Netlist &netlist) {
    CircuitEncoding enc;
    encode_into(enc.cnf, netlist, enc.net_var, nullptr);
    return enc;
}

Miter build_miter(const Netlist &a, const Netlist &b) {
    auto names = [](const Netlist &nl, std::span<const NetId> ids) {
        std::vector<std::string> out;
        for (NetId id : ids)
            out.push_back(nl.net(id).name);
        std::sort(out.begin(), out.end());
        return out;
    };
    if (names(a, a.primary_inputs()) != names(b, b.primary_inputs()) ||
        names(a, a.primary_outputs()) != names(b, b.primary_outputs()))
        throw ConfigError("miter: netlists have different primary inputs or outputs");

    Miter m;
    std::unordered_map<std::string, int> shared;
    for (NetId pi : a.primary_inputs()) {
        const int v = m.cnf.new_var();
        shared.emplace(a.net(pi).name, v);
        m.pi_vars.push_back(v);
    }
    std::vector<int> va;
    std::vector<int> vb;
    encode_into(m.cnf, a, va, &shared);
    encode_into(m.cnf, b, vb, &shared);
    std::vector<int> any_diff;
    for (NetId po : a.primary_outputs()) {
        const std::string &name = a.net(po).name;
        const int oa = va[index_of(po)];
        const int ob = vb[index_of(b.net_id(name))];
        const int d = m.cnf.new_var();
        encode_xor2(m.cnf, oa, ob, d);
        any_diff.push_back(d);
    }
    m.cnf.add(std::move(any_diff));
    return m;
}

} // namespace htscout
