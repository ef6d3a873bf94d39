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

#include "htscout/path.hpp"

#include <algorithm>
#include <sstream>

#include "htscout/error.hpp"

namespace htscout {

std::string_view to_string(Transition t) {
    return t == Transition::Rise ? "rise" : "fall";
}

bool Path::contains(NetId net) const {
    return std::find(nets.begin(), nets.end(), net) != nets.end();
}

bool Path::contains_gate(GateId gate) const {
    return std::any_of(hops.begin(), hops.end(), [&](const PinRef &h) { return h.gate == gate; });
}

namespace {

using Hops = std::vector<PinRef>;

struct Collector {
    const Netlist &nl;
    std::size_t max_items;
    std::size_t max_length;
    std::vector<Hops> items;
    bool truncated = false;
};

// Prefixes are collected in reverse (last hop first) and flipped on output.
void backward(Collector &c, NetId net, Hops &rev) {
    if (c.items.size() >= c.max_items) {
        c.truncated = true;
        return;
    }
    const Net &n = c.nl.net(net);
    const Gate &g = c.nl.gate(n.driver);
    if (g.kind == GateKind::Input) {
        c.items.emplace_back(rev.rbegin(), rev.rend());
        return;
    }
    if (!is_logic(g.kind))
        return;
    if (rev.size() >= c.max_length) {
        c.truncated = true;
        return;
    }
    for (std::uint32_t pin = 0; pin < g.inputs.size(); ++pin) {
        rev.push_back({n.driver, pin});
        backward(c, g.inputs[pin], rev);
        rev.pop_back();
    }
}

void forward(Collector &c, NetId net, Hops &hops, std::size_t budget) {
    if (c.items.size() >= c.max_items) {
        c.truncated = true;
        return;
    }
    const Net &n = c.nl.net(net);
    if (n.primary_output)
        c.items.push_back(hops);
    for (const PinRef &s : n.sinks) {
        if (hops.size() >= budget) {
            c.truncated = true;
            return;
        }
        hops.push_back(s);
        forward(c, *c.nl.gate(s.gate).output, hops, budget);
        hops.pop_back();
        if (c.items.size() >= c.max_items)
            return;
    }
}

Path assemble(const Netlist &nl, NetId start, Hops hops) {
    Path p;
    p.start = start;
    p.nets.reserve(hops.size() + 1);
    p.nets.push_back(start);
    for (const PinRef &h : hops)
        p.nets.push_back(*nl.gate(h.gate).output);
    p.end = p.nets.back();
    p.hops = std::move(hops);
    return p;
}

NetId prefix_start(const Netlist &nl, const Hops &prefix, NetId net) {
    if (prefix.empty())
        return net;
    const PinRef &first = prefix.front();
    return nl.gate(first.gate).inputs[first.pin];
}

} // namespace

PathSet enumerate_paths(const Netlist &netlist, NetId net, const PathLimits &limits) {
    if (index_of(net) >= netlist.net_count())
        throw NetlistError(NetlistError::Kind::UnknownNet, "unknown net id " +
                                                               std::to_string(index_of(net)));
    if (limits.max_paths == 0 || limits.max_length == 0)
        throw ConfigError("path limits must be positive");
    PathSet result;
    Collector pre{netlist, limits.max_paths, limits.max_length, {}, false};
    Hops rev;
    backward(pre, net, rev);
    Collector post{netlist, limits.max_paths, limits.max_length, {}, false};
    Hops fwd;
    forward(post, net, fwd, limits.max_length);
    result.truncated = pre.truncated || post.truncated;

    for (const Hops &prefix : pre.items) {
        for (const Hops &suffix : post.items) {
            if (prefix.size() + suffix.size() == 0)
                continue;
            if (prefix.size() + suffix.size() > limits.max_length) {
                result.truncated = true;
                continue;
            }
            if (result.paths.size() >= limits.max_paths) {
                result.truncated = true;
                return result;
            }
            Hops hops = prefix;
            hops.insert(hops.end(), suffix.begin(), suffix.end());
            result.paths.push_back(assemble(netlist, prefix_start(netlist, prefix, net), std::move(hops)));
        }
    }
    return result;
}

PathSet enumerate_all_paths(const Netlist &netlist, const PathLimits &limits) {
    PathSet result;
    for (NetId pi : netlist.primary_inputs()) {
        const std::size_t room = limits.max_paths - result.paths.size();
        if (room == 0) {
            result.truncated = true;
            break;
        }
        Collector c{netlist, room, limits.max_length, {}, false};
        Hops hops;
        forward(c, pi, hops, limits.max_length);
        result.truncated = result.truncated || c.truncated;
        for (Hops &h : c.items)
            if (!h.empty())
                result.paths.push_back(assemble(netlist, pi, std::move(h)));
    }
    return result;
}

double count_paths(const Netlist &netlist) {
    // to_po[n]: paths from net n to any primary output (the empty suffix
    // counts when n itself is an output).
    std::vector<double> to_po(netlist.net_count(), 0.0);
    const auto order = netlist.topo_order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const Gate &g = netlist.gate(*it);
        if (!g.output)
            continue;
        const Net &n = netlist.net(*g.output);
        double total = n.primary_output ? 1.0 : 0.0;
        for (const PinRef &s : n.sinks)
            total += to_po[index_of(*netlist.gate(s.gate).output)];
        to_po[index_of(*g.output)] = total;
    }
    double total = 0.0;
    for (NetId pi : netlist.primary_inputs())
        total += to_po[index_of(pi)] - (netlist.net(pi).primary_output ? 1.0 : 0.0);
    return total;
}

void check_path(const Netlist &netlist, const Path &path) {
    auto fail = [](const std::string &why) {
        throw NetlistError(NetlistError::Kind::Syntax, "invalid path: " + why);
    };
    if (path.hops.empty())
        fail("no gates");
    if (path.nets.size() != path.hops.size() + 1)
        fail("net list length does not match hops");
    if (!netlist.net(path.start).primary_input || path.nets.front() != path.start)
        fail("does not start at a primary input");
    if (!netlist.net(path.end).primary_output || path.nets.back() != path.end)
        fail("does not end at a primary output");
    for (std::size_t k = 0; k < path.hops.size(); ++k) {
        const Gate &g = netlist.gate(path.hops[k].gate);
        if (!is_logic(g.kind))
            fail("hop " + std::to_string(k) + " is not a logic gate");
        if (path.hops[k].pin >= g.inputs.size() || g.inputs[path.hops[k].pin] != path.nets[k])
            fail("hop " + std::to_string(k) + " is not connected to the previous net");
        if (*g.output != path.nets[k + 1])
            fail("hop " + std::to_string(k) + " output mismatch");
        for (std::size_t j = 0; j < k; ++j)
            if (path.hops[j].gate == path.hops[k].gate)
                fail("repeated gate");
    }
}

std::vector<Transition> transition_polarity(const Path &path, const Netlist &netlist,
                                            Transition input) {
    std::vector<Transition> out;
    out.reserve(path.hops.size());
    Transition t = input;
    for (const PinRef &h : path.hops) {
        out.push_back(t);
        if (is_inverting(netlist.gate(h.gate).kind))
            t = flip(t);
    }
    return out;
}

std::vector<GateKind> kind_sequence(const Path &path, const Netlist &netlist) {
    std::vector<GateKind> out;
    out.reserve(path.hops.size());
    for (const PinRef &h : path.hops)
        out.push_back(netlist.gate(h.gate).kind);
    return out;
}

nlohmann::json path_json(const Path &path, const Netlist &netlist) {
    nlohmann::json nets = nlohmann::json::array();
    for (NetId n : path.nets)
        nets.push_back(netlist.net(n).name);
    nlohmann::json gates = nlohmann::json::array();
    for (const PinRef &h : path.hops)
        gates.push_back(netlist.gate(h.gate).name);
    return {{"net_sequence", nets}, {"gate_sequence", gates}};
}

std::string paths_jsonl(const std::vector<Path> &paths, const std::vector<bool> &sensitizable,
                        const Netlist &netlist) {
    std::ostringstream out;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        nlohmann::json j = path_json(paths[i], netlist);
        j["sensitizable"] = i < sensitizable.size() && sensitizable[i];
        out << j.dump() << '\n';
    }
    return out.str();
}

Path path_from_net_names(const Netlist &netlist, const std::vector<std::string> &nets) {
    if (nets.size() < 2)
        throw NetlistError(NetlistError::Kind::Syntax, "path needs at least two nets");
    Path p;
    for (const auto &name : nets)
        p.nets.push_back(netlist.net_id(name));
    p.start = p.nets.front();
    p.end = p.nets.back();
    for (std::size_t k = 0; k + 1 < p.nets.size(); ++k) {
        const Net &from = netlist.net(p.nets[k]);
        const auto it = std::find_if(from.sinks.begin(), from.sinks.end(), [&](const PinRef &s) {
            return netlist.gate(s.gate).output == p.nets[k + 1];
        });
        if (it == from.sinks.end())
            throw NetlistError(NetlistError::Kind::Syntax,
                               "no gate connects '" + from.name + "' to '" + nets[k + 1] + "'");
        p.hops.push_back(*it);
    }
    check_path(netlist, p);
    return p;
}

} // namespace htscout
