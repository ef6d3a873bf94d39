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

#include "htscout/delay.hpp"

#include <cmath>
#include <limits>

#include "htscout/error.hpp"
#include "htscout/util.hpp"

namespace htscout {

double SensitivityLaw::operator()(double v) const {
    if (!(v < vdd))
        throw NumericError("delay law: vth " + format_double(v) + " V reaches vdd " +
                           format_double(vdd) + " V; the tech table cannot cover this range");
    return std::pow((vdd - vth_nominal) / (vdd - v), alpha);
}

DelayModel::DelayModel(const Netlist &netlist, const Placement &placement, double vth_nominal)
    : netlist_(&netlist),
      law_{netlist.tech().vdd, netlist.tech().alpha, vth_nominal} {
    if (placement.size() < netlist.gate_count())
        throw ConfigError("delay model: placement covers " + std::to_string(placement.size()) +
                          " of " + std::to_string(netlist.gate_count()) + " gates");
    if (!(law_.vdd > vth_nominal))
        throw ConfigError("delay model: vdd must exceed the nominal vth");
    cell_.resize(netlist.gate_count());
    for (std::size_t i = 0; i < cell_.size(); ++i)
        cell_[i] = placement.cell_index(GateId{static_cast<std::uint32_t>(i)});
}

double DelayModel::nominal_gate_delay(GateId gate, Transition t) const {
    const Gate &g = netlist_->gate(gate);
    return (t == Transition::Rise ? g.base_rise : g.base_fall) * g.load_factor;
}

double DelayModel::worst_gate_delay(GateId gate) const {
    const Gate &g = netlist_->gate(gate);
    return std::max(g.base_rise, g.base_fall) * g.load_factor;
}

double DelayModel::gate_delay(GateId gate, const VthProfile &profile, Transition t) const {
    const Gate &g = netlist_->gate(gate);
    if (!is_logic(g.kind))
        return 0.0;
    return nominal_gate_delay(gate, t) * law_(profile.vth(cell_[index_of(gate)]));
}

double DelayModel::path_delay(const Path &path, const VthProfile &profile,
                              Transition input) const {
    double total = 0.0;
    Transition t = input;
    for (const PinRef &h : path.hops) {
        total += gate_delay(h.gate, profile, t);
        if (is_inverting(netlist_->gate(h.gate).kind))
            t = flip(t);
    }
    return total;
}

double DelayModel::path_delay_average(const Path &path, const VthProfile &profile) const {
    return 0.5 * (path_delay(path, profile, Transition::Rise) +
                  path_delay(path, profile, Transition::Fall));
}

double DelayModel::worst_path_delay(const Path &path) const {
    double total = 0.0;
    for (const PinRef &h : path.hops)
        total += worst_gate_delay(h.gate);
    return total;
}

PairDelay pair_delay(const DelayModel &model, const Path &suspect, const Path &reference,
                     SymmetryType symmetry, const VthProfile &profile,
                     Transition type1_transition) {
    if (symmetry == SymmetryType::Type2)
        return {model.path_delay_average(suspect, profile),
                model.path_delay_average(reference, profile)};
    return {model.path_delay(suspect, profile, type1_transition),
            model.path_delay(reference, profile, type1_transition)};
}

PairDelay pair_delay(const DelayModel &model, const SymmetricPathPair &pair,
                     const VthProfile &profile, Transition type1_transition) {
    return pair_delay(model, pair.suspect, pair.reference, pair.symmetry, profile,
                      type1_transition);
}

StaticTiming static_timing(const DelayModel &model) {
    const Netlist &nl = model.netlist();
    constexpr double kNone = -std::numeric_limits<double>::infinity();
    StaticTiming st;
    st.arrival.assign(nl.net_count(), kNone);
    st.tail.assign(nl.net_count(), kNone);
    const auto order = nl.topo_order();
    for (GateId gid : order) {
        const Gate &g = nl.gate(gid);
        if (!g.output)
            continue;
        double a = g.kind == GateKind::Input ? 0.0 : kNone;
        for (NetId in : g.inputs)
            a = std::max(a, st.arrival[index_of(in)]);
        if (is_logic(g.kind) && a != kNone)
            a += model.worst_gate_delay(gid);
        st.arrival[index_of(*g.output)] = a;
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const Gate &g = nl.gate(*it);
        if (!g.output)
            continue;
        const Net &n = nl.net(*g.output);
        double t = n.primary_output ? 0.0 : kNone;
        for (const PinRef &s : n.sinks) {
            const double down = st.tail[index_of(*nl.gate(s.gate).output)];
            if (down != kNone)
                t = std::max(t, down + model.worst_gate_delay(s.gate));
        }
        st.tail[index_of(*g.output)] = t;
    }
    for (NetId po : nl.primary_outputs())
        st.max_delay = std::max(st.max_delay, st.arrival[index_of(po)]);
    return st;
}

nlohmann::json TrojanSpec::to_json() const {
    nlohmann::json j = {{"target_net", target_net},
                        {"payload_kind", to_string(payload_kind)},
                        {"trigger_fanout_load", trigger_fanout_load},
                        {"trigger_nets", trigger_nets}};
    if (payload_delay)
        j["payload_delay"] = {{"rise", payload_delay->rise}, {"fall", payload_delay->fall}};
    return j;
}

TrojanSpec TrojanSpec::from_json(const nlohmann::json &j) {
    TrojanSpec s;
    try {
        s.target_net = j.at("target_net").get<std::string>();
        if (j.contains("payload_kind")) {
            const auto text = j.at("payload_kind").get<std::string>();
            auto kind = parse_gate_kind(text);
            if (!kind)
                throw ConfigError("trojan: unknown payload kind '" + text + "'");
            s.payload_kind = *kind;
        }
        s.trigger_fanout_load = j.value("trigger_fanout_load", s.trigger_fanout_load);
        s.trigger_nets = j.value("trigger_nets", s.trigger_nets);
        if (j.contains("payload_delay")) {
            const auto &d = j.at("payload_delay");
            s.payload_delay = CellTiming{d.at("rise").get<double>(), d.at("fall").get<double>(), 0.0};
        }
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("trojan spec: ") + e.what());
    }
    return s;
}

namespace {

// Tie constant that makes the payload transparent, or nullopt for BUF.
std::optional<GateKind> payload_tie(GateKind kind) {
    switch (kind) {
    case GateKind::Xor:
    case GateKind::Or:
        return GateKind::Const0;
    case GateKind::And:
        return GateKind::Const1;
    case GateKind::Buf:
        return std::nullopt;
    default:
        throw ConfigError("trojan: payload kind " + std::string(to_string(kind)) +
                          " would invert the ripped net; use XOR, AND, OR or BUF");
    }
}

} // namespace

TrojanInsertion inject_trojan(const Netlist &netlist, const TrojanSpec &spec) {
    const NetId target = netlist.net_id(spec.target_net);
    const Net &tnet = netlist.net(target);
    if (tnet.primary_input)
        throw ConfigError("trojan: target '" + spec.target_net + "' is a primary input");
    if (is_constant(netlist.gate(tnet.driver).kind))
        throw ConfigError("trojan: target '" + spec.target_net + "' is a tie net");
    // The payload would rename the output port.
    if (tnet.primary_output)
        throw ConfigError("trojan: target '" + spec.target_net + "' is a primary output");
    if (netlist.fanout(target) == 0)
        throw ConfigError("trojan: target '" + spec.target_net + "' has no sinks");
    const auto tie = payload_tie(spec.payload_kind);

    NetlistDraft draft = netlist.to_draft();
    const std::string out_name = draft.fresh_name(spec.target_net + "__ht");
    for (std::size_t i = 0; i < draft.records().size(); ++i) {
        auto &r = draft.record(i);
        for (auto &in : r.inputs)
            if (in == spec.target_net)
                in = out_name;
    }
    auto &driver = draft.record(index_of(tnet.driver));
    driver.extra_load += static_cast<std::uint32_t>(netlist.fanout(target) - 1);
    for (const auto &name : spec.trigger_nets) {
        const NetId tn = netlist.net_id(name);
        if (tn == target)
            throw ConfigError("trojan: trigger net '" + name + "' is the payload target");
        draft.record(index_of(netlist.net(tn).driver)).extra_load += spec.trigger_fanout_load;
    }

    std::vector<std::string> inputs{spec.target_net};
    if (tie) {
        const std::string tie_name = draft.fresh_name(spec.target_net + "__ht_tie");
        draft.add_gate(tie_name, *tie, {});
        inputs.push_back(tie_name);
    }
    const std::size_t payload = draft.add_gate(out_name, spec.payload_kind, std::move(inputs));
    if (spec.payload_delay) {
        CellTiming t = *spec.payload_delay;
        t.area = netlist.tech().cell(spec.payload_kind).area;
        draft.record(payload).delay_override = t;
    }

    Netlist built = Netlist::build(draft);
    const NetId out = built.net_id(out_name);
    return {std::move(built), GateId{static_cast<std::uint32_t>(payload)}, target, out};
}

Path remap_path(const Path &path, const TrojanInsertion &insertion) {
    Path p = path;
    for (std::size_t k = 0; k < p.nets.size(); ++k) {
        if (p.nets[k] != insertion.target)
            continue;
        p.hops.insert(p.hops.begin() + static_cast<std::ptrdiff_t>(k), PinRef{insertion.payload, 0});
        p.nets.insert(p.nets.begin() + static_cast<std::ptrdiff_t>(k) + 1, insertion.payload_out);
        p.end = p.nets.back();
        break;
    }
    return p;
}

} // namespace htscout
