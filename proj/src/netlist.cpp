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

#include "htscout/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <sstream>

#include "htscout/error.hpp"
#include "htscout/util.hpp"

namespace htscout {

namespace {

std::string pseudo_name(GateKind kind, const std::string &net) {
    return std::string(to_string(kind)) + "(" + net + ")";
}

std::string record_desc(const NetlistDraft::Record &r) {
    if (r.kind == GateKind::Output)
        return "OUTPUT(" + (r.inputs.empty() ? std::string() : r.inputs.front()) + ")";
    if (r.kind == GateKind::Input)
        return "INPUT(" + r.output + ")";
    return "gate '" + r.output + "'";
}

using DriverMap = std::unordered_map<std::string, std::size_t>;

DriverMap map_drivers(std::span<const NetlistDraft::Record> records) {
    DriverMap drivers;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto &r = records[i];
        if (r.kind == GateKind::Output)
            continue;
        auto [it, inserted] = drivers.emplace(r.output, i);
        if (!inserted) {
            throw NetlistError(NetlistError::Kind::DuplicateDriver,
                               "net '" + r.output + "' has multiple drivers (" +
                                   record_desc(records[it->second]) + " and " +
                                   record_desc(r) + ")",
                               r.line, {r.output});
        }
    }
    return drivers;
}

// Kahn's algorithm over records; returns the order or the cycle members.
struct TopoResult {
    std::vector<std::size_t> order;
    std::vector<std::string> cycle;
};

TopoResult topo_sort(std::span<const NetlistDraft::Record> records,
                     const DriverMap &drivers) {
    const std::size_t n = records.size();
    std::vector<std::vector<std::size_t>> succ(n);
    std::vector<std::size_t> indegree(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto &in : records[i].inputs) {
            const std::size_t d = drivers.at(in);
            succ[d].push_back(i);
            ++indegree[i];
        }
    }
    TopoResult result;
    std::deque<std::size_t> ready;
    for (std::size_t i = 0; i < n; ++i)
        if (indegree[i] == 0)
            ready.push_back(i);
    while (!ready.empty()) {
        const std::size_t i = ready.front();
        ready.pop_front();
        result.order.push_back(i);
        for (std::size_t s : succ[i])
            if (--indegree[s] == 0)
                ready.push_back(s);
    }
    if (result.order.size() == n)
        return result;

    // Walk backwards through unresolved records until one repeats.
    std::size_t start = 0;
    while (indegree[start] == 0)
        ++start;
    std::vector<std::size_t> trail;
    std::vector<int> seen_at(n, -1);
    std::size_t cur = start;
    while (seen_at[cur] < 0) {
        seen_at[cur] = static_cast<int>(trail.size());
        trail.push_back(cur);
        for (const auto &in : records[cur].inputs) {
            const std::size_t d = drivers.at(in);
            if (indegree[d] != 0) {
                cur = d;
                break;
            }
        }
    }
    std::vector<std::string> cycle;
    for (std::size_t k = static_cast<std::size_t>(seen_at[cur]); k < trail.size(); ++k)
        cycle.push_back(records[trail[k]].output);
    std::reverse(cycle.begin(), cycle.end());
    // Start the listing at the lexicographically smallest net.
    auto smallest = std::min_element(cycle.begin(), cycle.end());
    std::rotate(cycle.begin(), smallest, cycle.end());
    result.cycle = std::move(cycle);
    return result;
}

} // namespace

std::size_t NetlistDraft::add_input(std::string net, int line) {
    records_.push_back({GateKind::Input, std::move(net), {}, line, std::nullopt, 0});
    return records_.size() - 1;
}

std::size_t NetlistDraft::add_output(std::string net, int line) {
    records_.push_back({GateKind::Output, {}, {std::move(net)}, line, std::nullopt, 0});
    return records_.size() - 1;
}

std::size_t NetlistDraft::add_gate(std::string output, GateKind kind,
                                   std::vector<std::string> inputs, int line) {
    records_.push_back({kind, std::move(output), std::move(inputs), line, std::nullopt, 0});
    return records_.size() - 1;
}

std::optional<std::size_t> NetlistDraft::driver_of(std::string_view net) const {
    for (std::size_t i = 0; i < records_.size(); ++i)
        if (records_[i].kind != GateKind::Output && records_[i].output == net)
            return i;
    return std::nullopt;
}

std::string NetlistDraft::fresh_name(std::string_view base) const {
    auto used = [&](const std::string &name) {
        for (const auto &r : records_) {
            if (r.output == name)
                return true;
            for (const auto &in : r.inputs)
                if (in == name)
                    return true;
        }
        return false;
    };
    std::string candidate(base);
    for (int k = 1; used(candidate); ++k)
        candidate = std::string(base) + "_" + std::to_string(k);
    return candidate;
}

void validate(const NetlistDraft &draft) {
    const auto records = draft.records();
    const DriverMap drivers = map_drivers(records);
    bool has_output_record = false;
    std::unordered_map<std::string, int> po_seen;
    for (const auto &r : records) {
        if (!arity_ok(r.kind, r.inputs.size())) {
            throw NetlistError(NetlistError::Kind::Arity,
                               record_desc(r) + ": " + std::string(to_string(r.kind)) +
                                   " cannot take " + std::to_string(r.inputs.size()) +
                                   " input(s)",
                               r.line, {r.output});
        }
        if (r.kind == GateKind::Output) {
            has_output_record = true;
            const std::string &net = r.inputs.front();
            if (!drivers.count(net))
                throw NetlistError(NetlistError::Kind::FloatingInput,
                                   "primary output '" + net + "' has no driver", r.line,
                                   {net});
            if (po_seen.count(net))
                throw NetlistError(NetlistError::Kind::Syntax,
                                   "primary output '" + net + "' declared twice", r.line,
                                   {net});
            po_seen.emplace(net, r.line);
            continue;
        }
        for (const auto &in : r.inputs) {
            if (!drivers.count(in))
                throw NetlistError(NetlistError::Kind::UndeclaredNet,
                                   record_desc(r) + " reads undeclared net '" + in + "'",
                                   r.line, {in});
        }
    }
    (void)has_output_record;
    TopoResult topo = topo_sort(records, drivers);
    if (!topo.cycle.empty()) {
        std::string list;
        for (const auto &n : topo.cycle)
            list += (list.empty() ? "" : ", ") + n;
        throw NetlistError(NetlistError::Kind::Cycle,
                           "combinational cycle through {" + list + "}", 0, topo.cycle);
    }
}

Netlist Netlist::build(const NetlistDraft &draft) {
    validate(draft);
    const auto records = draft.records();
    const DriverMap drivers = map_drivers(records);

    Netlist nl;
    nl.tech_ = draft.tech();
    nl.gates_.resize(records.size());
    std::vector<std::optional<NetId>> net_of_record(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto &r = records[i];
        if (r.kind == GateKind::Output)
            continue;
        const NetId id{static_cast<std::uint32_t>(nl.nets_.size())};
        Net net;
        net.name = r.output;
        net.driver = GateId{static_cast<std::uint32_t>(i)};
        net.primary_input = r.kind == GateKind::Input;
        nl.nets_.push_back(std::move(net));
        nl.net_by_name_.emplace(r.output, id);
        net_of_record[i] = id;
        if (r.kind == GateKind::Input)
            nl.primary_inputs_.push_back(id);
    }
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto &r = records[i];
        Gate &g = nl.gates_[i];
        g.kind = r.kind;
        g.line = r.line;
        g.extra_load = r.extra_load;
        const GateId gid{static_cast<std::uint32_t>(i)};
        for (std::uint32_t pin = 0; pin < r.inputs.size(); ++pin) {
            const NetId in = *net_of_record[drivers.at(r.inputs[pin])];
            g.inputs.push_back(in);
            if (r.kind == GateKind::Output) {
                Net &net = nl.nets_[index_of(in)];
                net.primary_output = true;
                nl.primary_outputs_.push_back(in);
            } else {
                nl.nets_[index_of(in)].sinks.push_back({gid, pin});
            }
        }
        g.output = net_of_record[i];
        if (r.kind == GateKind::Input || r.kind == GateKind::Output)
            g.name = pseudo_name(r.kind, r.kind == GateKind::Input ? r.output : r.inputs.front());
        else
            g.name = r.output;
        nl.gate_by_name_.emplace(g.name, gid);
    }

    const TechTable &tech = nl.tech_;
    for (std::size_t i = 0; i < records.size(); ++i) {
        Gate &g = nl.gates_[i];
        if (!is_logic(g.kind))
            continue;
        CellTiming timing = tech.cell(g.kind);
        if (records[i].delay_override) {
            timing = *records[i].delay_override;
            g.delay_overridden = true;
        }
        g.base_rise = timing.rise;
        g.base_fall = timing.fall;
        const double load = static_cast<double>(nl.fanout(*g.output) + g.extra_load);
        g.load_factor = 1.0 + tech.c_load * load;
    }

    const TopoResult topo = topo_sort(records, drivers);
    nl.levels_.assign(records.size(), 0);
    for (std::size_t i : topo.order) {
        const GateId gid{static_cast<std::uint32_t>(i)};
        nl.topo_order_.push_back(gid);
        std::uint32_t lvl = 0;
        for (NetId in : nl.gates_[i].inputs)
            lvl = std::max(lvl, nl.levels_[index_of(nl.nets_[index_of(in)].driver)] + 1);
        nl.levels_[i] = lvl;
        nl.depth_ = std::max(nl.depth_, lvl);
    }
    return nl;
}

std::optional<NetId> Netlist::find_net(std::string_view name) const {
    auto it = net_by_name_.find(std::string(name));
    if (it == net_by_name_.end())
        return std::nullopt;
    return it->second;
}

std::optional<GateId> Netlist::find_gate(std::string_view name) const {
    auto it = gate_by_name_.find(std::string(name));
    if (it == gate_by_name_.end())
        return std::nullopt;
    return it->second;
}

NetId Netlist::net_id(std::string_view name) const {
    if (auto id = find_net(name))
        return *id;
    throw NetlistError(NetlistError::Kind::UnknownNet,
                       "unknown net '" + std::string(name) + "'", 0, {std::string(name)});
}

GateId Netlist::gate_id(std::string_view name) const {
    if (auto id = find_gate(name))
        return *id;
    throw NetlistError(NetlistError::Kind::UnknownGate,
                       "unknown gate '" + std::string(name) + "'");
}

std::size_t Netlist::fanout(NetId id) const {
    const Net &n = net(id);
    return n.sinks.size() + (n.primary_output ? 1 : 0);
}

std::size_t Netlist::logic_gate_count() const {
    return static_cast<std::size_t>(std::count_if(
        gates_.begin(), gates_.end(), [](const Gate &g) { return is_logic(g.kind); }));
}

double Netlist::logic_area() const {
    double area = 0.0;
    for (const Gate &g : gates_)
        if (is_logic(g.kind))
            area += tech_.cell(g.kind).area;
    return area;
}

NetlistDraft Netlist::to_draft() const {
    NetlistDraft draft(tech_);
    for (const Gate &g : gates_) {
        std::vector<std::string> inputs;
        for (NetId in : g.inputs)
            inputs.push_back(net(in).name);
        std::size_t idx = 0;
        if (g.kind == GateKind::Input)
            idx = draft.add_input(net(*g.output).name, g.line);
        else if (g.kind == GateKind::Output)
            idx = draft.add_output(inputs.front(), g.line);
        else
            idx = draft.add_gate(net(*g.output).name, g.kind, std::move(inputs), g.line);
        auto &rec = draft.record(idx);
        rec.extra_load = g.extra_load;
        if (g.delay_overridden)
            rec.delay_override = CellTiming{g.base_rise, g.base_fall, tech_.cell(g.kind).area};
    }
    return draft;
}

void Netlist::check_invariants() const {
    validate(to_draft());
    for (std::size_t i = 0; i < nets_.size(); ++i) {
        const Net &n = nets_[i];
        const Gate &d = gate(n.driver);
        if (!d.output || index_of(*d.output) != i)
            throw NetlistError(NetlistError::Kind::DuplicateDriver,
                               "net '" + n.name + "' driver mismatch", 0, {n.name});
        for (const PinRef &s : n.sinks) {
            const Gate &g = gate(s.gate);
            if (s.pin >= g.inputs.size() || index_of(g.inputs[s.pin]) != i)
                throw NetlistError(NetlistError::Kind::FloatingInput,
                                   "net '" + n.name + "' sink list is inconsistent", 0,
                                   {n.name});
        }
    }
    for (const Gate &g : gates_) {
        if (is_logic(g.kind) && (g.base_rise < 0.0 || g.base_fall < 0.0))
            throw NetlistError(NetlistError::Kind::Syntax,
                               "gate '" + g.name + "' has a negative delay");
        if (!is_logic(g.kind) && (g.base_rise != 0.0 || g.base_fall != 0.0))
            throw NetlistError(NetlistError::Kind::Syntax,
                               "pseudo-gate '" + g.name + "' must have zero delay");
    }
}

nlohmann::json Netlist::to_json() const {
    nlohmann::json gates = nlohmann::json::array();
    for (const Gate &g : gates_) {
        nlohmann::json inputs = nlohmann::json::array();
        for (NetId in : g.inputs)
            inputs.push_back(net(in).name);
        gates.push_back({{"name", g.name},
                         {"kind", to_string(g.kind)},
                         {"inputs", inputs},
                         {"output", g.output ? nlohmann::json(net(*g.output).name)
                                             : nlohmann::json(nullptr)},
                         {"base_rise", g.base_rise},
                         {"base_fall", g.base_fall},
                         {"load_factor", g.load_factor},
                         {"level", level(GateId{static_cast<std::uint32_t>(&g - gates_.data())})}});
    }
    nlohmann::json nets = nlohmann::json::array();
    for (const Net &n : nets_) {
        nlohmann::json sinks = nlohmann::json::array();
        for (const PinRef &s : n.sinks)
            sinks.push_back({{"gate", gate(s.gate).name}, {"pin", s.pin}});
        nets.push_back({{"name", n.name},
                        {"driver", gate(n.driver).name},
                        {"sinks", sinks},
                        {"primary_input", n.primary_input},
                        {"primary_output", n.primary_output}});
    }
    nlohmann::json pis = nlohmann::json::array(), pos = nlohmann::json::array();
    for (NetId id : primary_inputs_)
        pis.push_back(net(id).name);
    for (NetId id : primary_outputs_)
        pos.push_back(net(id).name);
    return {{"gates", gates}, {"nets", nets}, {"primary_inputs", pis}, {"primary_outputs", pos}};
}

// ---------------------------------------------------------------------------
// Bench format

namespace {

bool is_name_char(char c) {
    return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' &&
           c != ',' && c != '=' && c != '#';
}

class LineScanner {
public:
    LineScanner(std::string_view text, int line) : text_(text), line_(line) {}

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }
    bool at_end() {
        skip_space();
        return pos_ >= text_.size();
    }
    bool peek(char c) {
        skip_space();
        return pos_ < text_.size() && text_[pos_] == c;
    }
    void expect(char c) {
        if (!peek(c))
            fail(std::string("expected '") + c + "'");
        ++pos_;
    }
    std::string name() {
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && is_name_char(text_[pos_]))
            ++pos_;
        if (pos_ == start)
            fail("expected a name");
        return std::string(text_.substr(start, pos_ - start));
    }
    [[noreturn]] void fail(const std::string &what) const {
        throw NetlistError(NetlistError::Kind::Syntax,
                           what + " in '" + std::string(text_) + "'", line_);
    }

private:
    std::string_view text_;
    int line_;
    std::size_t pos_ = 0;
};

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    return s;
}

} // namespace

NetlistDraft parse_bench_draft(std::string_view text) {
    NetlistDraft draft;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        LineScanner scan(line, line_no);
        if (scan.at_end())
            continue;
        std::string first = scan.name();
        if (scan.peek('(')) {
            const std::string kw = upper(first);
            scan.expect('(');
            std::string net = scan.name();
            scan.expect(')');
            if (!scan.at_end())
                scan.fail("trailing characters");
            if (kw == "INPUT")
                draft.add_input(std::move(net), line_no);
            else if (kw == "OUTPUT")
                draft.add_output(std::move(net), line_no);
            else
                scan.fail("unknown declaration '" + first + "'");
            continue;
        }
        scan.expect('=');
        const std::string kind_text = scan.name();
        auto kind = parse_gate_kind(kind_text);
        if (!kind || *kind == GateKind::Input || *kind == GateKind::Output) {
            const std::string k = upper(kind_text);
            const std::string hint = (k == "DFF" || k == "LATCH")
                                         ? " (sequential elements are not supported)"
                                         : "";
            throw NetlistError(NetlistError::Kind::UnknownGateKind,
                               "unknown gate type '" + kind_text + "'" + hint, line_no);
        }
        scan.expect('(');
        std::vector<std::string> inputs;
        if (!scan.peek(')')) {
            inputs.push_back(scan.name());
            while (scan.peek(',')) {
                scan.expect(',');
                inputs.push_back(scan.name());
            }
        }
        scan.expect(')');
        if (!scan.at_end())
            scan.fail("trailing characters");
        if (!arity_ok(*kind, inputs.size())) {
            throw NetlistError(NetlistError::Kind::Arity,
                               "gate '" + first + "': " + std::string(to_string(*kind)) +
                                   " cannot take " + std::to_string(inputs.size()) +
                                   " input(s)",
                               line_no, {first});
        }
        draft.add_gate(std::move(first), *kind, std::move(inputs), line_no);
    }
    return draft;
}

Netlist parse_bench(std::string_view text, const TechTable &tech) {
    NetlistDraft draft = parse_bench_draft(text);
    draft.set_tech(tech);
    return Netlist::build(draft);
}

Netlist load_bench(const std::string &path, const TechTable &tech) {
    return parse_bench(read_file(path), tech);
}

std::string write_bench(const Netlist &netlist) {
    std::ostringstream out;
    for (NetId id : netlist.primary_inputs())
        out << "INPUT(" << netlist.net(id).name << ")\n";
    for (NetId id : netlist.primary_outputs())
        out << "OUTPUT(" << netlist.net(id).name << ")\n";
    for (const Gate &g : netlist.gates()) {
        if (g.kind == GateKind::Input || g.kind == GateKind::Output)
            continue;
        out << netlist.net(*g.output).name << " = " << to_string(g.kind) << "(";
        for (std::size_t i = 0; i < g.inputs.size(); ++i)
            out << (i ? ", " : "") << netlist.net(g.inputs[i]).name;
        out << ")\n";
    }
    return out.str();
}

std::size_t fanout_of(const Netlist &netlist, std::string_view net) {
    return netlist.fanout(netlist.net_id(net));
}

} // namespace htscout
