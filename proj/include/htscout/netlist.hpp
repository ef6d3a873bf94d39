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

#ifndef HTSCOUT_NETLIST_HPP
#define HTSCOUT_NETLIST_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "htscout/gate_kind.hpp"
#include "htscout/tech.hpp"

namespace htscout {

enum class NetId : std::uint32_t {};
enum class GateId : std::uint32_t {};

constexpr std::uint32_t index_of(NetId id) { return static_cast<std::uint32_t>(id); }
constexpr std::uint32_t index_of(GateId id) { return static_cast<std::uint32_t>(id); }

/// One input pin of a gate.
struct PinRef {
    GateId gate;
    std::uint32_t pin = 0;
    auto operator<=>(const PinRef &) const = default;
};

struct Gate {
    std::string name;
    GateKind kind = GateKind::Buf;
    std::vector<NetId> inputs;
    std::optional<NetId> output; ///< absent only for OUTPUT pseudo-gates
    double base_rise = 0.0;      ///< ps
    double base_fall = 0.0;      ///< ps
    double load_factor = 1.0;    ///< 1 + c_load * (fanout + extra_load)
    std::uint32_t extra_load = 0;
    bool delay_overridden = false;
    int line = 0;
};

struct Net {
    std::string name;
    GateId driver{};
    std::vector<PinRef> sinks; ///< logic-gate input pins; POs are flagged separately
    bool primary_input = false;
    bool primary_output = false;
};

/// Unvalidated netlist description: an ordered list of gate records keyed by
/// net names. Parsing produces a draft, edits (Trojan splicing, reference
/// path insertion) operate on drafts, and Netlist::build validates one.
/// Record order fixes gate and net ids, so appending records never renumbers
/// existing gates or nets.
class NetlistDraft {
public:
    struct Record {
        GateKind kind = GateKind::Buf;
        std::string output; ///< driven net; empty for OUTPUT records
        std::vector<std::string> inputs;
        int line = 0;
        std::optional<CellTiming> delay_override;
        std::uint32_t extra_load = 0;
    };

    NetlistDraft() = default;
    explicit NetlistDraft(TechTable tech) : tech_(std::move(tech)) {}

    /// Each returns the index of the new record.
    std::size_t add_input(std::string net, int line = 0);
    std::size_t add_output(std::string net, int line = 0);
    std::size_t add_gate(std::string output, GateKind kind,
                         std::vector<std::string> inputs, int line = 0);

    [[nodiscard]] std::span<const Record> records() const { return records_; }
    Record &record(std::size_t i) { return records_.at(i); }

    /// Index of the record driving `net`, if any.
    [[nodiscard]] std::optional<std::size_t> driver_of(std::string_view net) const;

    /// Returns a net name not used by any record, derived from `base`.
    [[nodiscard]] std::string fresh_name(std::string_view base) const;

    [[nodiscard]] const TechTable &tech() const { return tech_; }
    void set_tech(TechTable tech) { tech_ = std::move(tech); }

private:
    std::vector<Record> records_;
    TechTable tech_ = TechTable::builtin();
};

/// Combinational gate-level circuit. Immutable once built; safe to share
/// between threads.
class Netlist {
public:
    /// Validates the draft (see validate()) and builds the graph.
    static Netlist build(const NetlistDraft &draft);

    [[nodiscard]] std::span<const Gate> gates() const { return gates_; }
    [[nodiscard]] std::span<const Net> nets() const { return nets_; }
    [[nodiscard]] const Gate &gate(GateId id) const { return gates_[index_of(id)]; }
    [[nodiscard]] const Net &net(NetId id) const { return nets_[index_of(id)]; }
    [[nodiscard]] std::size_t gate_count() const { return gates_.size(); }
    [[nodiscard]] std::size_t net_count() const { return nets_.size(); }

    [[nodiscard]] std::optional<NetId> find_net(std::string_view name) const;
    [[nodiscard]] std::optional<GateId> find_gate(std::string_view name) const;
    /// Throws NetlistError(UnknownNet).
    [[nodiscard]] NetId net_id(std::string_view name) const;
    /// Throws NetlistError(UnknownGate).
    [[nodiscard]] GateId gate_id(std::string_view name) const;

    [[nodiscard]] std::span<const NetId> primary_inputs() const { return primary_inputs_; }
    [[nodiscard]] std::span<const NetId> primary_outputs() const { return primary_outputs_; }

    /// All gates, pseudo-gates included, in a deterministic topological order.
    [[nodiscard]] std::span<const GateId> topo_order() const { return topo_order_; }
    /// INPUT/CONST at 0, each other gate one above its deepest fan-in driver.
    [[nodiscard]] std::uint32_t level(GateId id) const { return levels_[index_of(id)]; }
    [[nodiscard]] std::uint32_t depth() const { return depth_; }

    /// |sinks| plus one if the net is a primary output.
    [[nodiscard]] std::size_t fanout(NetId id) const;

    [[nodiscard]] std::size_t logic_gate_count() const;
    /// Sum of cell areas of logic gates.
    [[nodiscard]] double logic_area() const;

    [[nodiscard]] const TechTable &tech() const { return tech_; }

    /// A draft reproducing this netlist record for record (ids preserved).
    [[nodiscard]] NetlistDraft to_draft() const;

    /// Re-checks every structural invariant; throws NetlistError on failure.
    void check_invariants() const;

    [[nodiscard]] nlohmann::json to_json() const;

private:
    Netlist() = default;

    std::vector<Gate> gates_;
    std::vector<Net> nets_;
    std::vector<NetId> primary_inputs_;
    std::vector<NetId> primary_outputs_;
    std::vector<GateId> topo_order_;
    std::vector<std::uint32_t> levels_;
    std::uint32_t depth_ = 0;
    std::unordered_map<std::string, NetId> net_by_name_;
    std::unordered_map<std::string, GateId> gate_by_name_;
    TechTable tech_;
};

/// Checks a draft against every netlist invariant and throws NetlistError for
/// the first violation: arity, multiple drivers, undeclared or floating nets,
/// combinational cycles (with the cycle's nets listed).
void validate(const NetlistDraft &draft);

/// Parses ISCAS-85 bench text (case-insensitive keywords, `#` comments).
NetlistDraft parse_bench_draft(std::string_view text);
Netlist parse_bench(std::string_view text, const TechTable &tech = TechTable::builtin());
Netlist load_bench(const std::string &path, const TechTable &tech = TechTable::builtin());

/// Emits bench text. Structure only: delay overrides and extra loads are not
/// representable in the format.
std::string write_bench(const Netlist &netlist);

/// Fanout of the named net. Throws NetlistError(UnknownNet).
std::size_t fanout_of(const Netlist &netlist, std::string_view net);

} // namespace htscout

#endif // HTSCOUT_NETLIST_HPP
