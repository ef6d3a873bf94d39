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

#ifndef HTSCOUT_DELAY_HPP
#define HTSCOUT_DELAY_HPP

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "htscout/netlist.hpp"
#include "htscout/pair.hpp"
#include "htscout/path.hpp"
#include "htscout/placement.hpp"
#include "htscout/variation.hpp"

namespace htscout {

/// g(v) = ((vdd - vth_nominal) / (vdd - v))^alpha: g(vth_nominal) = 1,
/// strictly increasing for v < vdd.
struct SensitivityLaw {
    double vdd = 0.9;
    double alpha = 1.3;
    double vth_nominal = 0.3;

    /// Throws NumericError when v >= vdd.
    [[nodiscard]] double operator()(double v) const;
};

/// Gate delay = base(kind, transition) * load_factor * g(vth of the cell).
class DelayModel {
public:
    /// The placement must cover every gate of the netlist.
    DelayModel(const Netlist &netlist, const Placement &placement, double vth_nominal);

    [[nodiscard]] const SensitivityLaw &law() const { return law_; }
    [[nodiscard]] const Netlist &netlist() const { return *netlist_; }

    [[nodiscard]] double gate_delay(GateId gate, const VthProfile &profile, Transition t) const;
    /// Sum of gate delays with per-hop transitions from transition_polarity.
    [[nodiscard]] double path_delay(const Path &path, const VthProfile &profile,
                                    Transition input) const;
    /// (rise-launched delay + fall-launched delay) / 2.
    [[nodiscard]] double path_delay_average(const Path &path, const VthProfile &profile) const;

    /// base * load_factor.
    [[nodiscard]] double nominal_gate_delay(GateId gate, Transition t) const;
    /// max(rise, fall) * load_factor, the per-gate bound used for static timing.
    [[nodiscard]] double worst_gate_delay(GateId gate) const;
    [[nodiscard]] double worst_path_delay(const Path &path) const;

private:
    const Netlist *netlist_;
    SensitivityLaw law_;
    std::vector<std::size_t> cell_; // by gate id
};

struct PairDelay {
    double ps = 0.0;
    double pr = 0.0;
};

/// Type1 evaluates both paths with `type1_transition`; Type2 averages rise
/// and fall launches on each path.
PairDelay pair_delay(const DelayModel &model, const Path &suspect, const Path &reference,
                     SymmetryType symmetry, const VthProfile &profile,
                     Transition type1_transition = Transition::Rise);
PairDelay pair_delay(const DelayModel &model, const SymmetricPathPair &pair,
                     const VthProfile &profile, Transition type1_transition = Transition::Rise);

/// Worst-case static timing with worst_gate_delay per gate.
struct StaticTiming {
    std::vector<double> arrival; ///< by net: longest PI-to-net delay
    std::vector<double> tail;    ///< by net: longest net-to-PO delay (-inf if no PO reachable)
    double max_delay = 0.0;      ///< critical PI-to-PO delay
};

StaticTiming static_timing(const DelayModel &model);

struct TrojanSpec {
    std::string target_net;
    GateKind payload_kind = GateKind::Xor;
    std::uint32_t trigger_fanout_load = 1;
    std::vector<std::string> trigger_nets;
    /// Replaces the payload's table timing (area is kept from the table).
    std::optional<CellTiming> payload_delay;

    [[nodiscard]] nlohmann::json to_json() const;
    static TrojanSpec from_json(const nlohmann::json &j);
};

struct TrojanInsertion {
    Netlist netlist;
    GateId payload{};
    NetId target{};      ///< the ripped net, now feeding only the payload
    NetId payload_out{}; ///< drives every former sink of target
};

/// Splices a non-inverting payload gate into the target net and adds the
/// trigger taps as extra load on the trigger nets. The ripped net keeps its
/// wiring load, so its driver's load factor is unchanged. Existing gate and
/// net ids are preserved. Primary-input, tie and primary-output targets
/// throw ConfigError.
TrojanInsertion inject_trojan(const Netlist &netlist, const TrojanSpec &spec);

/// The image of `path` in the Trojan netlist (the payload hop is inserted
/// after the target net when the path passes through it).
Path remap_path(const Path &path, const TrojanInsertion &insertion);

} // namespace htscout

#endif // HTSCOUT_DELAY_HPP
