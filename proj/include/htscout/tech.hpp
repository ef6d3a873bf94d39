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

#ifndef HTSCOUT_TECH_HPP
#define HTSCOUT_TECH_HPP

#include <array>
#include <string>

#include <json.hpp>

#include "htscout/gate_kind.hpp"

namespace htscout {

/// Per-kind cell data. Rise/fall delays are indexed by the transition that
/// arrives at the cell's on-path input.
struct CellTiming {
    double rise = 0.0; ///< ps
    double fall = 0.0; ///< ps
    double area = 0.0; ///< abstract units^2
};

/// Technology table: cell timing and area, the load coefficient used for
/// fanout-dependent delay scaling, and the alpha-power sensitivity law
/// g(v) = ((vdd - vth_nominal) / (vdd - v))^alpha applied to every cell.
class TechTable {
public:
    TechTable();

    /// Built-in 32nm-class stand-in table.
    static TechTable builtin();

    [[nodiscard]] const CellTiming &cell(GateKind kind) const {
        return cells_[to_index(kind)];
    }
    void set_cell(GateKind kind, CellTiming timing) {
        cells_[to_index(kind)] = timing;
    }

    double c_load = 0.05;
    double vdd = 0.9;
    double alpha = 1.3;

    /// Throws ConfigError if a logic cell has a non-positive delay or the
    /// sensitivity law would diverge for `max_vth`.
    void check(double max_vth) const;

    [[nodiscard]] nlohmann::json to_json() const;
    static TechTable from_json(const nlohmann::json &j);
    static TechTable load(const std::string &path);

private:
    std::array<CellTiming, kGateKindCount> cells_{};
};

} // namespace htscout

#endif // HTSCOUT_TECH_HPP
