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

#include "htscout/tech.hpp"

#include <fstream>

#include "htscout/error.hpp"

namespace htscout {

TechTable::TechTable() = default;

TechTable TechTable::builtin() {
    TechTable t;
    // Rise and fall differ by 10-45% per kind, roughly tracking the
    // PMOS/NMOS stack asymmetry of each cell.
    t.set_cell(GateKind::Not, {12.0, 10.0, 1.00});
    t.set_cell(GateKind::Buf, {20.0, 22.0, 1.33});
    t.set_cell(GateKind::Nand, {16.0, 14.0, 1.33});
    t.set_cell(GateKind::Nor, {22.0, 15.0, 1.33});
    t.set_cell(GateKind::And, {26.0, 23.0, 1.67});
    t.set_cell(GateKind::Or, {28.0, 24.0, 1.67});
    t.set_cell(GateKind::Xor, {34.0, 30.0, 2.67});
    t.set_cell(GateKind::Xnor, {35.0, 31.0, 2.67});
    return t;
}

void TechTable::check(double max_vth) const {
    for (GateKind kind : kAllGateKinds) {
        if (!is_logic(kind))
            continue;
        const CellTiming &c = cell(kind);
        if (!(c.rise > 0.0) || !(c.fall > 0.0))
            throw ConfigError("tech table: " + std::string(to_string(kind)) +
                              " needs positive rise/fall delays");
        if (c.area < 0.0)
            throw ConfigError("tech table: negative area for " +
                              std::string(to_string(kind)));
    }
    if (c_load < 0.0)
        throw ConfigError("tech table: c_load must be >= 0");
    if (!(alpha > 0.0))
        throw ConfigError("tech table: alpha must be > 0");
    if (!(vdd > max_vth))
        throw ConfigError("tech table: vdd " + std::to_string(vdd) +
                          " must exceed the largest sampled vth " +
                          std::to_string(max_vth));
}

nlohmann::json TechTable::to_json() const {
    nlohmann::json cells = nlohmann::json::object();
    for (GateKind kind : kAllGateKinds) {
        if (!is_logic(kind))
            continue;
        const CellTiming &c = cell(kind);
        cells[std::string(to_string(kind))] = {
            {"rise", c.rise}, {"fall", c.fall}, {"area", c.area}};
    }
    return {{"c_load", c_load}, {"vdd", vdd}, {"alpha", alpha}, {"cells", cells}};
}

TechTable TechTable::from_json(const nlohmann::json &j) {
    TechTable t = builtin();
    try {
        t.c_load = j.value("c_load", t.c_load);
        t.vdd = j.value("vdd", t.vdd);
        t.alpha = j.value("alpha", t.alpha);
        if (j.contains("cells")) {
            for (const auto &[name, entry] : j.at("cells").items()) {
                auto kind = parse_gate_kind(name);
                if (!kind || !is_logic(*kind))
                    throw ConfigError("tech table: unknown cell '" + name + "'");
                CellTiming c = t.cell(*kind);
                c.rise = entry.value("rise", c.rise);
                c.fall = entry.value("fall", c.fall);
                c.area = entry.value("area", c.area);
                t.set_cell(*kind, c);
            }
        }
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("tech table: ") + e.what());
    }
    return t;
}

TechTable TechTable::load(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open tech table '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError("tech table '" + path + "': " + e.what());
    }
    return from_json(j);
}

} // namespace htscout
