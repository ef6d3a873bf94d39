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

#include "htscout/placement.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "htscout/error.hpp"
#include "htscout/util.hpp"

namespace htscout {

std::string_view to_string(PlacementStrategy s) {
    return s == PlacementStrategy::TopoRows ? "topo-rows" : "random";
}

PlacementStrategy parse_strategy(std::string_view text) {
    if (text == "topo-rows" || text == "topo_rows")
        return PlacementStrategy::TopoRows;
    if (text == "random")
        return PlacementStrategy::Random;
    throw ConfigError("unknown placement strategy '" + std::string(text) + "'");
}

Placement::Placement(Die die, GridDims grid, std::vector<Point> coords)
    : die_(die), grid_(grid), coords_(std::move(coords)) {
    if (!(die_.width > 0.0) || !(die_.height > 0.0))
        throw ConfigError("die dimensions must be positive");
    if (grid_.rows < 1 || grid_.cols < 1)
        throw ConfigError("grid needs at least one row and one column");
    for (const Point &p : coords_)
        if (!(p.x >= 0.0 && p.x < die_.width && p.y >= 0.0 && p.y < die_.height))
            throw ConfigError("placement coordinate (" + format_double(p.x) + ", " +
                              format_double(p.y) + ") lies outside the die");
}

const Point &Placement::at(GateId gate) const {
    if (index_of(gate) >= coords_.size())
        throw NetlistError(NetlistError::Kind::UnknownGate,
                           "gate id " + std::to_string(index_of(gate)) + " is not placed");
    return coords_[index_of(gate)];
}

GridCell Placement::cell_of(Point p) const {
    auto index = [](double v, double extent, std::uint32_t n) {
        const double cell = extent / n;
        const double f = std::floor(v / cell);
        if (f < 0.0)
            return std::uint32_t{0};
        return std::min(static_cast<std::uint32_t>(f), n - 1);
    };
    return {index(p.y, die_.height, grid_.rows), index(p.x, die_.width, grid_.cols)};
}

GridCell Placement::grid_of(GateId gate) const { return cell_of(at(gate)); }

double Placement::distance(GateId a, GateId b) const {
    const Point &p = at(a);
    const Point &q = at(b);
    return std::hypot(p.x - q.x, p.y - q.y);
}

Placement Placement::extended(const Netlist &netlist) const {
    const std::size_t old = coords_.size();
    if (netlist.gate_count() < old)
        throw ConfigError("placement has more gates than the netlist");
    std::vector<GateId> po_gate(netlist.net_count(), GateId{0});
    std::vector<bool> has_po_gate(netlist.net_count(), false);
    for (std::size_t k = 0; k < netlist.gate_count(); ++k) {
        const Gate &g = netlist.gates()[k];
        if (g.kind == GateKind::Output && !has_po_gate[index_of(g.inputs.front())]) {
            po_gate[index_of(g.inputs.front())] = GateId{static_cast<std::uint32_t>(k)};
            has_po_gate[index_of(g.inputs.front())] = true;
        }
    }
    std::vector<Point> coords = coords_;
    coords.resize(netlist.gate_count());
    std::vector<char> done(netlist.gate_count(), 0);
    std::fill(done.begin(), done.begin() + static_cast<std::ptrdiff_t>(old), 1);
    std::function<Point(std::size_t)> resolve = [&](std::size_t i) -> Point {
        if (done[i])
            return coords[i];
        done[i] = 1; // guards against revisiting through a fan-in walk
        const Gate &g = netlist.gates()[i];
        std::optional<GateId> anchor;
        if (g.output) {
            const Net &n = netlist.net(*g.output);
            if (!n.sinks.empty())
                anchor = n.sinks.front().gate;
            else if (has_po_gate[index_of(*g.output)])
                anchor = po_gate[index_of(*g.output)];
        }
        if (!anchor && !g.inputs.empty())
            anchor = netlist.net(g.inputs.front()).driver;
        coords[i] = anchor ? resolve(index_of(*anchor)) : Point{die_.width / 2, die_.height / 2};
        return coords[i];
    };
    for (std::size_t i = old; i < netlist.gate_count(); ++i)
        resolve(i);
    return Placement(die_, grid_, std::move(coords));
}

std::string Placement::to_csv(const Netlist &netlist) const {
    std::ostringstream out;
    out << "gate,x,y,row,col\n";
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        const GateId id{static_cast<std::uint32_t>(i)};
        const GridCell c = grid_of(id);
        out << netlist.gate(id).name << ',' << format_double(coords_[i].x) << ','
            << format_double(coords_[i].y) << ',' << c.row << ',' << c.col << '\n';
    }
    return out.str();
}

Placement Placement::from_csv(const std::string &text, const Netlist &netlist, Die die,
                              GridDims grid) {
    std::vector<Point> coords(netlist.gate_count());
    std::vector<bool> seen(netlist.gate_count(), false);
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty() || (line_no == 1 && line.rfind("gate,", 0) == 0))
            continue;
        const auto fields = split_csv(line);
        if (fields.size() < 3)
            throw ConfigError("placement csv line " + std::to_string(line_no) +
                              ": expected gate,x,y[,row,col]");
        const GateId id = netlist.gate_id(fields[0]);
        try {
            coords[index_of(id)] = {std::stod(fields[1]), std::stod(fields[2])};
        } catch (const std::exception &) {
            throw ConfigError("placement csv line " + std::to_string(line_no) +
                              ": bad coordinate");
        }
        seen[index_of(id)] = true;
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i])
            throw ConfigError("placement csv has no entry for gate '" +
                              netlist.gates()[i].name + "'");
    return Placement(die, grid, std::move(coords));
}

Placement place(const Netlist &netlist, Die die, GridDims grid, std::uint64_t seed,
                PlacementStrategy strategy) {
    const std::size_t n = netlist.gate_count();
    std::vector<Point> coords(n);
    if (strategy == PlacementStrategy::Random) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> ux(0.0, die.width);
        std::uniform_real_distribution<double> uy(0.0, die.height);
        for (std::size_t i = 0; i < n; ++i) {
            coords[i].x = ux(rng);
            coords[i].y = uy(rng);
        }
        return Placement(die, grid, std::move(coords));
    }

    const std::uint32_t bands = netlist.depth() + 1;
    std::vector<std::vector<GateId>> by_level(bands);
    for (GateId g : netlist.topo_order())
        by_level[netlist.level(g)].push_back(g);
    for (std::size_t i = 0; i < n; ++i) // keeps unused ids well defined
        coords[i] = {die.width / 2, die.height / 2};
    const double band_h = die.height / bands;
    for (std::uint32_t lvl = 0; lvl < bands; ++lvl) {
        auto &row = by_level[lvl];
        std::vector<double> key(row.size(), 0.0);
        for (std::size_t k = 0; k < row.size(); ++k) {
            const Gate &g = netlist.gate(row[k]);
            double sum = 0.0;
            for (NetId in : g.inputs)
                sum += coords[index_of(netlist.net(in).driver)].x;
            key[k] = g.inputs.empty() ? static_cast<double>(index_of(row[k]))
                                      : sum / static_cast<double>(g.inputs.size());
        }
        std::vector<std::size_t> order(row.size());
        for (std::size_t k = 0; k < order.size(); ++k)
            order[k] = k;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (key[a] != key[b])
                return key[a] < key[b];
            return index_of(row[a]) < index_of(row[b]);
        });
        const double step = die.width / static_cast<double>(row.size());
        for (std::size_t k = 0; k < order.size(); ++k) {
            coords[index_of(row[order[k]])] = {(static_cast<double>(k) + 0.5) * step,
                                               (static_cast<double>(lvl) + 0.5) * band_h};
        }
    }
    (void)seed;
    return Placement(die, grid, std::move(coords));
}

double gate_distance(const Placement &placement, GateId a, GateId b) {
    return placement.distance(a, b);
}

GridCell grid_of(const Placement &placement, GateId gate) { return placement.grid_of(gate); }

} // namespace htscout
