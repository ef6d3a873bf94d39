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

#ifndef HTSCOUT_PLACEMENT_HPP
#define HTSCOUT_PLACEMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "htscout/netlist.hpp"

namespace htscout {

struct Die {
    double width = 1000.0;
    double height = 1000.0;
};

struct GridDims {
    std::uint32_t rows = 16;
    std::uint32_t cols = 16;
    [[nodiscard]] std::size_t cells() const { return std::size_t{rows} * cols; }
};

struct GridCell {
    std::uint32_t row = 0;
    std::uint32_t col = 0;
    bool operator==(const GridCell &) const = default;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

enum class PlacementStrategy { TopoRows, Random };

std::string_view to_string(PlacementStrategy s);
PlacementStrategy parse_strategy(std::string_view text);

/// Gate coordinates indexed by gate id, all inside [0, width) x [0, height).
class Placement {
public:
    Placement(Die die, GridDims grid, std::vector<Point> coords);

    [[nodiscard]] const Die &die() const { return die_; }
    [[nodiscard]] const GridDims &grid() const { return grid_; }
    [[nodiscard]] std::size_t size() const { return coords_.size(); }

    /// Throws NetlistError(UnknownGate) for unplaced ids.
    [[nodiscard]] const Point &at(GateId gate) const;
    /// Cell = floor(coordinate / cell size), clamped to the grid.
    [[nodiscard]] GridCell grid_of(GateId gate) const;
    [[nodiscard]] GridCell cell_of(Point p) const;
    /// Row-major cell index.
    [[nodiscard]] std::size_t cell_index(GateId gate) const {
        const GridCell c = grid_of(gate);
        return std::size_t{c.row} * grid_.cols + c.col;
    }
    [[nodiscard]] double distance(GateId a, GateId b) const;

    /// Places gates appended to the netlist since this placement was made:
    /// each new gate takes the position of the first gate it feeds, or of
    /// its driver when it feeds nothing.
    [[nodiscard]] Placement extended(const Netlist &netlist) const;

    /// CSV `gate,x,y,row,col`.
    [[nodiscard]] std::string to_csv(const Netlist &netlist) const;
    static Placement from_csv(const std::string &text, const Netlist &netlist, Die die,
                              GridDims grid);

private:
    Die die_;
    GridDims grid_;
    std::vector<Point> coords_;
};

/// Deterministic per (netlist, die, grid, seed, strategy). topo-rows gives
/// each topological level its own horizontal band (level 0 at the bottom)
/// and orders the gates of a band by the mean x of their fan-in.
Placement place(const Netlist &netlist, Die die, GridDims grid, std::uint64_t seed,
                PlacementStrategy strategy);

/// Free function form of Placement::distance.
double gate_distance(const Placement &placement, GateId a, GateId b);
/// Free function form of Placement::grid_of.
GridCell grid_of(const Placement &placement, GateId gate);

} // namespace htscout

#endif // HTSCOUT_PLACEMENT_HPP
