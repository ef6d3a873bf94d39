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

#include <doctest.h>

#include <random>

#include "htscout/error.hpp"
#include "htscout/placement.hpp"
#include "support.hpp"

using namespace htscout;

namespace {

Placement three_gates(std::vector<Point> coords) {
    return Placement(Die{100.0, 100.0}, GridDims{4, 4}, std::move(coords));
}

} // namespace

TEST_CASE("grid cells use floor and clamp to the grid") {
    const Placement p = three_gates({{0.0, 0.0}, {24.999, 25.0}, {99.999, 50.0}});
    CHECK(p.grid_of(GateId{0}) == GridCell{0, 0});
    CHECK(p.grid_of(GateId{1}) == GridCell{1, 0});
    CHECK(p.grid_of(GateId{2}) == GridCell{2, 3});
    CHECK(p.cell_index(GateId{2}) == 2 * 4 + 3);
    CHECK(p.cell_of({100.0, 100.0}) == GridCell{3, 3});
}

TEST_CASE("distance is Euclidean") {
    const Placement p = three_gates({{0.0, 0.0}, {3.0, 4.0}, {6.0, 8.0}});
    CHECK(gate_distance(p, GateId{0}, GateId{1}) == doctest::Approx(5.0));
    CHECK(p.distance(GateId{1}, GateId{0}) == doctest::Approx(5.0));
    CHECK(p.distance(GateId{2}, GateId{2}) == 0.0);
}

TEST_CASE("distance satisfies the triangle inequality") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    std::vector<Point> pts(60);
    for (auto &q : pts)
        q = {u(rng), u(rng)};
    const Placement p = three_gates(pts);
    for (std::uint32_t a = 0; a < 20; ++a)
        for (std::uint32_t b = 20; b < 40; ++b)
            for (std::uint32_t c = 40; c < 60; ++c)
                CHECK(p.distance(GateId{a}, GateId{c}) <=
                      p.distance(GateId{a}, GateId{b}) + p.distance(GateId{b}, GateId{c}) + 1e-9);
}

TEST_CASE("coordinates outside the die are rejected") {
    CHECK_THROWS_AS(three_gates({{100.0, 0.0}}), ConfigError);
    CHECK_THROWS_AS(three_gates({{-0.1, 0.0}}), ConfigError);
    CHECK_THROWS_AS(Placement(Die{0.0, 1.0}, GridDims{}, {}), ConfigError);
    CHECK_THROWS_AS((void)three_gates({{1.0, 1.0}}).at(GateId{5}), NetlistError);
}

TEST_CASE("both strategies are deterministic and stay on the die") {
    const Netlist nl = test::random_netlist(9, 6, 80);
    for (PlacementStrategy s : {PlacementStrategy::TopoRows, PlacementStrategy::Random}) {
        const Placement a = place(nl, {}, {}, 17, s);
        const Placement b = place(nl, {}, {}, 17, s);
        REQUIRE(a.size() == nl.gate_count());
        for (std::uint32_t g = 0; g < nl.gate_count(); ++g) {
            CHECK(a.at(GateId{g}).x == b.at(GateId{g}).x);
            CHECK(a.at(GateId{g}).y == b.at(GateId{g}).y);
        }
        CHECK(parse_strategy(to_string(s)) == s);
    }
    CHECK_THROWS_AS((void)parse_strategy("spiral"), ConfigError);
}

TEST_CASE("topo rows put each level in its own band") {
    const Netlist nl = test::c17();
    const Die die{1000.0, 1000.0};
    const Placement p = place(nl, die, {}, 1, PlacementStrategy::TopoRows);
    const double band = die.height / (nl.depth() + 1);
    for (std::uint32_t g = 0; g < nl.gate_count(); ++g) {
        const double y = p.at(GateId{g}).y;
        CHECK(static_cast<std::uint32_t>(y / band) == nl.level(GateId{g}));
    }
}

TEST_CASE("placement csv round trip") {
    const Netlist nl = test::c17();
    const Placement a = place(nl, {}, {8, 8}, 4, PlacementStrategy::Random);
    const std::string csv = a.to_csv(nl);
    const Placement b = Placement::from_csv(csv, nl, {}, {8, 8});
    CHECK(b.to_csv(nl) == csv);
    for (std::uint32_t g = 0; g < nl.gate_count(); ++g)
        CHECK(a.grid_of(GateId{g}) == b.grid_of(GateId{g}));
    CHECK_THROWS_AS(Placement::from_csv("gate,x,y\n10,1,1\n", nl, {}, {8, 8}), ConfigError);
}

TEST_CASE("extended placement reuses the position of the fed gate") {
    const Netlist nl = test::c17();
    const Placement p = place(nl, {}, {}, 1, PlacementStrategy::TopoRows);
    NetlistDraft d = nl.to_draft();
    const std::string fresh = d.fresh_name("x");
    d.add_gate(fresh, GateKind::Buf, {"16"});
    d.add_output(fresh);
    const Netlist grown = Netlist::build(d);
    const Placement q = p.extended(grown);
    REQUIRE(q.size() == grown.gate_count());
    const GateId buf = grown.gate_id(fresh);
    const GateId po = GateId{static_cast<std::uint32_t>(grown.gate_count() - 1)};
    CHECK(q.at(buf).x == q.at(po).x);
    for (std::uint32_t g = 0; g < nl.gate_count(); ++g)
        CHECK(q.at(GateId{g}).x == p.at(GateId{g}).x);
}
