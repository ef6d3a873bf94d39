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

#ifndef HTSCOUT_GATE_KIND_HPP
#define HTSCOUT_GATE_KIND_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace htscout {

/// Cell types understood by the netlist. INPUT/OUTPUT are zero-delay
/// pseudo-gates marking path endpoints; CONST0/CONST1 are tie cells used to
/// hold side inputs of inserted gates at a fixed value.
enum class GateKind {
    Input,
    Output,
    And,
    Nand,
    Or,
    Nor,
    Xor,
    Xnor,
    Not,
    Buf,
    Const0,
    Const1,
};

inline constexpr std::size_t kGateKindCount = 12;

inline constexpr std::array<GateKind, kGateKindCount> kAllGateKinds = {
    GateKind::Input, GateKind::Output, GateKind::And,  GateKind::Nand,
    GateKind::Or,    GateKind::Nor,    GateKind::Xor,  GateKind::Xnor,
    GateKind::Not,   GateKind::Buf,    GateKind::Const0, GateKind::Const1,
};

constexpr std::size_t to_index(GateKind kind) {
    return static_cast<std::size_t>(kind);
}

/// True for the kinds that invert their on-path input (NOT/NAND/NOR/XNOR).
constexpr bool is_inverting(GateKind kind) {
    return kind == GateKind::Not || kind == GateKind::Nand ||
           kind == GateKind::Nor || kind == GateKind::Xnor;
}

/// Controlling input value: 0 for AND/NAND, 1 for OR/NOR, none otherwise.
constexpr std::optional<bool> controlling_value(GateKind kind) {
    switch (kind) {
    case GateKind::And:
    case GateKind::Nand:
        return false;
    case GateKind::Or:
    case GateKind::Nor:
        return true;
    default:
        return std::nullopt;
    }
}

/// Logic cells, i.e. everything that can sit on a path.
constexpr bool is_logic(GateKind kind) {
    return kind != GateKind::Input && kind != GateKind::Output &&
           kind != GateKind::Const0 && kind != GateKind::Const1;
}

constexpr bool is_constant(GateKind kind) {
    return kind == GateKind::Const0 || kind == GateKind::Const1;
}

/// NOT/BUF take one input, logic gates two or more, pseudo-gates are fixed.
constexpr bool arity_ok(GateKind kind, std::size_t inputs) {
    switch (kind) {
    case GateKind::Input:
    case GateKind::Const0:
    case GateKind::Const1:
        return inputs == 0;
    case GateKind::Output:
    case GateKind::Not:
    case GateKind::Buf:
        return inputs == 1;
    default:
        return inputs >= 2;
    }
}

/// Upper-case mnemonic as written in bench files ("NAND", "CONST1", ...).
std::string_view to_string(GateKind kind);

/// Case-insensitive lookup of a bench mnemonic. Accepts BUFF and INV as
/// aliases of BUF and NOT.
std::optional<GateKind> parse_gate_kind(std::string_view text);

/// Evaluates a gate on 64 input vectors at once.
template <typename Range>
std::uint64_t evaluate_word(GateKind kind, const Range &inputs) {
    std::uint64_t acc = 0;
    switch (kind) {
    case GateKind::And:
    case GateKind::Nand:
        acc = ~std::uint64_t{0};
        for (std::uint64_t w : inputs) acc &= w;
        break;
    case GateKind::Or:
    case GateKind::Nor:
        for (std::uint64_t w : inputs) acc |= w;
        break;
    case GateKind::Xor:
    case GateKind::Xnor:
        for (std::uint64_t w : inputs) acc ^= w;
        break;
    case GateKind::Not:
    case GateKind::Buf:
    case GateKind::Output:
        for (std::uint64_t w : inputs) acc = w;
        break;
    case GateKind::Const1:
        acc = ~std::uint64_t{0};
        break;
    case GateKind::Const0:
    case GateKind::Input:
        break;
    }
    return is_inverting(kind) ? ~acc : acc;
}

} // namespace htscout

#endif // HTSCOUT_GATE_KIND_HPP
