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

#ifndef HTSCOUT_SAT_HPP
#define HTSCOUT_SAT_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace htscout::sat {

/// Literals use DIMACS conventions: variable v >= 1, literal v or -v.
enum class Result { Sat, Unsat, Unknown };

/// Conflict-driven clause-learning solver: two watched literals, first-UIP
/// learning, VSIDS branching, phase saving and Luby restarts. Assumptions
/// are decided first, so learnt clauses stay valid across calls and the
/// solver can be reused incrementally.
class Solver {
public:
    int new_var();
    void reserve_vars(int count);
    [[nodiscard]] int var_count() const { return static_cast<int>(assigns_.size()); }

    /// Adds a clause over existing variables. Returns false once the clause
    /// set is known to be unsatisfiable at the root.
    bool add_clause(std::span<const int> lits);
    bool add_clause(std::initializer_list<int> lits) {
        return add_clause(std::span<const int>(lits.begin(), lits.size()));
    }

    /// Unknown is returned when `conflict_limit` (if >= 0) is reached.
    Result solve(std::span<const int> assumptions = {}, std::int64_t conflict_limit = -1);

    /// Model value after a Sat result.
    [[nodiscard]] bool model_value(int var) const { return model_.at(static_cast<std::size_t>(var - 1)); }

    [[nodiscard]] std::uint64_t conflicts() const { return total_conflicts_; }

private:
    using Lit = std::uint32_t; // 2 * (var - 1) + negated
    static constexpr std::uint32_t kNoReason = ~std::uint32_t{0};

    struct Clause {
        std::vector<Lit> lits;
        double activity = 0.0;
        bool learnt = false;
        bool deleted = false;
    };

    static Lit to_lit(int dimacs);
    static std::uint32_t var_of(Lit l) { return l >> 1; }
    static Lit neg(Lit l) { return l ^ 1u; }

    // 1 true, 0 false, -1 unassigned
    [[nodiscard]] int value(Lit l) const {
        const int a = assigns_[var_of(l)];
        return a < 0 ? -1 : (a ^ static_cast<int>(l & 1u));
    }
    [[nodiscard]] std::uint32_t level() const { return static_cast<std::uint32_t>(trail_lim_.size()); }

    void assign(Lit l, std::uint32_t reason);
    std::uint32_t propagate();
    void analyze(std::uint32_t conflict, std::vector<Lit> &learnt, std::uint32_t &back_level);
    void backtrack(std::uint32_t to_level);
    void attach(std::uint32_t cref);
    void bump_var(std::uint32_t v);
    void bump_clause(Clause &c);
    void reduce_db();
    Lit pick_branch();

    void heap_insert(std::uint32_t v);
    std::uint32_t heap_pop();
    void heap_up(std::size_t i);
    void heap_down(std::size_t i);
    [[nodiscard]] bool heap_less(std::uint32_t a, std::uint32_t b) const {
        return activity_[a] > activity_[b];
    }

    std::vector<Clause> clauses_;
    std::vector<std::vector<std::uint32_t>> watches_; // by literal
    std::vector<int> assigns_;
    std::vector<std::uint32_t> levels_;
    std::vector<std::uint32_t> reasons_;
    std::vector<bool> phase_;
    std::vector<double> activity_;
    std::vector<Lit> trail_;
    std::vector<std::size_t> trail_lim_;
    std::size_t qhead_ = 0;
    std::vector<std::uint32_t> heap_;
    std::vector<int> heap_pos_;
    std::vector<char> seen_;
    std::vector<bool> model_;
    double var_inc_ = 1.0;
    double clause_inc_ = 1.0;
    std::size_t learnt_count_ = 0;
    std::size_t original_count_ = 0;
    std::uint64_t total_conflicts_ = 0;
    bool root_unsat_ = false;
};

} // namespace htscout::sat

#endif // HTSCOUT_SAT_HPP
