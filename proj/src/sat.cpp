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

#include "htscout/sat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "htscout/error.hpp"

namespace htscout::sat {

namespace {

// Luby sequence 1,1,2,1,1,2,4,... (0-based index).
double luby(double y, int x) {
    int size = 1;
    int seq = 0;
    while (size < x + 1) {
        ++seq;
        size = 2 * size + 1;
    }
    while (size - 1 != x) {
        size = (size - 1) >> 1;
        --seq;
        x = x % size;
    }
    return std::pow(y, seq);
}

constexpr double kVarDecay = 0.95;
constexpr double kClauseDecay = 0.999;
constexpr int kRestartBase = 100;

} // namespace

Solver::Lit Solver::to_lit(int dimacs) {
    const auto v = static_cast<std::uint32_t>(std::abs(dimacs)) - 1;
    return 2 * v + (dimacs < 0 ? 1u : 0u);
}

int Solver::new_var() {
    const auto v = static_cast<std::uint32_t>(assigns_.size());
    assigns_.push_back(-1);
    levels_.push_back(0);
    reasons_.push_back(kNoReason);
    phase_.push_back(false);
    activity_.push_back(0.0);
    seen_.push_back(0);
    heap_pos_.push_back(-1);
    watches_.emplace_back();
    watches_.emplace_back();
    heap_insert(v);
    return static_cast<int>(v) + 1;
}

void Solver::reserve_vars(int count) {
    while (var_count() < count)
        new_var();
}

bool Solver::add_clause(std::span<const int> lits) {
    if (root_unsat_)
        return false;
    backtrack(0);
    std::vector<Lit> c;
    c.reserve(lits.size());
    for (int l : lits) {
        if (l == 0 || std::abs(l) > var_count())
            throw Error("sat: literal " + std::to_string(l) + " refers to an unknown variable");
        c.push_back(to_lit(l));
    }
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    std::size_t out = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i + 1 < c.size() && c[i + 1] == neg(c[i]))
            return true; // tautology
        const int val = value(c[i]);
        if (val == 1)
            return true;
        if (val == 0)
            continue;
        c[out++] = c[i];
    }
    c.resize(out);
    if (c.empty()) {
        root_unsat_ = true;
        return false;
    }
    if (c.size() == 1) {
        assign(c[0], kNoReason);
        if (propagate() != kNoReason) {
            root_unsat_ = true;
            return false;
        }
        return true;
    }
    clauses_.push_back({std::move(c), 0.0, false, false});
    attach(static_cast<std::uint32_t>(clauses_.size() - 1));
    ++original_count_;
    return true;
}

void Solver::attach(std::uint32_t cref) {
    const Clause &c = clauses_[cref];
    watches_[c.lits[0]].push_back(cref);
    watches_[c.lits[1]].push_back(cref);
}

void Solver::assign(Lit l, std::uint32_t reason) {
    const std::uint32_t v = var_of(l);
    assigns_[v] = static_cast<int>((l & 1u) ^ 1u);
    levels_[v] = level();
    reasons_[v] = reason;
    trail_.push_back(l);
}

std::uint32_t Solver::propagate() {
    while (qhead_ < trail_.size()) {
        const Lit false_lit = neg(trail_[qhead_++]);
        auto &ws = watches_[false_lit];
        std::size_t i = 0;
        std::size_t j = 0;
        while (i < ws.size()) {
            const std::uint32_t cref = ws[i++];
            Clause &c = clauses_[cref];
            if (c.deleted)
                continue;
            if (c.lits[0] == false_lit)
                std::swap(c.lits[0], c.lits[1]);
            if (value(c.lits[0]) == 1) {
                ws[j++] = cref;
                continue;
            }
            bool moved = false;
            for (std::size_t k = 2; k < c.lits.size(); ++k) {
                if (value(c.lits[k]) != 0) {
                    std::swap(c.lits[1], c.lits[k]);
                    watches_[c.lits[1]].push_back(cref);
                    moved = true;
                    break;
                }
            }
            if (moved)
                continue;
            ws[j++] = cref;
            if (value(c.lits[0]) == 0) {
                while (i < ws.size())
                    ws[j++] = ws[i++];
                ws.resize(j);
                qhead_ = trail_.size();
                return cref;
            }
            assign(c.lits[0], cref);
        }
        ws.resize(j);
    }
    return kNoReason;
}

void Solver::analyze(std::uint32_t conflict, std::vector<Lit> &learnt,
                     std::uint32_t &back_level) {
    learnt.clear();
    learnt.push_back(0);
    int pending = 0;
    bool have_p = false;
    Lit p = 0;
    std::size_t idx = trail_.size();
    std::uint32_t cref = conflict;
    for (;;) {
        Clause &c = clauses_[cref];
        if (c.learnt)
            bump_clause(c);
        for (std::size_t j = have_p ? 1 : 0; j < c.lits.size(); ++j) {
            const Lit q = c.lits[j];
            const std::uint32_t v = var_of(q);
            if (seen_[v] || levels_[v] == 0)
                continue;
            seen_[v] = 1;
            bump_var(v);
            if (levels_[v] >= level())
                ++pending;
            else
                learnt.push_back(q);
        }
        do {
            --idx;
        } while (!seen_[var_of(trail_[idx])]);
        p = trail_[idx];
        have_p = true;
        seen_[var_of(p)] = 0;
        --pending;
        if (pending <= 0)
            break;
        cref = reasons_[var_of(p)];
    }
    learnt[0] = neg(p);
    for (std::size_t k = 1; k < learnt.size(); ++k)
        seen_[var_of(learnt[k])] = 0;

    back_level = 0;
    if (learnt.size() > 1) {
        std::size_t max_i = 1;
        for (std::size_t k = 2; k < learnt.size(); ++k)
            if (levels_[var_of(learnt[k])] > levels_[var_of(learnt[max_i])])
                max_i = k;
        std::swap(learnt[1], learnt[max_i]);
        back_level = levels_[var_of(learnt[1])];
    }
}

void Solver::backtrack(std::uint32_t to_level) {
    if (level() <= to_level)
        return;
    const std::size_t stop = trail_lim_[to_level];
    for (std::size_t i = trail_.size(); i-- > stop;) {
        const std::uint32_t v = var_of(trail_[i]);
        phase_[v] = assigns_[v] == 1;
        assigns_[v] = -1;
        reasons_[v] = kNoReason;
        if (heap_pos_[v] < 0)
            heap_insert(v);
    }
    trail_.resize(stop);
    trail_lim_.resize(to_level);
    qhead_ = trail_.size();
}

void Solver::bump_var(std::uint32_t v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
        for (double &a : activity_)
            a *= 1e-100;
        var_inc_ *= 1e-100;
    }
    if (heap_pos_[v] >= 0)
        heap_up(static_cast<std::size_t>(heap_pos_[v]));
}

void Solver::bump_clause(Clause &c) {
    c.activity += clause_inc_;
    if (c.activity > 1e20) {
        for (Clause &o : clauses_)
            if (o.learnt)
                o.activity *= 1e-20;
        clause_inc_ *= 1e-20;
    }
}

void Solver::reduce_db() {
    std::vector<std::uint32_t> learnts;
    for (std::uint32_t i = 0; i < clauses_.size(); ++i)
        if (clauses_[i].learnt && !clauses_[i].deleted && clauses_[i].lits.size() > 2)
            learnts.push_back(i);
    std::sort(learnts.begin(), learnts.end(), [&](std::uint32_t a, std::uint32_t b) {
        return clauses_[a].activity < clauses_[b].activity;
    });
    const std::size_t drop = learnts.size() / 2;
    for (std::size_t k = 0; k < drop; ++k) {
        Clause &c = clauses_[learnts[k]];
        const std::uint32_t v = var_of(c.lits[0]);
        const bool locked = reasons_[v] == learnts[k] && value(c.lits[0]) == 1;
        if (locked)
            continue;
        c.deleted = true;
        c.lits.clear();
        c.lits.shrink_to_fit();
        --learnt_count_;
    }
}

Solver::Lit Solver::pick_branch() {
    while (!heap_.empty()) {
        const std::uint32_t v = heap_pop();
        if (assigns_[v] < 0)
            return 2 * v + (phase_[v] ? 0u : 1u);
    }
    return ~Lit{0};
}

Result Solver::solve(std::span<const int> assumptions, std::int64_t conflict_limit) {
    model_.clear();
    if (root_unsat_)
        return Result::Unsat;
    backtrack(0);
    std::vector<Lit> assume;
    assume.reserve(assumptions.size());
    for (int l : assumptions) {
        if (l == 0 || std::abs(l) > var_count())
            throw Error("sat: assumption " + std::to_string(l) + " refers to an unknown variable");
        assume.push_back(to_lit(l));
    }
    if (propagate() != kNoReason) {
        root_unsat_ = true;
        return Result::Unsat;
    }

    std::int64_t conflicts_here = 0;
    int restart_index = 0;
    std::int64_t restart_budget = static_cast<std::int64_t>(luby(2.0, restart_index) * kRestartBase);
    std::int64_t since_restart = 0;
    double max_learnts = static_cast<double>(original_count_) / 3.0 + 2000.0;
    std::vector<Lit> learnt;

    for (;;) {
        const std::uint32_t conflict = propagate();
        if (conflict != kNoReason) {
            ++conflicts_here;
            ++since_restart;
            ++total_conflicts_;
            if (level() == 0) {
                root_unsat_ = true;
                return Result::Unsat;
            }
            std::uint32_t back_level = 0;
            analyze(conflict, learnt, back_level);
            backtrack(back_level);
            if (learnt.size() == 1) {
                assign(learnt[0], kNoReason);
            } else {
                clauses_.push_back({learnt, 0.0, true, false});
                const auto cref = static_cast<std::uint32_t>(clauses_.size() - 1);
                attach(cref);
                bump_clause(clauses_[cref]);
                ++learnt_count_;
                assign(learnt[0], cref);
            }
            var_inc_ /= kVarDecay;
            clause_inc_ /= kClauseDecay;
            if (conflict_limit >= 0 && conflicts_here >= conflict_limit) {
                backtrack(0);
                return Result::Unknown;
            }
            if (since_restart >= restart_budget) {
                backtrack(0);
                since_restart = 0;
                restart_budget = static_cast<std::int64_t>(luby(2.0, ++restart_index) * kRestartBase);
            }
            if (static_cast<double>(learnt_count_) > max_learnts) {
                reduce_db();
                max_learnts *= 1.1;
            }
            continue;
        }

        Lit next = ~Lit{0};
        while (level() < assume.size()) {
            const Lit p = assume[level()];
            const int val = value(p);
            if (val == 1) {
                trail_lim_.push_back(trail_.size());
                continue;
            }
            if (val == 0) {
                backtrack(0);
                return Result::Unsat;
            }
            next = p;
            break;
        }
        if (next == ~Lit{0}) {
            next = pick_branch();
            if (next == ~Lit{0}) {
                model_.resize(assigns_.size());
                for (std::size_t v = 0; v < assigns_.size(); ++v)
                    model_[v] = assigns_[v] == 1;
                backtrack(0);
                return Result::Sat;
            }
        }
        trail_lim_.push_back(trail_.size());
        assign(next, kNoReason);
    }
}

void Solver::heap_insert(std::uint32_t v) {
    heap_pos_[v] = static_cast<int>(heap_.size());
    heap_.push_back(v);
    heap_up(heap_.size() - 1);
}

std::uint32_t Solver::heap_pop() {
    const std::uint32_t top = heap_.front();
    heap_pos_[top] = -1;
    const std::uint32_t last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
        heap_[0] = last;
        heap_pos_[last] = 0;
        heap_down(0);
    }
    return top;
}

void Solver::heap_up(std::size_t i) {
    const std::uint32_t v = heap_[i];
    while (i > 0) {
        const std::size_t parent = (i - 1) / 2;
        if (!heap_less(v, heap_[parent]))
            break;
        heap_[i] = heap_[parent];
        heap_pos_[heap_[i]] = static_cast<int>(i);
        i = parent;
    }
    heap_[i] = v;
    heap_pos_[v] = static_cast<int>(i);
}

void Solver::heap_down(std::size_t i) {
    const std::uint32_t v = heap_[i];
    for (;;) {
        std::size_t child = 2 * i + 1;
        if (child >= heap_.size())
            break;
        if (child + 1 < heap_.size() && heap_less(heap_[child + 1], heap_[child]))
            ++child;
        if (!heap_less(heap_[child], v))
            break;
        heap_[i] = heap_[child];
        heap_pos_[heap_[i]] = static_cast<int>(i);
        i = child;
    }
    heap_[i] = v;
    heap_pos_[v] = static_cast<int>(i);
}

} // namespace htscout::sat
