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

#include "htscout/equivalence.hpp"

#include <bit>

#include "htscout/activity.hpp"
#include "htscout/cnf.hpp"
#include "htscout/error.hpp"
#include "htscout/logic_sim.hpp"
#include "htscout/sat.hpp"

namespace htscout {

EquivalenceResult check_equivalence(const Netlist &a, const Netlist &b,
                                    const EquivalenceOptions &options) {
    // Interface check (throws on mismatch) and the shared input order.
    Miter miter = build_miter(a, b);
    EquivalenceResult result;

    const auto pis_a = a.primary_inputs();
    std::vector<std::size_t> b_slot(pis_a.size());
    {
        std::vector<std::size_t> index_in_b(b.net_count(), 0);
        const auto pis_b = b.primary_inputs();
        for (std::size_t k = 0; k < pis_b.size(); ++k)
            index_in_b[index_of(pis_b[k])] = k;
        for (std::size_t k = 0; k < pis_a.size(); ++k)
            b_slot[k] = index_in_b[index_of(b.net_id(a.net(pis_a[k]).name))];
    }
    std::vector<NetId> po_b;
    for (NetId po : a.primary_outputs())
        po_b.push_back(b.net_id(a.net(po).name));

    const LogicSimulator sim_a(a);
    const LogicSimulator sim_b(b);
    std::vector<std::uint64_t> words_a(pis_a.size());
    std::vector<std::uint64_t> words_b(pis_a.size());
    std::vector<std::uint64_t> nets_a;
    std::vector<std::uint64_t> nets_b;
    const std::uint64_t blocks = (options.random_vectors + 63) / 64;
    result.random_ok = true;
    for (std::uint64_t blk = 0; blk < blocks && result.random_ok; ++blk) {
        for (std::size_t k = 0; k < pis_a.size(); ++k) {
            words_a[k] = input_word(options.seed, k, blk);
            words_b[b_slot[k]] = words_a[k];
        }
        sim_a.evaluate(words_a, nets_a);
        sim_b.evaluate(words_b, nets_b);
        const std::uint64_t valid = std::min<std::uint64_t>(64, options.random_vectors - blk * 64);
        const std::uint64_t mask = valid >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << valid) - 1;
        const auto pos_a = a.primary_outputs();
        std::uint64_t diff = 0;
        for (std::size_t o = 0; o < pos_a.size(); ++o)
            diff |= (nets_a[index_of(pos_a[o])] ^ nets_b[index_of(po_b[o])]) & mask;
        if (diff != 0) {
            result.random_ok = false;
            const int bit = std::countr_zero(diff);
            std::vector<std::pair<std::string, bool>> cex;
            for (std::size_t k = 0; k < pis_a.size(); ++k)
                cex.emplace_back(a.net(pis_a[k]).name, (words_a[k] >> bit) & 1);
            result.counterexample = std::move(cex);
            result.vectors_checked = blk * 64 + static_cast<std::uint64_t>(bit) + 1;
            return result;
        }
        result.vectors_checked += valid;
    }

    if (pis_a.size() <= options.sat_max_inputs) {
        result.sat_attempted = true;
        sat::Solver solver;
        miter.cnf.load_into(solver);
        const sat::Result r = solver.solve({}, options.conflict_limit);
        result.sat_proved = r == sat::Result::Unsat;
        if (r == sat::Result::Sat) {
            std::vector<std::pair<std::string, bool>> cex;
            for (std::size_t k = 0; k < pis_a.size(); ++k)
                cex.emplace_back(a.net(pis_a[k]).name, solver.model_value(miter.pi_vars[k]));
            result.counterexample = std::move(cex);
        }
    }
    return result;
}

} // namespace htscout
