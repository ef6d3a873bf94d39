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

#include "htscout/symmetry.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <tuple>

#include "htscout/error.hpp"
#include "htscout/util.hpp"

namespace htscout {

std::string_view to_string(SymmetryType t) {
    switch (t) {
    case SymmetryType::Type1:
        return "type1";
    case SymmetryType::Type2:
        return "type2";
    case SymmetryType::None:
        return "none";
    }
    return "none";
}

SymmetryType parse_symmetry(std::string_view text) {
    if (text == "type1")
        return SymmetryType::Type1;
    if (text == "type2")
        return SymmetryType::Type2;
    if (text == "none")
        return SymmetryType::None;
    throw ConfigError("unknown symmetry type '" + std::string(text) + "'");
}

std::string_view to_string(NetSelection::Status s) {
    switch (s) {
    case NetSelection::Status::Covered:
        return "covered";
    case NetSelection::Status::Created:
        return "created";
    case NetSelection::Status::Uncoverable:
        return "uncoverable";
    case NetSelection::Status::Unresolvable:
        return "unresolvable";
    }
    return "unresolvable";
}

namespace {

using Signature = std::array<std::uint16_t, kGateKindCount>;

Signature signature_of(const std::vector<GateKind> &kinds) {
    Signature s{};
    for (GateKind k : kinds)
        ++s[to_index(k)];
    return s;
}

Signature signature_of(const Netlist &nl, const Path &p) {
    return signature_of(kind_sequence(p, nl));
}

Point centroid_of(const Placement &pl, const Path &p) {
    Point c;
    for (const PinRef &h : p.hops) {
        const Point &q = pl.at(h.gate);
        c.x += q.x;
        c.y += q.y;
    }
    const auto n = static_cast<double>(p.hops.size());
    return {c.x / n, c.y / n};
}

std::vector<Point> points_of(const Placement &pl, const Path &p) {
    std::vector<Point> pts;
    pts.reserve(p.hops.size());
    for (const PinRef &h : p.hops)
        pts.push_back(pl.at(h.gate));
    return pts;
}

std::size_t fanout_difference(const Netlist &nl, const Path &s, const Path &r,
                              const std::vector<std::size_t> &matched) {
    std::size_t total = 0;
    for (std::size_t i = 0; i < matched.size(); ++i) {
        const auto fs = nl.fanout(*nl.gate(s.hops[i].gate).output);
        const auto fr = nl.fanout(*nl.gate(r.hops[matched[i]].gate).output);
        total += fs > fr ? fs - fr : fr - fs;
    }
    return total;
}

std::vector<std::uint32_t> net_ids(const Path &p) {
    std::vector<std::uint32_t> ids;
    ids.reserve(p.nets.size());
    for (NetId n : p.nets)
        ids.push_back(index_of(n));
    return ids;
}

// Candidate universe: every structural path (up to the cap) bucketed by
// gate-kind signature, with each bucket binned on a coarse grid of path
// centroids. Sensitizability is decided on first use and cached; the cache
// slots are atomic so net tasks may share the universe.
struct Bucket {
    std::vector<std::uint32_t> members;
    std::vector<std::vector<std::uint32_t>> bins; // kBins x kBins, row-major
};

constexpr int kBins = 32;

struct Universe {
    std::vector<Path> paths;
    std::vector<Point> centroid;
    std::vector<std::atomic<signed char>> sensitizable; // -1 unknown
    std::map<Signature, Bucket> buckets;
    double bin_w = 1.0;
    double bin_h = 1.0;
    bool truncated = false;
    std::atomic<std::uint64_t> timeouts{0};

    [[nodiscard]] std::size_t checked() const {
        return static_cast<std::size_t>(std::count_if(sensitizable.begin(), sensitizable.end(),
                                                      [](const auto &c) { return c.load() >= 0; }));
    }
    [[nodiscard]] std::size_t sensitizable_count() const {
        return static_cast<std::size_t>(std::count_if(sensitizable.begin(), sensitizable.end(),
                                                      [](const auto &c) { return c.load() == 1; }));
    }
    [[nodiscard]] int bin_x(double x) const {
        return std::clamp(static_cast<int>(std::floor(x / bin_w)), 0, kBins - 1);
    }
    [[nodiscard]] int bin_y(double y) const {
        return std::clamp(static_cast<int>(std::floor(y / bin_h)), 0, kBins - 1);
    }
};

bool is_sensitizable_cached(Universe &u, SensitizationChecker &checker, std::uint32_t id) {
    signed char v = u.sensitizable[id].load(std::memory_order_relaxed);
    if (v < 0) {
        const std::uint64_t before = checker.timeouts();
        v = checker.is_sensitizable(u.paths[id]) ? 1 : 0;
        u.timeouts += checker.timeouts() - before;
        u.sensitizable[id].store(v, std::memory_order_relaxed);
    }
    return v == 1;
}

// Decides `ids` (or an even stride of at most `limit` of them) up front.
void sensitize_stride(const Netlist &nl, Universe &u, const std::vector<std::uint32_t> &ids,
                      std::size_t limit, const SelectionOptions &opt) {
    if (ids.empty() || limit == 0)
        return;
    std::vector<std::uint32_t> pick;
    if (ids.size() <= limit) {
        pick = ids;
    } else {
        pick.reserve(limit);
        for (std::size_t k = 0; k < limit; ++k)
            pick.push_back(ids[k * ids.size() / limit]);
    }
    const unsigned workers = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(pick.size())));
    const std::size_t chunk = (pick.size() + workers - 1) / workers;
    parallel_for(workers, workers, [&](std::size_t w) {
        SensitizationChecker checker(nl, opt.sensitize);
        const std::size_t hi = std::min(pick.size(), (w + 1) * chunk);
        for (std::size_t k = w * chunk; k < hi; ++k)
            is_sensitizable_cached(u, checker, pick[k]);
    });
}

std::unique_ptr<Universe> build_universe(const Netlist &nl, const Placement &pl,
                                         const SelectionOptions &opt) {
    auto u = std::make_unique<Universe>();
    PathSet all = enumerate_all_paths(nl, {opt.global_path_cap, opt.limits.max_length});
    u->paths = std::move(all.paths);
    u->truncated = all.truncated;
    u->bin_w = pl.die().width / kBins;
    u->bin_h = pl.die().height / kBins;
    const std::size_t n = u->paths.size();
    u->centroid.resize(n);
    u->sensitizable = std::vector<std::atomic<signed char>>(n);
    for (auto &c : u->sensitizable)
        c.store(-1);
    for (std::size_t i = 0; i < n; ++i) {
        u->centroid[i] = centroid_of(pl, u->paths[i]);
        Bucket &b = u->buckets[signature_of(nl, u->paths[i])];
        if (b.bins.empty())
            b.bins.resize(static_cast<std::size_t>(kBins * kBins));
        const auto id = static_cast<std::uint32_t>(i);
        b.members.push_back(id);
        b.bins[static_cast<std::size_t>(u->bin_y(u->centroid[i].y) * kBins +
                                        u->bin_x(u->centroid[i].x))]
            .push_back(id);
    }
    // The sensitizable share of the universe is reported from an even
    // sample when the universe exceeds the full-check limit.
    std::vector<std::uint32_t> ids(n);
    for (std::size_t i = 0; i < n; ++i)
        ids[i] = static_cast<std::uint32_t>(i);
    sensitize_stride(nl, *u, ids, opt.full_check_limit, opt);
    return u;
}

struct NetTask {
    NetSelection selection;
    std::vector<SymmetricPathPair> pairs;
    std::vector<Path> sensitizable_suspects;
    std::uint64_t timeouts = 0;
};

std::int64_t branch_key(const Path &p, NetId net) {
    for (std::size_t k = 0; k < p.nets.size(); ++k)
        if (p.nets[k] == net)
            return k < p.hops.size() ? static_cast<std::int64_t>(index_of(p.hops[k].gate)) : -1;
    return -1;
}

bool pair_valid(const Path &s, const Path &r, NetId net) {
    return !r.contains(net) && r.nets != s.nets;
}

NetTask gather_suspects(const Netlist &nl, NetId net, const SelectionOptions &opt) {
    NetTask task;
    task.selection.net = net;
    PathSet through = enumerate_paths(nl, net, opt.limits);
    task.selection.suspect_paths = through.paths.size();
    task.selection.truncated = through.truncated;
    SensitizationChecker checker(nl, opt.sensitize);
    for (Path &p : through.paths)
        if (checker.is_sensitizable(p))
            task.sensitizable_suspects.push_back(std::move(p));
    task.timeouts = checker.timeouts();
    task.selection.sensitizable_suspects = task.sensitizable_suspects.size();
    task.selection.status = task.sensitizable_suspects.empty() ? NetSelection::Status::Unresolvable
                                                               : NetSelection::Status::Uncoverable;
    return task;
}

// Valid sensitizable candidates for a chosen suspect. Buckets larger than
// the count limit are estimated from an even sample.
std::size_t count_candidates(Universe &u, SensitizationChecker &checker, const Bucket &bucket,
                             const Path &suspect, NetId net, std::size_t limit, bool &estimated) {
    const auto &m = bucket.members;
    if (m.size() <= limit || limit == 0) {
        std::size_t k = 0;
        for (std::uint32_t r : m)
            if (pair_valid(suspect, u.paths[r], net) && is_sensitizable_cached(u, checker, r))
                ++k;
        return k;
    }
    estimated = true;
    std::size_t hits = 0;
    for (std::size_t k = 0; k < limit; ++k) {
        const std::uint32_t r = m[k * m.size() / limit];
        if (pair_valid(suspect, u.paths[r], net) && is_sensitizable_cached(u, checker, r))
            ++hits;
    }
    return static_cast<std::size_t>(
        std::llround(static_cast<double>(hits) * static_cast<double>(m.size()) / static_cast<double>(limit)));
}

void match_suspects(const Netlist &nl, const Placement &pl, Universe &u, NetTask &task,
                    const SelectionOptions &opt) {
    const NetId net = task.selection.net;
    if (task.sensitizable_suspects.empty())
        return;
    SensitizationChecker checker(nl, opt.sensitize);
    std::map<std::int64_t, std::vector<std::size_t>> branches;
    for (std::size_t i = 0; i < task.sensitizable_suspects.size(); ++i)
        branches[branch_key(task.sensitizable_suspects[i], net)].push_back(i);

    struct Best {
        double rank = std::numeric_limits<double>::infinity();
        std::size_t suspect = 0;
        std::uint32_t reference = 0;
        std::vector<std::uint32_t> suspect_ids;
        std::vector<std::uint32_t> reference_ids;
        RankResult detail;
        bool found = false;
    };
    const double bin_min = std::min(u.bin_w, u.bin_h);

    for (const auto &[key, members] : branches) {
        Best best;
        for (std::size_t si : members) {
            const Path &s = task.sensitizable_suspects[si];
            const auto kinds = kind_sequence(s, nl);
            const auto it = u.buckets.find(signature_of(kinds));
            if (it == u.buckets.end())
                continue;
            const Bucket &bucket = it->second;
            const Point cs = centroid_of(pl, s);
            const auto pts = points_of(pl, s);
            const int bx = u.bin_x(cs.x);
            const int by = u.bin_y(cs.y);
            std::vector<std::uint32_t> s_ids;
            auto consider = [&](std::uint32_t r, double bound) {
                if (best.found && bound > best.rank * (1.0 + 1e-12) + 1e-12)
                    return;
                const Path &ref = u.paths[r];
                if (!pair_valid(s, ref, net))
                    return;
                RankResult rr = greedy_rank(kinds, pts, kind_sequence(ref, nl), points_of(pl, ref));
                bool better = !best.found || rr.rank < best.rank;
                std::vector<std::uint32_t> r_ids;
                if (!better && rr.rank == best.rank) {
                    if (s_ids.empty())
                        s_ids = net_ids(s);
                    r_ids = net_ids(ref);
                    const auto best_len = task.sensitizable_suspects[best.suspect].length();
                    better = s.length() < best_len ||
                             (s.length() == best_len &&
                              (s_ids < best.suspect_ids ||
                               (s_ids == best.suspect_ids && r_ids < best.reference_ids)));
                }
                if (!better || !is_sensitizable_cached(u, checker, r))
                    return;
                if (s_ids.empty())
                    s_ids = net_ids(s);
                if (r_ids.empty())
                    r_ids = net_ids(ref);
                best.found = true;
                best.rank = rr.rank;
                best.suspect = si;
                best.reference = r;
                best.suspect_ids = std::move(s_ids);
                s_ids = best.suspect_ids;
                best.reference_ids = std::move(r_ids);
                best.detail = std::move(rr);
            };
            // Rings of bins at Chebyshev distance `ring` around the suspect's
            // bin hold centroids at least (ring - 1) * bin_min away. The
            // matching is a bijection, so the mean matched distance is at
            // least the centroid distance.
            for (int ring = 0; ring < kBins; ++ring) {
                if (best.found && (ring - 1) * bin_min > best.rank * (1.0 + 1e-12) + 1e-12)
                    break;
                for (int y = by - ring; y <= by + ring; ++y) {
                    if (y < 0 || y >= kBins)
                        continue;
                    const bool edge_row = y == by - ring || y == by + ring;
                    for (int x = bx - ring; x <= bx + ring; x += (edge_row || ring == 0) ? 1 : 2 * ring) {
                        if (x < 0 || x >= kBins)
                            continue;
                        for (std::uint32_t r : bucket.bins[static_cast<std::size_t>(y * kBins + x)]) {
                            const Point &cr = u.centroid[r];
                            consider(r, std::hypot(cs.x - cr.x, cs.y - cr.y));
                        }
                    }
                }
            }
        }
        if (!best.found)
            continue;
        SymmetricPathPair pair;
        pair.suspect = task.sensitizable_suspects[best.suspect];
        pair.reference = u.paths[best.reference];
        pair.symmetry = classify_pair(nl, pair.suspect, pair.reference);
        pair.rank = best.detail.rank;
        pair.covered_net = net;
        if (key >= 0)
            pair.branch = GateId{static_cast<std::uint32_t>(key)};
        pair.fanout_difference = fanout_difference(nl, pair.suspect, pair.reference, best.detail.matched);
        task.selection.symmetric_candidates +=
            count_candidates(u, checker, u.buckets.at(signature_of(nl, pair.suspect)), pair.suspect,
                             net, opt.candidate_count_limit, task.selection.candidates_estimated);
        task.pairs.push_back(std::move(pair));
    }
    task.selection.status = task.pairs.empty() ? NetSelection::Status::Uncoverable
                                               : NetSelection::Status::Covered;
}

std::vector<NetTask> select_all(const Netlist &nl, const Placement &pl, Universe &u,
                                const std::vector<NetId> &nets, const SelectionOptions &opt) {
    std::vector<NetTask> tasks(nets.size());
    parallel_for(nets.size(), opt.jobs, [&](std::size_t i) {
        tasks[i] = gather_suspects(nl, nets[i], opt);
        match_suspects(nl, pl, u, tasks[i], opt);
    });
    return tasks;
}

std::optional<GateKind> tie_for(GateKind kind) {
    switch (kind) {
    case GateKind::And:
    case GateKind::Nand:
        return GateKind::Const1;
    case GateKind::Or:
    case GateKind::Nor:
        return GateKind::Const0;
    default:
        return std::nullopt;
    }
}

void freeze_path_pins(const Path &p, std::vector<PinRef> &pins) {
    pins.insert(pins.end(), p.hops.begin(), p.hops.end());
}

} // namespace

SymmetryType classify_kinds(const std::vector<GateKind> &a, const std::vector<GateKind> &b) {
    if (a.empty() || b.empty())
        return SymmetryType::None;
    if (a == b)
        return SymmetryType::Type1;
    if (signature_of(a) == signature_of(b))
        return SymmetryType::Type2;
    return SymmetryType::None;
}

SymmetryType classify_pair(const Netlist &netlist, const Path &a, const Path &b) {
    if (a.nets == b.nets)
        return SymmetryType::None;
    return classify_kinds(kind_sequence(a, netlist), kind_sequence(b, netlist));
}

RankResult greedy_rank(const std::vector<GateKind> &suspect_kinds,
                       const std::vector<Point> &suspect_points,
                       const std::vector<GateKind> &reference_kinds,
                       const std::vector<Point> &reference_points) {
    if (suspect_kinds.size() != suspect_points.size() ||
        reference_kinds.size() != reference_points.size())
        throw Error("rank: kinds and points differ in length");
    if (suspect_kinds.empty())
        throw Error("rank: empty suspect path");
    RankResult result;
    result.matched.resize(suspect_kinds.size());
    std::vector<char> used(reference_kinds.size(), 0);
    double total = 0.0;
    for (std::size_t i = 0; i < suspect_kinds.size(); ++i) {
        std::size_t best = reference_kinds.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < reference_kinds.size(); ++j) {
            if (used[j] || reference_kinds[j] != suspect_kinds[i])
                continue;
            const double d = std::hypot(suspect_points[i].x - reference_points[j].x,
                                        suspect_points[i].y - reference_points[j].y);
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        if (best == reference_kinds.size())
            throw Error("rank: no unmatched " + std::string(to_string(suspect_kinds[i])) +
                        " gate on the reference path");
        used[best] = 1;
        result.matched[i] = best;
        total += best_d;
    }
    result.rank = total / static_cast<double>(suspect_kinds.size());
    return result;
}

RankResult rank_pair(const Netlist &netlist, const Path &suspect, const Path &reference,
                     const Placement &placement) {
    return greedy_rank(kind_sequence(suspect, netlist), points_of(placement, suspect),
                       kind_sequence(reference, netlist), points_of(placement, reference));
}

std::optional<ReferenceCreation>
create_reference_path(NetId net, const std::vector<Path> &sensitizable_paths,
                      const Netlist &netlist, const Placement &placement,
                      const ReferenceBudget &budget, const SelectionOptions &options,
                      std::vector<std::string> *why) {
    auto note = [&](const std::string &msg) {
        if (why)
            why->push_back(msg);
    };
    if (sensitizable_paths.empty()) {
        note("no sensitizable path through the net");
        return std::nullopt;
    }
    const DelayModel timing(netlist, placement, 0.3);
    const TechTable &tech = netlist.tech();

    // p_short candidates, fastest first.
    std::vector<std::size_t> shorts(sensitizable_paths.size());
    for (std::size_t i = 0; i < shorts.size(); ++i)
        shorts[i] = i;
    std::vector<double> short_delay(shorts.size());
    for (std::size_t i = 0; i < shorts.size(); ++i)
        short_delay[i] = timing.worst_path_delay(sensitizable_paths[i]);
    std::stable_sort(shorts.begin(), shorts.end(), [&](std::size_t a, std::size_t b) {
        if (short_delay[a] != short_delay[b])
            return short_delay[a] < short_delay[b];
        return sensitizable_paths[a].length() < sensitizable_paths[b].length();
    });

    PathSet universe = enumerate_all_paths(netlist, {options.global_path_cap, options.limits.max_length});
    std::vector<Signature> sigs(universe.paths.size());
    std::vector<double> delays(universe.paths.size());
    for (std::size_t i = 0; i < universe.paths.size(); ++i) {
        sigs[i] = signature_of(netlist, universe.paths[i]);
        delays[i] = timing.worst_path_delay(universe.paths[i]);
    }
    SensitizationChecker checker(netlist, options.sensitize);
    std::map<std::size_t, bool> sens_cache;
    auto sensitizable = [&](std::size_t i) {
        auto it = sens_cache.find(i);
        if (it == sens_cache.end())
            it = sens_cache.emplace(i, checker.is_sensitizable(universe.paths[i])).first;
        return it->second;
    };
    auto frozen = [&](const PinRef &pin) {
        return std::find(budget.frozen_pins.begin(), budget.frozen_pins.end(), pin) !=
               budget.frozen_pins.end();
    };

    for (std::size_t si : shorts) {
        const Path &p_short = sensitizable_paths[si];
        const auto short_kinds = kind_sequence(p_short, netlist);
        const Signature short_sig = signature_of(short_kinds);

        struct Candidate {
            double area;
            double delay;
            std::size_t id;
            Signature extra;
        };
        std::vector<Candidate> cands;
        for (std::size_t i = 0; i < universe.paths.size(); ++i) {
            const Path &q = universe.paths[i];
            if (q.contains(net) || delays[i] > budget.max_delay)
                continue;
            Signature extra{};
            bool subset = true;
            bool proper = false;
            for (std::size_t k = 0; k < kGateKindCount; ++k) {
                if (sigs[i][k] > short_sig[k]) {
                    subset = false;
                    break;
                }
                extra[k] = static_cast<std::uint16_t>(short_sig[k] - sigs[i][k]);
                proper = proper || extra[k] > 0;
            }
            if (!subset || !proper)
                continue;
            double area = 0.0;
            for (std::size_t k = 0; k < kGateKindCount; ++k)
                area += extra[k] * tech.cell(kAllGateKinds[k]).area;
            cands.push_back({area, delays[i], i, extra});
        }
        std::stable_sort(cands.begin(), cands.end(), [](const Candidate &a, const Candidate &b) {
            return std::tie(a.area, a.delay) < std::tie(b.area, b.delay);
        });
        if (cands.empty())
            note("p_short via '" + netlist.net(p_short.start).name +
                 "': no non-critical path with a gate subset");

        for (const Candidate &c : cands) {
            const Path &p_sub = universe.paths[c.id];
            const std::string tag = "p_sub from '" + netlist.net(p_sub.start).name + "' (" +
                                    std::to_string(p_sub.length()) + " gates): ";
            if (c.extra[to_index(GateKind::Xor)] > 0 || c.extra[to_index(GateKind::Xnor)] > 0) {
                note(tag + "extra gates include XOR/XNOR, which have no non-controlling value");
                continue;
            }
            std::size_t inverting = 0;
            for (GateKind k : kAllGateKinds)
                if (is_inverting(k))
                    inverting += c.extra[to_index(k)];
            if (inverting % 2 != 0) {
                note(tag + "odd number of inverting extra gates changes the function");
                continue;
            }
            const PinRef rewired = p_sub.hops.front();
            if (frozen(rewired) || p_short.contains_gate(rewired.gate) ||
                std::find(p_short.hops.begin(), p_short.hops.end(), rewired) != p_short.hops.end()) {
                note(tag + "entry pin is used by an already selected path");
                continue;
            }
            if (!sensitizable(c.id)) {
                note(tag + "not sensitizable");
                continue;
            }

            // Extra gates in p_short order: the earliest occurrences of each
            // surplus kind.
            Signature remaining = c.extra;
            std::vector<GateKind> chain;
            for (GateKind k : short_kinds) {
                if (remaining[to_index(k)] > 0) {
                    --remaining[to_index(k)];
                    chain.push_back(k);
                }
            }

            NetlistDraft draft = netlist.to_draft();
            std::string prev = netlist.net(p_sub.nets.front()).name;
            std::vector<std::size_t> gate_records;
            std::vector<std::string> names;
            for (GateKind k : chain) {
                std::vector<std::string> ins{prev};
                if (const auto tie = tie_for(k)) {
                    const std::string tie_name = draft.fresh_name(prev + "__ref_tie");
                    draft.add_gate(tie_name, *tie, {});
                    ins.push_back(tie_name);
                }
                const std::string out = draft.fresh_name(prev + "__ref");
                gate_records.push_back(draft.add_gate(out, k, std::move(ins)));
                names.push_back(out);
                prev = out;
            }
            draft.record(index_of(rewired.gate)).inputs[rewired.pin] = prev;
            Netlist modified = Netlist::build(draft);
            const Placement mod_place = placement.extended(modified);

            const DelayModel mod_timing(modified, mod_place, 0.3);
            const StaticTiming st = static_timing(mod_timing);
            const NetId entry = modified.net_id(prev);
            const double through = st.arrival[index_of(entry)] + st.tail[index_of(entry)];
            if (through > budget.max_delay) {
                note(tag + "path through the inserted chain takes " + format_double(through) +
                     " ps, over the " + format_double(budget.max_delay) + " ps budget");
                continue;
            }

            EquivalenceResult eq = check_equivalence(netlist, modified, options.equivalence);
            if (!eq.equivalent()) {
                note(tag + "modified netlist is not equivalent");
                continue;
            }

            Path ref;
            ref.start = p_sub.start;
            ref.nets.push_back(p_sub.start);
            for (std::size_t g : gate_records) {
                ref.hops.push_back({GateId{static_cast<std::uint32_t>(g)}, 0});
                ref.nets.push_back(*modified.gate(GateId{static_cast<std::uint32_t>(g)}).output);
            }
            for (std::size_t k = 0; k < p_sub.hops.size(); ++k) {
                ref.hops.push_back(p_sub.hops[k]);
                ref.nets.push_back(p_sub.nets[k + 1]);
            }
            ref.end = ref.nets.back();
            check_path(modified, ref);
            SensitizationChecker mod_checker(modified, options.sensitize);
            if (!mod_checker.is_sensitizable(ref) || !mod_checker.is_sensitizable(p_short)) {
                note(tag + "created reference path is not sensitizable");
                continue;
            }

            ReferenceCreation out{std::move(modified), {}, {}, 0.0, std::move(eq)};
            out.pair.suspect = p_short;
            out.pair.reference = std::move(ref);
            out.pair.symmetry = classify_pair(out.netlist, out.pair.suspect, out.pair.reference);
            out.pair.covered_net = net;
            out.pair.branch = branch_key(p_short, net) >= 0
                                  ? std::optional<GateId>(GateId{static_cast<std::uint32_t>(branch_key(p_short, net))})
                                  : std::nullopt;
            out.pair.created = true;
            out.pair.extra_gates = names;
            for (std::size_t g : gate_records) {
                out.inserted.push_back(GateId{static_cast<std::uint32_t>(g)});
                out.extra_area += tech.cell(out.netlist.gate(GateId{static_cast<std::uint32_t>(g)}).kind).area;
            }
            return out;
        }
    }
    return std::nullopt;
}

SelectionResult select_pairs(const Netlist &netlist, const std::vector<NetId> &vulnerable,
                             const Placement &placement, const SelectionOptions &options) {
    const auto u0 = build_universe(netlist, placement, options);
    SelectionResult result{netlist, placement, {}, {}, 0, 0.0, netlist.logic_area(), 0.0,
                           u0->paths.size(), u0->checked(), u0->sensitizable_count(),
                           u0->truncated, 0};
    std::vector<NetTask> tasks = select_all(netlist, placement, *u0, vulnerable, options);
    result.sat_timeouts = u0->timeouts;
    for (const NetTask &t : tasks)
        result.sat_timeouts += t.timeouts;

    // Reference creation, one net at a time in vulnerable-set order.
    std::vector<std::optional<SymmetricPathPair>> created(vulnerable.size());
    bool modified = false;
    if (options.create_references) {
        const DelayModel timing(netlist, placement, 0.3);
        ReferenceBudget budget;
        budget.max_delay = options.timing_budget * static_timing(timing).max_delay;
        for (const NetTask &t : tasks)
            for (const SymmetricPathPair &p : t.pairs) {
                freeze_path_pins(p.suspect, budget.frozen_pins);
                freeze_path_pins(p.reference, budget.frozen_pins);
            }
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            if (tasks[i].selection.status != NetSelection::Status::Uncoverable)
                continue;
            std::vector<Path> suspects = tasks[i].sensitizable_suspects;
            if (modified) {
                // Re-enumerate on the current netlist.
                suspects.clear();
                SensitizationChecker checker(result.netlist, options.sensitize);
                for (Path &p : enumerate_paths(result.netlist, vulnerable[i], options.limits).paths)
                    if (checker.is_sensitizable(p))
                        suspects.push_back(std::move(p));
            }
            auto made = create_reference_path(vulnerable[i], suspects, result.netlist,
                                              result.placement, budget, options);
            if (!made)
                continue;
            result.netlist = std::move(made->netlist);
            result.placement = placement.extended(result.netlist);
            result.extra_gates_added += made->inserted.size();
            result.extra_area += made->extra_area;
            freeze_path_pins(made->pair.suspect, budget.frozen_pins);
            freeze_path_pins(made->pair.reference, budget.frozen_pins);
            created[i] = std::move(made->pair);
            modified = true;
        }
    }

    if (modified) {
        // Inserted gates add paths and move pins; redo the regular selection
        // on the final netlist. Frozen pins keep every earlier choice valid.
        const auto u1 = build_universe(result.netlist, result.placement, options);
        std::vector<NetId> redo;
        std::vector<std::size_t> slot;
        for (std::size_t i = 0; i < tasks.size(); ++i)
            if (tasks[i].selection.status == NetSelection::Status::Covered) {
                redo.push_back(vulnerable[i]);
                slot.push_back(i);
            }
        std::vector<NetTask> again = select_all(result.netlist, result.placement, *u1, redo, options);
        for (std::size_t k = 0; k < again.size(); ++k) {
            result.sat_timeouts += again[k].timeouts;
            tasks[slot[k]] = std::move(again[k]);
        }
        result.sat_timeouts += u1->timeouts;
    }

    for (std::size_t i = 0; i < tasks.size(); ++i) {
        NetSelection sel = tasks[i].selection;
        std::vector<SymmetricPathPair> pairs = std::move(tasks[i].pairs);
        if (created[i]) {
            SymmetricPathPair p = std::move(*created[i]);
            const RankResult rr = rank_pair(result.netlist, p.suspect, p.reference, result.placement);
            p.rank = rr.rank;
            p.fanout_difference = fanout_difference(result.netlist, p.suspect, p.reference, rr.matched);
            sel.status = NetSelection::Status::Created;
            sel.symmetric_candidates = 1;
            pairs.push_back(std::move(p));
        }
        for (SymmetricPathPair &p : pairs) {
            p.id = result.pairs.size();
            sel.pair_ids.push_back(p.id);
            result.pairs.push_back(std::move(p));
        }
        result.nets.push_back(std::move(sel));
    }
    result.area_overhead = result.original_area > 0.0 ? result.extra_area / result.original_area : 0.0;
    return result;
}

std::vector<NetId> SelectionResult::covered() const {
    std::vector<NetId> out;
    for (const auto &n : nets)
        if (n.status == NetSelection::Status::Covered)
            out.push_back(n.net);
    return out;
}

std::vector<NetId> SelectionResult::uncovered_resolved() const {
    std::vector<NetId> out;
    for (const auto &n : nets)
        if (n.status == NetSelection::Status::Created)
            out.push_back(n.net);
    return out;
}

std::vector<NetId> SelectionResult::unresolved() const {
    std::vector<NetId> out;
    for (const auto &n : nets)
        if (n.status == NetSelection::Status::Uncoverable ||
            n.status == NetSelection::Status::Unresolvable)
            out.push_back(n.net);
    return out;
}

nlohmann::json SelectionResult::to_json() const {
    nlohmann::json j;
    nlohmann::json jn = nlohmann::json::array();
    for (const auto &n : nets) {
        jn.push_back({{"net", netlist.net(n.net).name},
                      {"status", to_string(n.status)},
                      {"suspect_paths", n.suspect_paths},
                      {"sensitizable_suspects", n.sensitizable_suspects},
                      {"truncated", n.truncated},
                      {"symmetric_candidates", n.symmetric_candidates},
                      {"candidates_estimated", n.candidates_estimated},
                      {"pairs", n.pair_ids}});
    }
    nlohmann::json jp = nlohmann::json::array();
    for (const auto &p : pairs) {
        nlohmann::json s = path_json(p.suspect, netlist);
        nlohmann::json r = path_json(p.reference, netlist);
        jp.push_back({{"id", p.id},
                      {"covered_net", netlist.net(p.covered_net).name},
                      {"branch", p.branch ? nlohmann::json(netlist.gate(*p.branch).name)
                                          : nlohmann::json(nullptr)},
                      {"suspect", s},
                      {"reference", r},
                      {"type", to_string(p.symmetry)},
                      {"rank", p.rank},
                      {"created", p.created},
                      {"extra_gates", p.extra_gates},
                      {"fanout_difference", p.fanout_difference}});
    }
    j["nets"] = jn;
    j["pairs"] = jp;
    j["extra_gates_added"] = extra_gates_added;
    j["extra_area"] = extra_area;
    j["original_area"] = original_area;
    j["area_overhead"] = area_overhead;
    j["universe_paths"] = universe_paths;
    j["universe_checked"] = universe_checked;
    j["universe_sensitizable"] = universe_sensitizable;
    j["universe_truncated"] = universe_truncated;
    j["sat_timeouts"] = sat_timeouts;
    return j;
}

double net_coverage(const std::vector<SymmetricPathPair> &pairs, const Netlist &netlist) {
    std::vector<char> on(netlist.net_count(), 0);
    for (const auto &p : pairs) {
        for (NetId n : p.suspect.nets)
            on[index_of(n)] = 1;
        for (NetId n : p.reference.nets)
            on[index_of(n)] = 1;
    }
    std::size_t total = 0;
    std::size_t hit = 0;
    for (std::size_t n = 0; n < netlist.net_count(); ++n) {
        if (is_constant(netlist.gate(netlist.nets()[n].driver).kind))
            continue;
        ++total;
        hit += on[n] ? 1 : 0;
    }
    return total == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(total);
}

double net_coverage(const SelectionResult &result, const Netlist &netlist) {
    return net_coverage(result.pairs, netlist);
}

} // namespace htscout
