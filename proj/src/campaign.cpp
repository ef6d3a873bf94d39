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

#include "htscout/campaign.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "htscout/activity.hpp"
#include "htscout/util.hpp"
#include "htscout/version.hpp"

namespace htscout {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char *kConfigFile = "config.json";
constexpr const char *kManifestFile = "manifest.json";
constexpr const char *kTechFile = "tech.json";
constexpr const char *kActivityFile = "activity.csv";
constexpr const char *kVulnerableFile = "vulnerable.json";
constexpr const char *kPlacementFile = "placement.csv";
constexpr const char *kFinalPlacementFile = "placement_final.csv";
constexpr const char *kSelectionFile = "selection.json";
constexpr const char *kFinalNetlistFile = "netlist_final.bench";
constexpr const char *kNominalFile = "nominal.csv";
constexpr const char *kCalibrationFile = "calibration.json";
constexpr const char *kCalibrationDmFile = "calibration_dm.csv";
constexpr const char *kPrefabSummaryFile = "prefab_summary.json";
constexpr const char *kTrojanFile = "trojans.json";

void reject_unknown(const json &j, std::string_view where, std::initializer_list<std::string_view> keys) {
    if (!j.is_object())
        throw ConfigError(std::string(where) + ": expected an object");
    for (const auto &[k, v] : j.items())
        if (std::find(keys.begin(), keys.end(), k) == keys.end())
            throw ConfigError(std::string(where) + ": unknown key '" + k + "'");
}

fs::path resolve(const fs::path &base, const std::string &p) {
    const fs::path path(p);
    return path.is_absolute() ? path.lexically_normal() : fs::absolute(base / path).lexically_normal();
}

std::string file_digest(const fs::path &p) { return to_hex(fnv1a64(read_file(p.string()))); }

template <class T> T get(const json &j, std::string_view where, const char *key, T fallback) {
    if (!j.contains(key))
        return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception &) {
        throw ConfigError(std::string(where) + "." + key + ": wrong type");
    }
}

using Clock = std::chrono::steady_clock;

// Runs one stage, tagging failures with its name. Validation errors keep
// their type so callers can tell them from stage failures.
template <class F> auto stage(const std::string &name, json &timings, F &&fn) {
    const auto t0 = Clock::now();
    auto finish = [&] { timings[name] = std::chrono::duration<double>(Clock::now() - t0).count(); };
    try {
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            finish();
        } else {
            auto r = fn();
            finish();
            return r;
        }
    } catch (const NetlistError &e) {
        throw NetlistError(e.kind(), name + ": " + e.what(), 0, e.nets());
    } catch (const ConfigError &e) {
        throw ConfigError(name + ": " + e.what());
    } catch (const StageError &) {
        throw;
    } catch (const std::exception &e) {
        throw StageError(name, e.what());
    }
}

json path_record(const Path &p, const Netlist &nl) {
    json j = path_json(p, nl);
    json pins = json::array();
    for (const PinRef &h : p.hops)
        pins.push_back(h.pin);
    j["pins"] = pins;
    return j;
}

Path path_from_record(const json &j, const Netlist &nl) {
    Path p = path_from_net_names(nl, j.at("net_sequence").get<std::vector<std::string>>());
    const auto pins = j.at("pins").get<std::vector<std::uint32_t>>();
    if (pins.size() != p.hops.size())
        throw ConfigError("selection: pin list does not match the path length");
    for (std::size_t k = 0; k < pins.size(); ++k)
        p.hops[k].pin = pins[k];
    check_path(nl, p);
    return p;
}

json pairs_json(const std::vector<SymmetricPathPair> &pairs, const Netlist &nl) {
    json out = json::array();
    for (const auto &p : pairs)
        out.push_back({{"id", p.id},
                       {"covered_net", nl.net(p.covered_net).name},
                       {"branch", p.branch ? json(nl.gate(*p.branch).name) : json(nullptr)},
                       {"type", to_string(p.symmetry)},
                       {"rank", p.rank},
                       {"created", p.created},
                       {"extra_gates", p.extra_gates},
                       {"fanout_difference", p.fanout_difference},
                       {"suspect", path_record(p.suspect, nl)},
                       {"reference", path_record(p.reference, nl)}});
    return out;
}

std::vector<SymmetricPathPair> pairs_from_json(const json &arr, const Netlist &nl) {
    std::vector<SymmetricPathPair> pairs;
    for (const json &j : arr) {
        SymmetricPathPair p;
        p.id = j.at("id").get<std::size_t>();
        if (p.id != pairs.size())
            throw ConfigError("selection: pair ids must be 0..n-1 in order");
        p.covered_net = nl.net_id(j.at("covered_net").get<std::string>());
        if (!j.at("branch").is_null())
            p.branch = nl.gate_id(j.at("branch").get<std::string>());
        p.symmetry = parse_symmetry(j.at("type").get<std::string>());
        p.rank = j.at("rank").get<double>();
        p.created = j.at("created").get<bool>();
        p.extra_gates = j.at("extra_gates").get<std::vector<std::string>>();
        p.fanout_difference = j.at("fanout_difference").get<std::size_t>();
        p.suspect = path_from_record(j.at("suspect"), nl);
        p.reference = path_from_record(j.at("reference"), nl);
        pairs.push_back(std::move(p));
    }
    return pairs;
}

json point_json(DelayPoint p) { return json::array({p.ps, p.pr}); }

DelayPoint point_from(const json &j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

std::vector<TrojanSpec> trojans_from_json(const json &j) {
    std::vector<TrojanSpec> out;
    const json &arr = j.is_object() && j.contains("trojans") ? j.at("trojans") : j;
    if (arr.is_object()) {
        out.push_back(TrojanSpec::from_json(arr));
    } else if (arr.is_array()) {
        for (const json &t : arr)
            out.push_back(TrojanSpec::from_json(t));
    } else {
        throw ConfigError("trojans: expected an object or an array");
    }
    return out;
}

json trojans_json(const std::vector<TrojanSpec> &specs) {
    json arr = json::array();
    for (const auto &s : specs)
        arr.push_back(s.to_json());
    return arr;
}

std::string circuit_name(const CampaignConfig &c) { return c.netlist.stem().string(); }

} // namespace

// ---------------------------------------------------------------- config

CampaignConfig CampaignConfig::from_json(const json &j, const fs::path &base_dir) {
    CampaignConfig c;
    try {
        reject_unknown(j, "config",
                       {"schema_version", "netlist", "seed", "activity", "paths", "placement",
                        "variation", "tech", "instances", "trojans", "fpr_budget",
                        "type1_transition", "timing_budget", "create_references",
                        "equivalence_vectors", "output"});
        const int version = get<int>(j, "config", "schema_version", 0);
        if (version != kSchemaVersion)
            throw ConfigError("config.schema_version: expected " + std::to_string(kSchemaVersion) +
                              ", got " + std::to_string(version));
        if (!j.contains("netlist"))
            throw ConfigError("config.netlist: required");
        c.netlist = resolve(base_dir, get<std::string>(j, "config", "netlist", ""));
        c.seed = get<std::uint64_t>(j, "config", "seed", c.seed);

        if (j.contains("activity")) {
            const json &a = j.at("activity");
            reject_unknown(a, "activity", {"vectors", "threshold"});
            c.activity_vectors = get<std::uint64_t>(a, "activity", "vectors", c.activity_vectors);
            c.activity_threshold = get<double>(a, "activity", "threshold", c.activity_threshold);
        }
        if (j.contains("paths")) {
            const json &p = j.at("paths");
            reject_unknown(p, "paths", {"max_paths", "max_length", "global_cap", "criterion", "conflict_limit"});
            c.limits.max_paths = get<std::size_t>(p, "paths", "max_paths", c.limits.max_paths);
            c.limits.max_length = get<std::size_t>(p, "paths", "max_length", c.limits.max_length);
            c.global_path_cap = get<std::size_t>(p, "paths", "global_cap", c.global_path_cap);
            c.sensitize.criterion =
                parse_criterion(get<std::string>(p, "paths", "criterion", std::string(to_string(c.sensitize.criterion))));
            c.sensitize.conflict_limit = get<std::int64_t>(p, "paths", "conflict_limit", c.sensitize.conflict_limit);
        }
        if (j.contains("placement")) {
            const json &p = j.at("placement");
            reject_unknown(p, "placement", {"die", "grid", "strategy", "file"});
            if (p.contains("die")) {
                const auto d = get<std::vector<double>>(p, "placement", "die", {});
                if (d.size() != 2)
                    throw ConfigError("placement.die: expected [width, height]");
                c.die = {d[0], d[1]};
            }
            if (p.contains("grid")) {
                const auto g = get<std::vector<std::uint32_t>>(p, "placement", "grid", {});
                if (g.size() != 2)
                    throw ConfigError("placement.grid: expected [rows, cols]");
                c.grid = {g[0], g[1]};
            }
            c.strategy = parse_strategy(get<std::string>(p, "placement", "strategy", std::string(to_string(c.strategy))));
            if (p.contains("file") && !p.at("file").is_null())
                c.placement_file = resolve(base_dir, get<std::string>(p, "placement", "file", ""));
        }
        json v = j.value("variation", json::object());
        reject_unknown(v, "variation",
                       {"vth_nominal", "inter_3sigma_pct", "intra_3sigma_pct", "sigma_inter",
                        "sigma_intra", "spatial_fraction", "corr_near", "corr_far"});
        v["grid"] = json::array({c.grid.rows, c.grid.cols});
        c.variation = VariationParams::from_json(v);
        if (j.contains("tech") && !j.at("tech").is_null())
            c.tech_file = resolve(base_dir, get<std::string>(j, "config", "tech", ""));
        if (j.contains("instances")) {
            const json &n = j.at("instances");
            reject_unknown(n, "instances", {"calibration", "clean", "trojan"});
            c.instances.calibration = get<std::size_t>(n, "instances", "calibration", c.instances.calibration);
            c.instances.clean = get<std::size_t>(n, "instances", "clean", c.instances.clean);
            c.instances.trojan = get<std::size_t>(n, "instances", "trojan", c.instances.trojan);
        }
        if (j.contains("trojans"))
            c.trojans = trojans_from_json(j.at("trojans"));
        c.fpr_budget = get<double>(j, "config", "fpr_budget", c.fpr_budget);
        const auto tr = get<std::string>(j, "config", "type1_transition", "rise");
        if (tr != "rise" && tr != "fall")
            throw ConfigError("config.type1_transition: expected 'rise' or 'fall'");
        c.type1_transition = tr == "rise" ? Transition::Rise : Transition::Fall;
        c.timing_budget = get<double>(j, "config", "timing_budget", c.timing_budget);
        c.create_references = get<bool>(j, "config", "create_references", c.create_references);
        c.equivalence_vectors = get<std::uint64_t>(j, "config", "equivalence_vectors", c.equivalence_vectors);
        c.output = resolve(base_dir, get<std::string>(j, "config", "output", "htscout-out"));
    } catch (const json::exception &e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    c.check();
    return c;
}

CampaignConfig CampaignConfig::load(const fs::path &file) {
    json j;
    try {
        j = json::parse(read_file(file.string()));
    } catch (const json::parse_error &e) {
        throw ConfigError(file.string() + ": " + e.what());
    }
    return from_json(j, fs::absolute(file).parent_path());
}

void CampaignConfig::check() const {
    auto require_file = [](const fs::path &p, const char *what) {
        if (!fs::is_regular_file(p))
            throw ConfigError(std::string(what) + ": file '" + p.string() + "' does not exist");
    };
    require_file(netlist, "netlist");
    if (tech_file)
        require_file(*tech_file, "tech");
    if (placement_file)
        require_file(*placement_file, "placement.file");
    if (activity_vectors < 2)
        throw ConfigError("activity.vectors: need at least 2 vectors");
    if (!(activity_threshold > 0.0) || activity_threshold > 1.0)
        throw ConfigError("activity.threshold: must lie in (0, 1]");
    if (limits.max_paths < 1 || limits.max_length < 1 || global_path_cap < 1)
        throw ConfigError("paths: limits must be at least 1");
    if (instances.calibration < 1 || instances.clean < 1 || instances.trojan < 1)
        throw ConfigError("instances: counts must be at least 1");
    if (!(fpr_budget >= 0.0 && fpr_budget < 1.0))
        throw ConfigError("fpr_budget: must lie in [0, 1)");
    if (!(timing_budget > 0.0 && timing_budget <= 1.0))
        throw ConfigError("timing_budget: must lie in (0, 1]");
    variation.check();
}

json CampaignConfig::to_json() const {
    json v = variation.to_json();
    v.erase("grid");
    json j = {
        {"schema_version", kSchemaVersion},
        {"netlist", netlist.string()},
        {"seed", seed},
        {"activity", {{"vectors", activity_vectors}, {"threshold", activity_threshold}}},
        {"paths",
         {{"max_paths", limits.max_paths},
          {"max_length", limits.max_length},
          {"global_cap", global_path_cap},
          {"criterion", to_string(sensitize.criterion)},
          {"conflict_limit", sensitize.conflict_limit}}},
        {"placement",
         {{"die", {die.width, die.height}},
          {"grid", {grid.rows, grid.cols}},
          {"strategy", to_string(strategy)},
          {"file", placement_file ? json(placement_file->string()) : json(nullptr)}}},
        {"variation", v},
        {"tech", tech_file ? json(tech_file->string()) : json(nullptr)},
        {"instances",
         {{"calibration", instances.calibration}, {"clean", instances.clean}, {"trojan", instances.trojan}}},
        {"fpr_budget", fpr_budget},
        {"type1_transition", to_string(type1_transition)},
        {"timing_budget", timing_budget},
        {"create_references", create_references},
        {"equivalence_vectors", equivalence_vectors},
        {"output", output.string()},
    };
    if (!trojans.empty())
        j["trojans"] = trojans_json(trojans);
    return j;
}

std::string CampaignConfig::hash() const {
    // Location-independent: file references enter through their contents
    // and the output directory does not enter at all.
    json j = to_json();
    j.erase("output");
    j["netlist"] = file_digest(netlist);
    if (tech_file)
        j["tech"] = file_digest(*tech_file);
    if (placement_file)
        j["placement"]["file"] = file_digest(*placement_file);
    return to_hex(fnv1a64(j.dump()));
}

// ---------------------------------------------------------------- prefab

namespace {

DelayModel delay_model(const Netlist &nl, const Placement &pl, const VariationParams &v) {
    return DelayModel(nl, pl, v.vth_nominal);
}

std::vector<std::vector<double>> calibration_dms(const DelayModel &model,
                                                 const std::vector<SymmetricPathPair> &pairs,
                                                 const std::vector<ExpectedLine> &lines,
                                                 const CampaignConfig &c, unsigned jobs) {
    const CovarianceModel cov = build_covariance(c.variation);
    const std::uint64_t stream = derive_seed(c.seed, "calibration");
    const std::size_t n = c.instances.calibration;
    std::vector<std::vector<double>> by_instance(n);
    parallel_for(n, jobs, [&](std::size_t i) {
        const VthProfile prof = sample_instance(cov, c.variation, counter_seed(stream, i), VariationMode::Full);
        auto &row = by_instance[i];
        row.reserve(pairs.size());
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            const PairDelay d = pair_delay(model, pairs[p], prof, c.type1_transition);
            row.push_back(detection_metric(lines[p], {d.ps, d.pr}));
        }
    });
    std::vector<std::vector<double>> by_pair(pairs.size(), std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t p = 0; p < pairs.size(); ++p)
            by_pair[p][i] = by_instance[i][p];
    return by_pair;
}

json summary_row(const CampaignConfig &c, const Netlist &original, const PrefabSummary &s,
                 std::size_t vulnerable) {
    const SelectionResult &sel = s.selection;
    std::size_t type1 = 0;
    std::size_t type2 = 0;
    for (const auto &p : sel.pairs)
        (p.symmetry == SymmetryType::Type1 ? type1 : type2) += 1;
    std::size_t uncovered = 0;
    for (const auto &n : sel.nets)
        if (n.pair_ids.empty())
            ++uncovered;
    const double sens_pct = sel.universe_checked > 0
                                ? 100.0 * static_cast<double>(sel.universe_sensitizable) /
                                      static_cast<double>(sel.universe_checked)
                                : 0.0;
    const double coverage = vulnerable > 0 ? 100.0 * static_cast<double>(vulnerable - uncovered) /
                                                 static_cast<double>(vulnerable)
                                           : 100.0;
    return {{"circuit", circuit_name(c)},
            {"gates", original.logic_gate_count()},
            {"nets", original.net_count()},
            {"sensitizable_path_pct", sens_pct},
            {"sensitizable_path_pct_sampled", sel.universe_checked < sel.universe_paths},
            {"universe_paths", sel.universe_paths},
            {"universe_truncated", sel.universe_truncated},
            {"vulnerable_nets", vulnerable},
            {"uncovered_nets", uncovered},
            {"extra_gates", sel.extra_gates_added},
            {"spp_count", sel.pairs.size()},
            {"type1_pairs", type1},
            {"type2_pairs", type2},
            {"net_coverage_pct", coverage},
            {"path_net_coverage_pct", 100.0 * net_coverage(sel, sel.netlist)},
            {"area_overhead_pct", 100.0 * sel.area_overhead},
            {"bypass_probability", s.bypass_probability},
            {"sat_timeouts", sel.sat_timeouts}};
}

} // namespace

PrefabSummary run_prefab(const CampaignConfig &config, unsigned jobs) {
    config.check();
    jobs = std::max(1u, jobs);
    const fs::path out = config.output;
    fs::create_directories(out);
    const auto put = [&](const char *name, std::string_view text) { write_file((out / name).string(), text); };
    json timings = json::object();
    json artifacts = json::array();
    const auto wrote = [&](const char *name) { artifacts.push_back(name); };

    const std::string hash = config.hash();
    put(kConfigFile, config.to_json().dump(2) + "\n");
    wrote(kConfigFile);

    const TechTable tech = stage("parse", timings, [&] {
        TechTable t = config.tech_file ? TechTable::load(config.tech_file->string()) : TechTable::builtin();
        t.check(config.variation.max_vth());
        return t;
    });
    put(kTechFile, tech.to_json().dump(2) + "\n");
    wrote(kTechFile);
    const Netlist netlist = stage("parse", timings, [&] { return load_bench(config.netlist.string(), tech); });

    const std::uint64_t activity_seed = derive_seed(config.seed, "activity");
    const VulnerableNetSet vulnerable = stage("activity", timings, [&] {
        const ActivityProfile prof = simulate_random(netlist, config.activity_vectors, activity_seed, jobs);
        put(kActivityFile, activity_csv(prof, netlist));
        VulnerableNetSet v = vulnerable_nets(prof, netlist, config.activity_threshold);
        json nets = json::array();
        for (NetId n : v.nets)
            nets.push_back({{"net", netlist.net(n).name}, {"activity", prof.of(n)}});
        put(kVulnerableFile, json({{"threshold", v.threshold}, {"nets", nets}}).dump(2) + "\n");
        return v;
    });
    wrote(kActivityFile);
    wrote(kVulnerableFile);

    const std::uint64_t placement_seed = derive_seed(config.seed, "placement");
    const Placement placement = stage("placement", timings, [&] {
        Placement p = config.placement_file
                          ? Placement::from_csv(read_file(config.placement_file->string()), netlist,
                                                config.die, config.grid)
                          : place(netlist, config.die, config.grid, placement_seed, config.strategy);
        put(kPlacementFile, p.to_csv(netlist));
        return p;
    });
    wrote(kPlacementFile);

    PrefabSummary summary{stage("selection", timings, [&] {
                              SelectionOptions opt;
                              opt.limits = config.limits;
                              opt.global_path_cap = config.global_path_cap;
                              opt.sensitize = config.sensitize;
                              opt.timing_budget = config.timing_budget;
                              opt.create_references = config.create_references;
                              opt.equivalence.random_vectors = config.equivalence_vectors;
                              opt.equivalence.seed = derive_seed(config.seed, "equivalence");
                              opt.jobs = jobs;
                              return select_pairs(netlist, vulnerable.nets, placement, opt);
                          }),
                          {},
                          {},
                          0.0};
    SelectionResult &sel = summary.selection;
    {
        json j = sel.to_json();
        j["pairs"] = pairs_json(sel.pairs, sel.netlist);
        put(kSelectionFile, j.dump(2) + "\n");
        put(kFinalNetlistFile, write_bench(sel.netlist));
        put(kFinalPlacementFile, sel.placement.to_csv(sel.netlist));
    }
    wrote(kSelectionFile);
    wrote(kFinalNetlistFile);
    wrote(kFinalPlacementFile);
    if (sel.pairs.empty())
        std::cerr << "warning: no symmetric path pair was selected; every IC will classify as Trojan-free\n";

    const DelayModel model = delay_model(sel.netlist, sel.placement, config.variation);
    stage("nominal", timings, [&] {
        const VthProfile nominal = uniform_profile(config.variation, 0.0);
        const VthProfile shifted = uniform_profile(config.variation, 2.0 * config.variation.sigma_inter);
        std::ostringstream csv;
        csv << "pair_id,P_s_nom,P_r_nom,P_s_rs,P_r_rs\n";
        for (const auto &p : sel.pairs) {
            const PairDelay a = pair_delay(model, p, nominal, config.type1_transition);
            const PairDelay b = pair_delay(model, p, shifted, config.type1_transition);
            try {
                summary.lines.push_back(fit_expected_line({a.ps, a.pr}, {b.ps, b.pr}));
            } catch (const NumericError &e) {
                throw NumericError("pair " + std::to_string(p.id) + ": " + e.what() +
                                   "; recalibrate with a larger inter-die offset");
            }
            csv << p.id << ',' << format_double(a.ps) << ',' << format_double(a.pr) << ','
                << format_double(b.ps) << ',' << format_double(b.pr) << '\n';
        }
        put(kNominalFile, csv.str());
    });
    wrote(kNominalFile);

    stage("calibration", timings, [&] {
        const auto dms = calibration_dms(model, sel.pairs, summary.lines, config, jobs);
        summary.thresholds = sel.pairs.empty() ? ThresholdSet{{}, config.fpr_budget}
                                               : calibrate(dms, config.fpr_budget);
        json cal = json::object();
        std::ostringstream csv;
        csv << "instance,pair_id,dm\n";
        for (std::size_t p = 0; p < sel.pairs.size(); ++p) {
            const ExpectedLine &l = summary.lines[p];
            cal[std::to_string(p)] = {{"alpha", l.alpha},
                                      {"beta", l.beta},
                                      {"nominal", point_json(l.nominal)},
                                      {"sample", point_json(l.sample)},
                                      {"dt", summary.thresholds.dt[p]}};
        }
        for (std::size_t i = 0; i < config.instances.calibration; ++i)
            for (std::size_t p = 0; p < sel.pairs.size(); ++p)
                csv << i << ',' << p << ',' << format_double(dms[p][i]) << '\n';
        put(kCalibrationFile, cal.dump(2) + "\n");
        put(kCalibrationDmFile, csv.str());
    });
    wrote(kCalibrationFile);
    wrote(kCalibrationDmFile);

    if (!sel.pairs.empty()) {
        std::vector<std::size_t> k;
        for (const auto &n : sel.nets)
            if (!n.pair_ids.empty())
                k.push_back(std::max<std::size_t>(1, n.symmetric_candidates));
        summary.bypass_probability = attacker_bypass_probability(vulnerable.nets.size(), k);
    }
    put(kPrefabSummaryFile, summary_row(config, netlist, summary, vulnerable.nets.size()).dump(2) + "\n");
    wrote(kPrefabSummaryFile);

    const json manifest = {
        {"config_hash", hash},
        {"tool_version", kVersion},
        {"seeds",
         {{"master", config.seed},
          {"activity", activity_seed},
          {"placement", placement_seed},
          {"calibration", derive_seed(config.seed, "calibration")},
          {"clean", derive_seed(config.seed, "clean")},
          {"trojan", derive_seed(config.seed, "trojan")}}},
        {"artifacts", artifacts},
        {"timings_s", timings},
    };
    put(kManifestFile, manifest.dump(2) + "\n");
    return summary;
}

// ---------------------------------------------------------------- bundle

PrefabBundle load_prefab(const fs::path &where, const std::optional<CampaignConfig> &config) {
    const fs::path dir = fs::absolute(where).lexically_normal();
    auto need = [&](const char *name) {
        const fs::path p = dir / name;
        if (!fs::is_regular_file(p))
            throw ConfigError("prefab directory '" + dir.string() + "' lacks " + name);
        return read_file(p.string());
    };
    json manifest;
    json stored;
    json cal;
    json selection;
    try {
        manifest = json::parse(need(kManifestFile));
        stored = json::parse(need(kConfigFile));
        cal = json::parse(need(kCalibrationFile));
        selection = json::parse(need(kSelectionFile));
    } catch (const json::parse_error &e) {
        throw ConfigError(std::string("prefab artifacts: ") + e.what());
    }
    const std::string hash = manifest.at("config_hash").get<std::string>();
    if (config && config->hash() != hash)
        throw ConfigError("config hash " + config->hash() + " does not match calibration hash " + hash +
                          "; rerun prefab with this config");

    // The stored config refers to the original input files, which postfab
    // does not need; skip the existence checks by parsing a copy whose file
    // fields point at the prefab artifacts.
    json shadow = stored;
    shadow["netlist"] = (dir / kFinalNetlistFile).string();
    shadow["tech"] = (dir / kTechFile).string();
    shadow["placement"]["file"] = nullptr;
    CampaignConfig c = config ? *config : CampaignConfig::from_json(shadow, dir);
    c.output = dir;

    TechTable tech = TechTable::from_json(json::parse(need(kTechFile)));
    Netlist nl = parse_bench(need(kFinalNetlistFile), tech);
    Placement pl = Placement::from_csv(need(kFinalPlacementFile), nl, c.die, c.grid);
    auto pairs = pairs_from_json(selection.at("pairs"), nl);

    std::vector<ExpectedLine> lines;
    ThresholdSet thresholds{{}, c.fpr_budget};
    if (cal.size() != pairs.size())
        throw ConfigError("calibration lists " + std::to_string(cal.size()) + " pairs, selection " +
                          std::to_string(pairs.size()));
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const json &e = cal.at(std::to_string(p));
        ExpectedLine l;
        l.alpha = e.at("alpha").get<double>();
        l.beta = e.at("beta").get<double>();
        l.nominal = point_from(e.at("nominal"));
        l.sample = point_from(e.at("sample"));
        lines.push_back(l);
        thresholds.dt.push_back(e.at("dt").get<double>());
    }

    std::vector<std::string> vulnerable;
    const json vul = json::parse(need(kVulnerableFile));
    for (const json &v : vul.at("nets"))
        vulnerable.push_back(v.at("net").get<std::string>());

    std::vector<TrojanSpec> trojans;
    if (fs::is_regular_file(dir / kTrojanFile))
        trojans = trojans_from_json(json::parse(read_file((dir / kTrojanFile).string())));

    const std::string circuit = fs::path(stored.at("netlist").get<std::string>()).stem().string();
    return PrefabBundle{std::move(c), stored, circuit, hash,         std::move(tech),  std::move(nl),
                        std::move(pl), std::move(pairs), std::move(lines), std::move(thresholds),
                        std::move(vulnerable), std::move(trojans)};
}

// ---------------------------------------------------------------- inject

std::vector<TrojanSpec> default_trojans(const PrefabBundle &b) {
    std::set<std::string> covered;
    for (const auto &p : b.pairs)
        covered.insert(b.netlist.net(p.covered_net).name);
    std::vector<TrojanSpec> out;
    for (const std::string &target : b.vulnerable) {
        if (!covered.count(target) || b.netlist.net(b.netlist.net_id(target)).primary_output)
            continue;
        TrojanSpec s;
        s.target_net = target;
        // Trigger taps on the two rarest other vulnerable nets.
        for (const std::string &t : b.vulnerable)
            if (t != target && s.trigger_nets.size() < 2)
                s.trigger_nets.push_back(t);
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<TrojanSpec> run_inject(const PrefabBundle &bundle,
                                   const std::optional<std::vector<TrojanSpec>> &specs) {
    std::vector<TrojanSpec> out = specs ? *specs : (bundle.config.trojans.empty() ? default_trojans(bundle)
                                                                                  : bundle.config.trojans);
    if (out.empty())
        throw ConfigError("inject: no Trojan to insert (no covered net and no explicit spec)");
    for (const auto &s : out) {
        const TrojanInsertion ins = inject_trojan(bundle.netlist, s);
        ins.netlist.check_invariants();
    }
    write_file((bundle.config.output / kTrojanFile).string(), trojans_json(out).dump(2) + "\n");
    return out;
}

// ---------------------------------------------------------------- populations

Population simulate_clean(const PrefabBundle &b, std::size_t count, unsigned jobs) {
    const CampaignConfig &c = b.config;
    const CovarianceModel cov = build_covariance(c.variation);
    const DelayModel model = delay_model(b.netlist, b.placement, c.variation);
    const std::uint64_t stream = derive_seed(c.seed, "clean");
    Population pop;
    pop.points.resize(count);
    parallel_for(count, std::max(1u, jobs), [&](std::size_t i) {
        const VthProfile prof = sample_instance(cov, c.variation, counter_seed(stream, i), VariationMode::Full);
        auto &row = pop.points[i];
        for (const auto &p : b.pairs) {
            const PairDelay d = pair_delay(model, p, prof, c.type1_transition);
            row.push_back({d.ps, d.pr});
        }
    });
    return pop;
}

Population simulate_trojan(const PrefabBundle &b, const std::vector<TrojanSpec> &trojans,
                           std::size_t count, unsigned jobs) {
    if (trojans.empty())
        throw ConfigError("trojan population: no Trojan spec (run inject first)");
    const CampaignConfig &c = b.config;
    const CovarianceModel cov = build_covariance(c.variation);
    struct Variant {
        TrojanInsertion ins;
        Placement pl;
        std::vector<SymmetricPathPair> pairs;
    };
    std::vector<Variant> variants;
    variants.reserve(trojans.size());
    for (const auto &spec : trojans) {
        TrojanInsertion ins = inject_trojan(b.netlist, spec);
        Placement pl = b.placement.extended(ins.netlist);
        std::vector<SymmetricPathPair> pairs = b.pairs;
        for (auto &p : pairs) {
            p.suspect = remap_path(p.suspect, ins);
            p.reference = remap_path(p.reference, ins);
        }
        variants.push_back({std::move(ins), std::move(pl), std::move(pairs)});
    }
    std::vector<DelayModel> models;
    models.reserve(variants.size());
    for (const auto &v : variants)
        models.push_back(delay_model(v.ins.netlist, v.pl, c.variation));

    const std::uint64_t stream = derive_seed(c.seed, "trojan");
    Population pop;
    pop.points.resize(count);
    pop.trojan_of.resize(count);
    parallel_for(count, std::max(1u, jobs), [&](std::size_t i) {
        const std::size_t t = i % variants.size();
        pop.trojan_of[i] = t;
        const VthProfile prof = sample_instance(cov, c.variation, counter_seed(stream, i), VariationMode::Full);
        auto &row = pop.points[i];
        // Delays are timed against the original suspect's pair type, so a
        // Type1 pair stays single-transition after the payload is spliced in.
        for (std::size_t p = 0; p < b.pairs.size(); ++p) {
            const auto &pair = variants[t].pairs[p];
            const PairDelay d = pair_delay(models[t], pair.suspect, pair.reference, b.pairs[p].symmetry, prof,
                                           c.type1_transition);
            row.push_back({d.ps, d.pr});
        }
    });
    return pop;
}

Population parse_delay_csv(const std::string &text, std::size_t pair_count) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw ConfigError("delay CSV: empty");
    if (split_csv(line) != std::vector<std::string>{"pair_id", "instance", "P_s", "P_r"})
        throw ConfigError("delay CSV: header must be pair_id,instance,P_s,P_r");
    std::map<std::uint64_t, std::map<std::size_t, DelayPoint>> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        const auto f = split_csv(line);
        try {
            if (f.size() != 4)
                throw std::invalid_argument("field count");
            const auto pair = static_cast<std::size_t>(std::stoull(f[0]));
            const auto inst = static_cast<std::uint64_t>(std::stoull(f[1]));
            const DelayPoint pt{std::stod(f[2]), std::stod(f[3])};
            if (pair >= pair_count)
                throw ConfigError("delay CSV line " + std::to_string(lineno) + ": unknown pair " + f[0]);
            if (!rows[inst].emplace(pair, pt).second)
                throw ConfigError("delay CSV line " + std::to_string(lineno) + ": duplicate measurement");
        } catch (const ConfigError &) {
            throw;
        } catch (const std::exception &) {
            throw ConfigError("delay CSV line " + std::to_string(lineno) + ": malformed record");
        }
    }
    Population pop;
    for (const auto &[inst, by_pair] : rows) {
        if (by_pair.size() != pair_count)
            throw ConfigError("delay CSV: instance " + std::to_string(inst) + " misses a pair measurement");
        std::vector<DelayPoint> row;
        for (const auto &[p, pt] : by_pair)
            row.push_back(pt);
        pop.points.push_back(std::move(row));
        pop.instance_ids.push_back(inst);
    }
    return pop;
}

std::vector<std::vector<double>> detection_metrics(const PrefabBundle &b, const Population &pop) {
    std::vector<std::vector<double>> out(pop.points.size());
    for (std::size_t i = 0; i < pop.points.size(); ++i) {
        if (pop.points[i].size() != b.lines.size())
            throw ConfigError("instance " + std::to_string(i) + " misses a pair measurement");
        for (std::size_t p = 0; p < b.lines.size(); ++p)
            out[i].push_back(detection_metric(b.lines[p], pop.points[i][p]));
    }
    return out;
}

// ---------------------------------------------------------------- postfab

namespace {

struct Scored {
    std::string label;
    const Population *pop = nullptr;
    std::vector<std::vector<double>> dms;
    std::vector<Verdict> verdicts;
};

std::uint64_t instance_id(const Population &pop, std::size_t i) {
    return pop.instance_ids.empty() ? i : pop.instance_ids[i];
}

std::string histogram_csv(const std::vector<const Scored *> &groups, std::size_t pair, double dt) {
    constexpr std::size_t kBinCount = 40;
    double hi = dt;
    for (const Scored *g : groups)
        for (const auto &row : g->dms)
            hi = std::max(hi, row[pair]);
    if (!(hi > 0.0))
        hi = 1.0;
    const double width = hi / kBinCount;
    std::vector<std::vector<std::size_t>> counts(groups.size(), std::vector<std::size_t>(kBinCount, 0));
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (const auto &row : groups[g]->dms)
            ++counts[g][std::min(kBinCount - 1, static_cast<std::size_t>(row[pair] / width))];
    std::ostringstream out;
    out << "bin_lo,bin_hi";
    for (const Scored *g : groups)
        out << ',' << g->label;
    out << '\n';
    for (std::size_t k = 0; k < kBinCount; ++k) {
        out << format_double(width * static_cast<double>(k)) << ',' << format_double(width * static_cast<double>(k + 1));
        for (std::size_t g = 0; g < groups.size(); ++g)
            out << ',' << counts[g][k];
        out << '\n';
    }
    return out.str();
}

} // namespace

DetectionReport run_postfab(const PrefabBundle &b, const PostfabInputs &inputs, const fs::path &out) {
    if (!inputs.clean && !inputs.trojan && !inputs.measured)
        throw ConfigError("postfab: no population to classify");
    fs::create_directories(out / "hist");
    std::vector<Scored> groups;
    auto score = [&](const char *label, const std::optional<Population> &pop) {
        if (!pop)
            return;
        Scored s;
        s.label = label;
        s.pop = &*pop;
        s.dms = detection_metrics(b, *pop);
        for (const auto &row : s.dms)
            s.verdicts.push_back(classify_ic(row, b.thresholds));
        groups.push_back(std::move(s));
    };
    score("clean", inputs.clean);
    score("trojan", inputs.trojan);
    score("measured", inputs.measured);

    std::vector<Verdict> none;
    const Scored *clean = nullptr;
    const Scored *trojan = nullptr;
    for (const auto &g : groups) {
        if (g.label == "clean")
            clean = &g;
        if (g.label == "trojan")
            trojan = &g;
    }
    std::vector<std::vector<std::size_t>> relevant;
    std::vector<TrojanSpec> trojans = b.trojans;
    if (trojan) {
        for (std::size_t i = 0; i < trojan->pop->points.size(); ++i) {
            std::vector<std::size_t> rel;
            if (i < trojan->pop->trojan_of.size() && trojan->pop->trojan_of[i] < trojans.size()) {
                const auto target = b.netlist.find_net(trojans[trojan->pop->trojan_of[i]].target_net);
                for (const auto &p : b.pairs)
                    if (target && p.suspect.contains(*target))
                        rel.push_back(p.id);
            }
            relevant.push_back(std::move(rel));
        }
        if (trojans.empty())
            relevant.clear();
    }
    DetectionReport report = evaluate(clean ? clean->verdicts : none, trojan ? trojan->verdicts : none,
                                      b.pairs.size(), relevant);

    std::ostringstream verdicts;
    std::ostringstream scatter;
    std::ostringstream dm;
    verdicts << "instance,verdict,violating_pairs\n";
    scatter << "population,instance,pair_id,P_s,P_r\n";
    dm << "population,instance,pair_id,dm,dt\n";
    std::size_t measured_flagged = 0;
    for (const auto &g : groups) {
        for (std::size_t i = 0; i < g.verdicts.size(); ++i) {
            const std::uint64_t id = instance_id(*g.pop, i);
            verdicts << g.label << '-' << id << ',' << (g.verdicts[i].trojan ? "trojan_inserted" : "trojan_free")
                     << ',';
            for (std::size_t k = 0; k < g.verdicts[i].violating.size(); ++k)
                verdicts << (k ? ";" : "") << g.verdicts[i].violating[k];
            verdicts << '\n';
            for (std::size_t p = 0; p < b.pairs.size(); ++p) {
                scatter << g.label << ',' << id << ',' << p << ',' << format_double(g.pop->points[i][p].ps) << ','
                        << format_double(g.pop->points[i][p].pr) << '\n';
                dm << g.label << ',' << id << ',' << p << ',' << format_double(g.dms[i][p]) << ','
                   << format_double(b.thresholds.dt[p]) << '\n';
            }
            if (g.label == "measured" && g.verdicts[i].trojan)
                ++measured_flagged;
        }
    }
    write_file((out / "verdicts.csv").string(), verdicts.str());
    write_file((out / "scatter.csv").string(), scatter.str());
    write_file((out / "dm.csv").string(), dm.str());
    std::vector<const Scored *> ptrs;
    for (const auto &g : groups)
        ptrs.push_back(&g);
    for (std::size_t p = 0; p < b.pairs.size(); ++p)
        write_file((out / "hist" / ("pair_" + std::to_string(p) + ".csv")).string(),
                   histogram_csv(ptrs, p, b.thresholds.dt[p]));

    json summary = report.to_json();
    summary["config_hash"] = b.config_hash;
    summary["circuit"] = b.circuit;
    summary["pairs"] = b.pairs.size();
    summary["fpr_budget"] = b.thresholds.fpr_budget;
    summary["config"] = b.stored_config;
    if (inputs.measured) {
        summary["measured_total"] = inputs.measured->points.size();
        summary["measured_flagged"] = measured_flagged;
    }
    if (trojan)
        summary["trojans"] = trojans_json(trojans);
    write_file((out / "summary.json").string(), summary.dump(2) + "\n");
    return report;
}

// ---------------------------------------------------------------- report

const std::vector<std::string> &summary_columns() {
    static const std::vector<std::string> cols = {
        "circuit",         "gates",        "nets",       "sensitizable_path_pct", "vulnerable_nets",
        "uncovered_nets",  "extra_gates",  "spp_count",  "type1_pairs",           "type2_pairs",
        "net_coverage_pct", "area_overhead_pct", "tpr_pct", "fpr_pct"};
    return cols;
}

std::string report_tables(const fs::path &root) {
    std::vector<fs::path> runs;
    if (fs::is_regular_file(root / kPrefabSummaryFile))
        runs.push_back(root);
    if (fs::is_directory(root))
        for (const auto &e : fs::directory_iterator(root))
            if (e.is_directory() && fs::is_regular_file(e.path() / kPrefabSummaryFile))
                runs.push_back(e.path());
    std::sort(runs.begin(), runs.end());

    std::ostringstream out;
    const auto &cols = summary_columns();
    for (std::size_t k = 0; k < cols.size(); ++k)
        out << (k ? "," : "") << cols[k];
    out << '\n';
    auto cell = [](const json &v) -> std::string {
        if (v.is_null())
            return "n/a";
        if (v.is_string())
            return v.get<std::string>();
        if (v.is_number_float())
            return format_double(v.get<double>());
        return v.dump();
    };
    for (const fs::path &run : runs) {
        json row = json::parse(read_file((run / kPrefabSummaryFile).string()));
        row["tpr_pct"] = nullptr;
        row["fpr_pct"] = nullptr;
        const fs::path post = run / "postfab" / "summary.json";
        if (fs::is_regular_file(post)) {
            const json s = json::parse(read_file(post.string()));
            if (s.contains("tpr") && s.at("tpr").is_number())
                row["tpr_pct"] = 100.0 * s.at("tpr").get<double>();
            if (s.contains("fpr") && s.at("fpr").is_number())
                row["fpr_pct"] = 100.0 * s.at("fpr").get<double>();
        }
        for (std::size_t k = 0; k < cols.size(); ++k)
            out << (k ? "," : "") << cell(row.value(cols[k], json(nullptr)));
        out << '\n';
    }
    return out.str();
}

} // namespace htscout
