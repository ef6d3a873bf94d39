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

#ifndef HTSCOUT_CAMPAIGN_HPP
#define HTSCOUT_CAMPAIGN_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "htscout/delay.hpp"
#include "htscout/detector.hpp"
#include "htscout/error.hpp"
#include "htscout/netlist.hpp"
#include "htscout/placement.hpp"
#include "htscout/sensitize.hpp"
#include "htscout/symmetry.hpp"
#include "htscout/variation.hpp"

namespace htscout {

/// A failure inside a named pipeline stage.
class StageError : public Error {
public:
    StageError(std::string stage, const std::string &message)
        : Error(stage + ": " + message), stage_(std::move(stage)) {}
    [[nodiscard]] const std::string &stage() const { return stage_; }

private:
    std::string stage_;
};

struct InstanceCounts {
    std::size_t calibration = 500; ///< clean ICs used only to set thresholds
    std::size_t clean = 500;       ///< held-out clean ICs scored by postfab
    std::size_t trojan = 500;
};

/// Versioned campaign configuration (schema_version 1). Relative paths are
/// resolved against the directory of the config file.
struct CampaignConfig {
    static constexpr int kSchemaVersion = 1;

    std::filesystem::path netlist;
    std::uint64_t seed = 1;
    std::uint64_t activity_vectors = 1000000;
    double activity_threshold = 1e-3;
    PathLimits limits;
    std::size_t global_path_cap = 1000000;
    SensitizeOptions sensitize;
    Die die;
    GridDims grid;
    PlacementStrategy strategy = PlacementStrategy::TopoRows;
    std::optional<std::filesystem::path> placement_file; ///< CSV `gate,x,y[,row,col]`
    VariationParams variation;
    std::optional<std::filesystem::path> tech_file;
    InstanceCounts instances;
    /// Explicit Trojans; empty means one XOR payload per covered net.
    std::vector<TrojanSpec> trojans;
    double fpr_budget = 0.03;
    Transition type1_transition = Transition::Rise;
    double timing_budget = 0.7;
    bool create_references = true;
    std::uint64_t equivalence_vectors = 100000;
    std::filesystem::path output;

    /// Throws ConfigError naming the offending field.
    static CampaignConfig from_json(const nlohmann::json &j, const std::filesystem::path &base_dir);
    static CampaignConfig load(const std::filesystem::path &file);
    /// Canonical form with absolute paths; hash() is taken over its dump.
    [[nodiscard]] nlohmann::json to_json() const;
    [[nodiscard]] std::string hash() const;
    void check() const;
};

/// Everything postfab needs, reconstructed from a prefab directory.
struct PrefabBundle {
    CampaignConfig config;   ///< file fields point at the prefab artifacts
    nlohmann::json stored_config; ///< config.json as prefab wrote it
    std::string circuit;
    std::string config_hash;
    TechTable tech;
    Netlist netlist;              ///< final netlist (reference gates included)
    Placement placement;
    std::vector<SymmetricPathPair> pairs;
    std::vector<ExpectedLine> lines; ///< by pair id
    ThresholdSet thresholds;
    std::vector<std::string> vulnerable; ///< ascending activity
    std::vector<TrojanSpec> trojans;     ///< from inject; empty before it ran
};

struct PrefabSummary {
    SelectionResult selection;
    std::vector<ExpectedLine> lines;
    ThresholdSet thresholds;
    double bypass_probability = 0.0; ///< 0 when no pair exists
};

/// Runs every pre-fabrication stage and writes its artifacts to
/// config.output. Artifacts of completed stages stay on disk when a later
/// stage fails.
PrefabSummary run_prefab(const CampaignConfig &config, unsigned jobs = 1);

/// Throws ConfigError when the directory is incomplete, or when `config` is
/// given and its hash differs from the one the artifacts were made with.
PrefabBundle load_prefab(const std::filesystem::path &dir,
                         const std::optional<CampaignConfig> &config = std::nullopt);

/// Validates the Trojan specs against the final netlist (or derives the
/// default ones) and writes trojans.json into the prefab directory.
std::vector<TrojanSpec> run_inject(const PrefabBundle &bundle,
                                   const std::optional<std::vector<TrojanSpec>> &specs);
std::vector<TrojanSpec> default_trojans(const PrefabBundle &bundle);

/// Delay measurements: points[instance][pair].
struct Population {
    std::vector<std::vector<DelayPoint>> points;
    /// Trojan populations only: index into the bundle's Trojan list.
    std::vector<std::size_t> trojan_of;
    /// Instance labels when ingested; empty means 0..n-1.
    std::vector<std::uint64_t> instance_ids;
};

Population simulate_clean(const PrefabBundle &bundle, std::size_t count, unsigned jobs = 1);
/// Instance i carries trojans[i % trojans.size()].
Population simulate_trojan(const PrefabBundle &bundle, const std::vector<TrojanSpec> &trojans,
                           std::size_t count, unsigned jobs = 1);
/// CSV `pair_id,instance,P_s,P_r`; every instance must list every pair.
Population parse_delay_csv(const std::string &text, std::size_t pair_count);

/// DM of each instance for each pair.
std::vector<std::vector<double>> detection_metrics(const PrefabBundle &bundle,
                                                   const Population &population);

struct PostfabInputs {
    std::optional<Population> clean;
    std::optional<Population> trojan;
    std::optional<Population> measured; ///< ingested, ground truth unknown
};

/// Classifies every population and writes verdicts, per-pair DM
/// histograms, scatter and DM data and summary.json into `out`.
DetectionReport run_postfab(const PrefabBundle &bundle, const PostfabInputs &inputs,
                            const std::filesystem::path &out);

/// Column names of the per-circuit summary table.
const std::vector<std::string> &summary_columns();
/// One CSV row per run directory below `root` (or `root` itself) holding
/// prefab artifacts; header only when none exist.
std::string report_tables(const std::filesystem::path &root);

} // namespace htscout

#endif // HTSCOUT_CAMPAIGN_HPP
