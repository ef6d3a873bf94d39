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

// htscout: pre-fabrication analysis and post-fabrication Trojan screening.
//
// Exit codes: 0 ok, 1 usage, 2 validation, 3 stage failure.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "htscout/campaign.hpp"
#include "htscout/util.hpp"
#include "htscout/version.hpp"

namespace fs = std::filesystem;
using namespace htscout;

namespace {

constexpr int kUsage = 1;
constexpr int kValidation = 2;
constexpr int kStage = 3;

CampaignConfig load_config(const std::string &path, const std::string &out_override) {
    CampaignConfig c = CampaignConfig::load(path);
    if (!out_override.empty())
        c.output = fs::absolute(out_override).lexically_normal();
    return c;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Delay-based hardware Trojan screening with symmetric path pairs"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    unsigned jobs = 1;
    app.add_option("--jobs,-j", jobs, "worker thread cap")->check(CLI::PositiveNumber);

    std::string config_path;
    std::string out_dir;
    auto *prefab = app.add_subcommand("prefab", "analyze, select pairs and calibrate thresholds");
    prefab->add_option("--config", config_path, "campaign config JSON")->required();
    prefab->add_option("--out", out_dir, "artifact directory (overrides the config)");

    std::string trojan_path;
    std::string calib_dir;
    auto *inject = app.add_subcommand("inject", "validate and record the Trojan population specs");
    inject->add_option("--config", config_path, "campaign config JSON")->required();
    inject->add_option("--trojan", trojan_path, "Trojan spec JSON (object or array)");
    inject->add_option("--calib", calib_dir, "prefab directory (defaults to the config output)");

    std::string delays_path;
    bool simulate = false;
    std::optional<std::size_t> clean_count;
    std::optional<std::size_t> trojan_count;
    auto *postfab = app.add_subcommand("postfab", "compute DMs and classify IC instances");
    postfab->add_option("--calib", calib_dir, "prefab directory")->required();
    postfab->add_option("--config", config_path, "config to check against the calibration hash");
    auto *delays_opt = postfab->add_option("--delays", delays_path, "measured delays CSV pair_id,instance,P_s,P_r");
    auto *sim_opt = postfab->add_flag("--simulate", simulate, "generate clean and Trojan populations");
    delays_opt->excludes(sim_opt);
    postfab->add_option("--clean", clean_count, "clean instances to simulate (default from config)");
    postfab->add_option("--trojan-count", trojan_count, "Trojan instances to simulate (default from config)");
    postfab->add_option("--out", out_dir, "output directory (default <calib>/postfab)");

    std::string report_root;
    std::string report_out;
    auto *report = app.add_subcommand("report", "summarize runs into a per-circuit table");
    report->add_option("dir", report_root, "run directory or a directory of runs")->required();
    report->add_option("--out", report_out, "summary CSV path (default <dir>/summary.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        if (*prefab) {
            const CampaignConfig c = load_config(config_path, out_dir);
            const PrefabSummary s = run_prefab(c, jobs);
            std::cout << "prefab: " << s.selection.pairs.size() << " pairs, artifacts in " << c.output.string()
                      << "\n";
        } else if (*inject) {
            const CampaignConfig c = load_config(config_path, "");
            const fs::path dir = calib_dir.empty() ? c.output : fs::path(calib_dir);
            const PrefabBundle b = load_prefab(dir, c);
            std::optional<std::vector<TrojanSpec>> specs;
            if (!trojan_path.empty()) {
                nlohmann::json j;
                try {
                    j = nlohmann::json::parse(read_file(trojan_path));
                } catch (const nlohmann::json::parse_error &e) {
                    throw ConfigError(trojan_path + ": " + e.what());
                }
                specs.emplace();
                const nlohmann::json &arr = j.is_object() && j.contains("trojans") ? j.at("trojans") : j;
                if (arr.is_array())
                    for (const auto &t : arr)
                        specs->push_back(TrojanSpec::from_json(t));
                else
                    specs->push_back(TrojanSpec::from_json(arr));
            }
            const auto out = run_inject(b, specs);
            std::cout << "inject: " << out.size() << " Trojan spec(s) written to " << (dir / "trojans.json").string()
                      << "\n";
        } else if (*postfab) {
            if (!simulate && delays_path.empty())
                throw CLI::RequiredError("--delays or --simulate");
            std::optional<CampaignConfig> c;
            if (!config_path.empty())
                c = CampaignConfig::load(config_path);
            const PrefabBundle b = load_prefab(calib_dir, c);
            PostfabInputs in;
            if (simulate) {
                in.clean = simulate_clean(b, clean_count.value_or(b.config.instances.clean), jobs);
                if (!b.trojans.empty())
                    in.trojan = simulate_trojan(b, b.trojans, trojan_count.value_or(b.config.instances.trojan), jobs);
                else
                    std::cerr << "postfab: no trojans.json in " << calib_dir
                              << "; simulating the clean population only\n";
            } else {
                in.measured = parse_delay_csv(read_file(delays_path), b.pairs.size());
            }
            const fs::path out = out_dir.empty() ? fs::path(calib_dir) / "postfab" : fs::path(out_dir);
            const DetectionReport r = run_postfab(b, in, out);
            const auto pct = [](const std::optional<double> &v) {
                return v ? format_double(100.0 * *v) + "%" : std::string("n/a");
            };
            std::cout << "postfab: TPR " << pct(r.tpr) << ", FPR " << pct(r.fpr) << ", results in " << out.string()
                      << "\n";
        } else if (*report) {
            const std::string csv = report_tables(report_root);
            const fs::path out = report_out.empty() ? fs::path(report_root) / "summary.csv" : fs::path(report_out);
            write_file(out.string(), csv);
            std::cout << csv;
        }
    } catch (const CLI::Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ConfigError &e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kValidation;
    } catch (const NetlistError &e) {
        std::cerr << "netlist error: " << e.what() << "\n";
        return kValidation;
    } catch (const StageError &e) {
        std::cerr << "stage '" << e.stage() << "' failed: " << e.what() << "\n";
        return kStage;
    } catch (const std::exception &e) {
        std::cerr << "failed: " << e.what() << "\n";
        return kStage;
    }
    return 0;
}
