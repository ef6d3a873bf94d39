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

#include "htscout/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "htscout/error.hpp"
#include "htscout/util.hpp"

namespace htscout {

ExpectedLine fit_expected_line(DelayPoint nominal, DelayPoint sample) {
    const double dx = sample.ps - nominal.ps;
    if (dx == 0.0 || !std::isfinite(dx))
        throw NumericError("expected line: sample and nominal share P_s = " +
                           format_double(nominal.ps) +
                           "; recalibrate with a larger inter-die offset");
    ExpectedLine line{nominal, sample, 0.0, 0.0};
    line.alpha = (sample.pr - nominal.pr) / dx;
    line.beta = nominal.pr - line.alpha * nominal.ps;
    return line;
}

double distance_to_line(const ExpectedLine &line, DelayPoint p) {
    return std::abs(line.alpha * p.ps - p.pr + line.beta) / std::sqrt(1.0 + line.alpha * line.alpha);
}

double detection_metric(double d, DelayPoint nominal) {
    const double norm = std::hypot(nominal.ps, nominal.pr);
    if (!(norm > 0.0))
        throw NumericError("detection metric: zero nominal delay vector");
    return d / norm;
}

double detection_metric(const ExpectedLine &line, DelayPoint point) {
    return detection_metric(distance_to_line(line, point), line.nominal);
}

double threshold_from(std::vector<double> clean, double fpr_budget) {
    if (clean.empty())
        throw ConfigError("calibration: no clean samples");
    if (!(fpr_budget >= 0.0 && fpr_budget < 1.0))
        throw ConfigError("calibration: fpr budget must lie in [0, 1)");
    std::sort(clean.begin(), clean.end());
    const auto n = static_cast<double>(clean.size());
    // Guard against (1 - b) * n landing a hair above an integer.
    auto rank = static_cast<std::size_t>(std::ceil((1.0 - fpr_budget) * n - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, clean.size());
    return std::nextafter(clean[rank - 1], std::numeric_limits<double>::infinity());
}

ThresholdSet calibrate(const std::vector<std::vector<double>> &clean_dms, double fpr_budget,
                       std::size_t min_samples) {
    ThresholdSet set;
    set.fpr_budget = fpr_budget;
    for (std::size_t i = 0; i < clean_dms.size(); ++i) {
        if (clean_dms[i].size() < min_samples)
            throw ConfigError("calibration: pair " + std::to_string(i) + " has " +
                              std::to_string(clean_dms[i].size()) + " clean samples, need " +
                              std::to_string(min_samples));
        set.dt.push_back(threshold_from(clean_dms[i], fpr_budget));
    }
    return set;
}

Verdict classify_ic(std::span<const double> dms, const ThresholdSet &thresholds) {
    if (dms.size() != thresholds.dt.size())
        throw ConfigError("classify: " + std::to_string(dms.size()) + " measurements for " +
                          std::to_string(thresholds.dt.size()) + " thresholds");
    Verdict v;
    for (std::size_t i = 0; i < dms.size(); ++i)
        if (!(dms[i] < thresholds.dt[i]))
            v.violating.push_back(i);
    v.trojan = !v.violating.empty();
    return v;
}

DetectionReport evaluate(const std::vector<Verdict> &clean, const std::vector<Verdict> &trojan,
                         std::size_t pair_count,
                         const std::vector<std::vector<std::size_t>> &relevant) {
    DetectionReport r;
    r.clean_total = clean.size();
    r.trojan_total = trojan.size();
    std::vector<std::size_t> clean_hits(pair_count, 0);
    for (const Verdict &v : clean) {
        r.clean_flagged += v.trojan ? 1 : 0;
        for (std::size_t p : v.violating)
            ++clean_hits.at(p);
    }
    for (const Verdict &v : trojan)
        r.trojan_flagged += v.trojan ? 1 : 0;
    if (r.clean_total > 0) {
        r.fpr = static_cast<double>(r.clean_flagged) / static_cast<double>(r.clean_total);
        r.pair_fpr.resize(pair_count);
        for (std::size_t p = 0; p < pair_count; ++p)
            r.pair_fpr[p] = static_cast<double>(clean_hits[p]) / static_cast<double>(r.clean_total);
        if (pair_count > 0)
            r.worst_pair_fpr = *std::max_element(r.pair_fpr.begin(), r.pair_fpr.end());
    }
    if (r.trojan_total > 0)
        r.tpr = static_cast<double>(r.trojan_flagged) / static_cast<double>(r.trojan_total);

    r.pair_tpr.assign(pair_count, std::nullopt);
    if (!relevant.empty()) {
        if (relevant.size() != trojan.size())
            throw ConfigError("evaluate: relevance list does not match the Trojan population");
        std::vector<std::size_t> seen(pair_count, 0);
        std::vector<std::size_t> hit(pair_count, 0);
        for (std::size_t i = 0; i < trojan.size(); ++i) {
            for (std::size_t p : relevant[i]) {
                ++seen.at(p);
                if (std::binary_search(trojan[i].violating.begin(), trojan[i].violating.end(), p))
                    ++hit[p];
            }
        }
        for (std::size_t p = 0; p < pair_count; ++p) {
            if (seen[p] == 0)
                continue;
            r.pair_tpr[p] = static_cast<double>(hit[p]) / static_cast<double>(seen[p]);
            if (!r.worst_pair_tpr || *r.pair_tpr[p] < *r.worst_pair_tpr)
                r.worst_pair_tpr = r.pair_tpr[p];
        }
    }
    return r;
}

nlohmann::json DetectionReport::to_json() const {
    auto opt = [](const std::optional<double> &v) {
        return v ? nlohmann::json(*v) : nlohmann::json("n/a");
    };
    nlohmann::json ptpr = nlohmann::json::array();
    for (const auto &v : pair_tpr)
        ptpr.push_back(opt(v));
    return {{"clean_total", clean_total},
            {"clean_flagged", clean_flagged},
            {"trojan_total", trojan_total},
            {"trojan_flagged", trojan_flagged},
            {"tpr", opt(tpr)},
            {"fpr", opt(fpr)},
            {"worst_pair_fpr", opt(worst_pair_fpr)},
            {"worst_pair_tpr", opt(worst_pair_tpr)},
            {"pair_fpr", pair_fpr},
            {"pair_tpr", ptpr}};
}

double attacker_bypass_probability(std::size_t net_count, const std::vector<std::size_t> &k) {
    if (net_count < 1)
        throw ConfigError("bypass probability: need at least one net");
    if (k.empty())
        throw ConfigError("bypass probability: empty symmetric-count list");
    double sum = 0.0;
    for (std::size_t ki : k) {
        if (ki < 1)
            throw ConfigError("bypass probability: every k_i must be >= 1");
        sum += static_cast<double>(ki);
    }
    return 1.0 / (static_cast<double>(net_count) * sum);
}

} // namespace htscout
