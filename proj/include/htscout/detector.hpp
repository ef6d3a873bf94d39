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

#ifndef HTSCOUT_DETECTOR_HPP
#define HTSCOUT_DETECTOR_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

namespace htscout {

/// A (suspect delay, reference delay) measurement.
struct DelayPoint {
    double ps = 0.0;
    double pr = 0.0;
};

/// Line alpha * ps - pr + beta = 0 through the nominal and the sample point.
struct ExpectedLine {
    DelayPoint nominal;
    DelayPoint sample;
    double alpha = 0.0;
    double beta = 0.0;
};

/// Throws NumericError when both points share ps (vertical line).
ExpectedLine fit_expected_line(DelayPoint nominal, DelayPoint sample);

/// |alpha * ps - pr + beta| / sqrt(1 + alpha^2).
double distance_to_line(const ExpectedLine &line, DelayPoint point);

/// d / |nominal|. Throws NumericError for a zero nominal vector.
double detection_metric(double d, DelayPoint nominal);
double detection_metric(const ExpectedLine &line, DelayPoint point);

struct ThresholdSet {
    std::vector<double> dt; ///< by pair id
    double fpr_budget = 0.03;
};

/// Smallest value that at most floor(budget * n) of `clean` reach: one ulp
/// above the ceil((1 - budget) * n)-th smallest value. The ulp makes the
/// strict "DM < DT is clean" rule keep the calibration FPR within budget
/// even when clean values repeat.
double threshold_from(std::vector<double> clean, double fpr_budget);

/// Throws ConfigError if any pair has fewer than `min_samples` values.
ThresholdSet calibrate(const std::vector<std::vector<double>> &clean_dms, double fpr_budget,
                       std::size_t min_samples = 100);

struct Verdict {
    bool trojan = false;
    std::vector<std::size_t> violating; ///< pairs with DM >= DT, ascending
};

/// Trojan-free iff DM_i < DT_i for every pair.
Verdict classify_ic(std::span<const double> dms, const ThresholdSet &thresholds);

struct DetectionReport {
    std::size_t clean_total = 0;
    std::size_t clean_flagged = 0;
    std::size_t trojan_total = 0;
    std::size_t trojan_flagged = 0;
    std::optional<double> tpr; ///< absent without a Trojan population
    std::optional<double> fpr; ///< absent without a clean population
    /// Per pair: share of clean ICs it flags, and share of the Trojan ICs
    /// whose payload sits on its suspect path that it flags.
    std::vector<double> pair_fpr;
    std::vector<std::optional<double>> pair_tpr;
    std::optional<double> worst_pair_fpr;
    std::optional<double> worst_pair_tpr;

    [[nodiscard]] nlohmann::json to_json() const;
};

/// `relevant[i]` lists the pairs whose suspect path carries Trojan IC i's
/// payload; leave empty to skip per-pair TPR.
DetectionReport evaluate(const std::vector<Verdict> &clean, const std::vector<Verdict> &trojan,
                         std::size_t pair_count,
                         const std::vector<std::vector<std::size_t>> &relevant = {});

/// 1 / (N * sum k_i).
double attacker_bypass_probability(std::size_t net_count, const std::vector<std::size_t> &k);

} // namespace htscout

#endif // HTSCOUT_DETECTOR_HPP
