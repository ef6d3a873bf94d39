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

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "htscout/detector.hpp"
#include "htscout/error.hpp"

using namespace htscout;

namespace {

double up(double v) { return std::nextafter(v, std::numeric_limits<double>::infinity()); }

} // namespace

TEST_CASE("expected line through two points") {
    const ExpectedLine a = fit_expected_line({10, 12}, {20, 24});
    CHECK(a.alpha == doctest::Approx(1.2));
    CHECK(a.beta == doctest::Approx(0.0));
    const ExpectedLine b = fit_expected_line({1, 1}, {2, 2});
    CHECK(b.alpha == doctest::Approx(1.0));
    CHECK(b.beta == doctest::Approx(0.0));
    const ExpectedLine c = fit_expected_line({10, 12}, {10 + 1e-6, 12});
    CHECK(c.alpha == 0.0);
    CHECK(c.beta == doctest::Approx(12.0));
    CHECK_THROWS_AS((void)fit_expected_line({10, 12}, {10, 15}), NumericError);
}

TEST_CASE("both defining points lie on the line") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(1.0, 500.0);
    for (int k = 0; k < 200; ++k) {
        const DelayPoint n{u(rng), u(rng)};
        const DelayPoint s{n.ps * 1.1 + 0.5, u(rng)};
        const ExpectedLine l = fit_expected_line(n, s);
        CHECK(distance_to_line(l, n) <= 1e-9 * std::hypot(n.ps, n.pr));
        CHECK(distance_to_line(l, s) <= 1e-9 * std::hypot(s.ps, s.pr));
    }
}

TEST_CASE("distance and detection metric") {
    const ExpectedLine l = fit_expected_line({1, 1}, {2, 2});
    CHECK(distance_to_line(l, {3, 5}) == doctest::Approx(std::sqrt(2.0)));
    CHECK(distance_to_line(l, {7, 7}) == doctest::Approx(0.0));
    const ExpectedLine swapped = fit_expected_line({2, 2}, {1, 1});
    CHECK(distance_to_line(swapped, {3, 5}) == doctest::Approx(distance_to_line(l, {3, 5})));

    CHECK(detection_metric(0.0, {3, 4}) == 0.0);
    CHECK(detection_metric(std::sqrt(2.0), {3, 4}) == doctest::Approx(std::sqrt(2.0) / 5.0));
    CHECK(detection_metric(7.0 * std::sqrt(2.0), {21, 28}) == doctest::Approx(std::sqrt(2.0) / 5.0));
    CHECK_THROWS_AS((void)detection_metric(1.0, {0, 0}), NumericError);
}

TEST_CASE("detection metric ignores the time unit") {
    const ExpectedLine ps = fit_expected_line({100, 130}, {120, 150});
    const ExpectedLine ns = fit_expected_line({0.1, 0.13}, {0.12, 0.15});
    CHECK(detection_metric(ps, {110, 145}) == doctest::Approx(detection_metric(ns, {0.11, 0.145})));
}

TEST_CASE("a payload on the suspect moves the point away monotonically") {
    const ExpectedLine l = fit_expected_line({100, 130}, {120, 156});
    double prev = 0.0;
    for (double delta = 1.0; delta <= 20.0; delta += 1.0) {
        const DelayPoint p{110.0 + delta, 143.0};
        const double d = distance_to_line(l, p);
        CHECK(d == doctest::Approx(std::abs(l.alpha * delta) / std::sqrt(1 + l.alpha * l.alpha)));
        CHECK(detection_metric(l, p) > prev);
        prev = detection_metric(l, p);
    }
}

TEST_CASE("threshold is one ulp above the nearest-rank quantile") {
    std::vector<double> v(100);
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = static_cast<double>(100 - i); // 100..1, unsorted
    CHECK(threshold_from(v, 0.03) == up(97.0));
    CHECK(threshold_from(v, 0.0) == up(100.0));
    CHECK(threshold_from(std::vector<double>(100, 2.5), 0.03) == up(2.5));
    CHECK_THROWS_AS((void)threshold_from({}, 0.03), ConfigError);
    CHECK_THROWS_AS((void)threshold_from(v, 1.0), ConfigError);
}

TEST_CASE("calibration FPR stays within budget on its own data") {
    std::mt19937_64 rng(5);
    std::lognormal_distribution<double> dist(0.0, 1.0);
    for (double budget : {0.0, 0.01, 0.03, 0.1}) {
        std::vector<std::vector<double>> dms(4);
        for (auto &d : dms)
            for (int k = 0; k < 333; ++k)
                d.push_back(std::round(dist(rng) * 10.0) / 10.0); // repeats on purpose
        const ThresholdSet t = calibrate(dms, budget);
        for (std::size_t p = 0; p < dms.size(); ++p) {
            std::size_t flagged = 0;
            for (double d : dms[p])
                flagged += !(d < t.dt[p]);
            CHECK(static_cast<double>(flagged) <= budget * static_cast<double>(dms[p].size()) + 1e-9);
            CHECK(t.dt[p] > 0.0);
        }
    }
    CHECK_THROWS_AS((void)calibrate({std::vector<double>(99, 1.0)}, 0.03), ConfigError);
}

TEST_CASE("classification uses the strict inequality") {
    ThresholdSet t;
    t.dt = {1.0, 2.0, 3.0};
    CHECK_FALSE(classify_ic(std::vector<double>{0, 0, 0}, t).trojan);
    const Verdict edge = classify_ic(std::vector<double>{0.5, 2.0, 0.1}, t);
    CHECK(edge.trojan);
    CHECK(edge.violating == std::vector<std::size_t>{1});
    CHECK_THROWS_AS((void)classify_ic(std::vector<double>{0, 0}, t), ConfigError);

    ThresholdSet many;
    many.dt.assign(50, 1.0);
    std::vector<double> dms(50, 0.5);
    dms[37] = 1.5;
    const Verdict v = classify_ic(dms, many);
    CHECK(v.trojan);
    CHECK(v.violating == std::vector<std::size_t>{37});
}

TEST_CASE("raising a DM never clears a flagged IC") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    ThresholdSet t;
    t.dt.assign(8, 1.0);
    for (int k = 0; k < 500; ++k) {
        std::vector<double> dms(8);
        for (double &d : dms)
            d = u(rng);
        const bool before = classify_ic(dms, t).trojan;
        dms[rng() % 8] += u(rng);
        if (before)
            CHECK(classify_ic(dms, t).trojan);
    }
}

TEST_CASE("rates reconcile with the populations") {
    const std::vector<Verdict> clean{{false, {}}, {true, {1}}, {false, {}}, {false, {}}};
    const std::vector<Verdict> trojan{{true, {0}}, {true, {0, 1}}, {false, {}}};
    const DetectionReport r = evaluate(clean, trojan, 2, {{0}, {1}, {0}});
    CHECK(*r.fpr == doctest::Approx(0.25));
    CHECK(*r.tpr == doctest::Approx(2.0 / 3.0));
    CHECK(r.pair_fpr == std::vector<double>{0.0, 0.25});
    CHECK(*r.worst_pair_fpr == doctest::Approx(0.25));
    CHECK(*r.pair_tpr[0] == doctest::Approx(0.5));
    CHECK(*r.pair_tpr[1] == doctest::Approx(1.0));
    CHECK(*r.worst_pair_tpr == doctest::Approx(0.5));
    CHECK(r.clean_flagged + 3 == r.clean_total);

    const DetectionReport perfect = evaluate({{false, {}}}, {{true, {0}}}, 1);
    CHECK(*perfect.tpr == 1.0);
    CHECK(*perfect.fpr == 0.0);
    const DetectionReport no_trojans = evaluate({{false, {}}}, {}, 1);
    CHECK_FALSE(no_trojans.tpr.has_value());
    CHECK(no_trojans.to_json().at("tpr") == "n/a");
}

TEST_CASE("attacker bypass probability") {
    CHECK(attacker_bypass_probability(1, {2, 3}) == doctest::Approx(0.2));
    CHECK(attacker_bypass_probability(2, {2, 3}) == doctest::Approx(0.1));
    CHECK(attacker_bypass_probability(2, {4, 6}) == doctest::Approx(0.05));
    CHECK_THROWS_AS((void)attacker_bypass_probability(1, {}), ConfigError);
    CHECK_THROWS_AS((void)attacker_bypass_probability(0, {1}), ConfigError);
    CHECK_THROWS_AS((void)attacker_bypass_probability(1, {0}), ConfigError);
}
