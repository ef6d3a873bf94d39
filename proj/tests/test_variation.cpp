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

#include "htscout/error.hpp"
#include "htscout/util.hpp"
#include "htscout/variation.hpp"

using namespace htscout;

namespace {

VariationParams params(std::uint32_t rows, std::uint32_t cols) {
    VariationParams p;
    p.grid = {rows, cols};
    return p;
}

} // namespace

TEST_CASE("three-sigma percentages convert to sigmas") {
    const auto p = VariationParams::from_three_sigma_percent(0.3, 20.0, 15.0, {4, 4});
    CHECK(p.sigma_inter == doctest::Approx(0.02));
    CHECK(p.sigma_intra == doctest::Approx(0.015));
    CHECK(p.max_vth() == doctest::Approx(0.3 + 0.06 + 0.045));
    CHECK(p.sigma_spatial() * p.sigma_spatial() + p.sigma_random() * p.sigma_random() ==
          doctest::Approx(p.sigma_intra * p.sigma_intra));
}

TEST_CASE("correlation falls from near to far") {
    const VariationParams p = params(4, 4);
    const double diameter = std::sqrt(18.0);
    CHECK(spatial_correlation(p, 0.0) == 1.0);
    CHECK(spatial_correlation(p, 1.0) == doctest::Approx(0.8));
    CHECK(spatial_correlation(p, diameter) == doctest::Approx(0.3));
    double prev = 1.0;
    for (double d = 1.0; d <= diameter; d += 0.25) {
        const double r = spatial_correlation(p, d);
        CHECK(r <= prev);
        prev = r;
    }
    const CovarianceModel m(p);
    CHECK(m.correlation(0, 1) == doctest::Approx(0.8));
    CHECK(m.correlation(0, 15) == doctest::Approx(0.3));
    CHECK(m.correlation(5, 5) == doctest::Approx(1.0));
}

TEST_CASE("factor reproduces the covariance up to the repair") {
    const VariationParams p = params(4, 4);
    const CovarianceModel m(p);
    const Eigen::MatrixXd ff = m.factor() * m.factor().transpose();
    const double var = p.sigma_spatial() * p.sigma_spatial();
    for (Eigen::Index i = 0; i < ff.rows(); ++i)
        CHECK(ff(i, i) == doctest::Approx(var));
    CHECK((ff - m.matrix()).cwiseAbs().maxCoeff() <= var * (m.clipped() * 4.0 + 1e-9));
}

TEST_CASE("single cell grid") {
    const VariationParams p = params(1, 1);
    const CovarianceModel m(p);
    CHECK(m.matrix().rows() == 1);
    const VthProfile v = sample_instance(m, p, 3, VariationMode::Full);
    CHECK(v.dv_spatial.size() == 1);
    CHECK(std::isfinite(v.vth(0)));
}

TEST_CASE("modes share the components they keep") {
    const VariationParams p = params(4, 4);
    const CovarianceModel m(p);
    for (std::uint64_t seed = 1; seed < 20; ++seed) {
        const auto full = sample_instance(m, p, seed, VariationMode::Full);
        const auto inter = sample_instance(m, p, seed, VariationMode::InterOnly);
        const auto intra = sample_instance(m, p, seed, VariationMode::IntraOnly);
        const auto none = sample_instance(m, p, seed, VariationMode::None);
        CHECK(inter.dv_inter == full.dv_inter);
        CHECK(intra.dv_inter == 0.0);
        CHECK(none.dv_inter == 0.0);
        CHECK(intra.dv_spatial == full.dv_spatial);
        CHECK(intra.dv_random == full.dv_random);
        for (std::size_t c = 0; c < 16; ++c) {
            CHECK(inter.vth(c) == doctest::Approx(p.vth_nominal + full.dv_inter));
            CHECK(none.vth(c) == p.vth_nominal);
        }
    }
    for (VariationMode mode : {VariationMode::Full, VariationMode::InterOnly, VariationMode::IntraOnly,
                               VariationMode::None})
        CHECK(parse_mode(to_string(mode)) == mode);
}

TEST_CASE("samples are deterministic per seed") {
    const VariationParams p = params(3, 5);
    const CovarianceModel m(p);
    const auto a = sample_instance(m, p, counter_seed(9, 4), VariationMode::Full);
    const auto b = sample_instance(m, p, counter_seed(9, 4), VariationMode::Full);
    CHECK(a.to_csv() == b.to_csv());
    const auto c = sample_instance(m, p, counter_seed(9, 5), VariationMode::Full);
    CHECK(a.to_csv() != c.to_csv());
}

TEST_CASE("invalid parameters are rejected") {
    VariationParams p = params(4, 4);
    p.corr_far = 0.9;
    CHECK_THROWS_AS(p.check(), ConfigError);
    p = params(4, 4);
    p.spatial_fraction = 1.5;
    CHECK_THROWS_AS(p.check(), ConfigError);
    p = params(0, 4);
    CHECK_THROWS_AS(CovarianceModel{p}, ConfigError);
    CHECK_THROWS_AS((void)parse_mode("partial"), ConfigError);
}

TEST_CASE("json round trip") {
    VariationParams p = params(2, 3);
    p.sigma_inter = 0.01;
    const auto q = VariationParams::from_json(p.to_json());
    CHECK(q.to_json() == p.to_json());
    const auto r = VariationParams::from_json({{"inter_3sigma_pct", 30.0}});
    CHECK(r.sigma_inter == doctest::Approx(0.03));
}

TEST_CASE("uniform profile applies one offset everywhere") {
    const VariationParams p = params(2, 2);
    const VthProfile u = uniform_profile(p, 0.04);
    for (std::size_t c = 0; c < 4; ++c)
        CHECK(u.vth(c) == doctest::Approx(0.34));
}
