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

#include "htscout/variation.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "htscout/error.hpp"
#include "htscout/util.hpp"

namespace htscout {

VariationParams VariationParams::from_three_sigma_percent(double vth_nominal, double inter_pct,
                                                          double intra_pct, GridDims grid) {
    VariationParams p;
    p.vth_nominal = vth_nominal;
    p.sigma_inter = inter_pct / 100.0 * vth_nominal / 3.0;
    p.sigma_intra = intra_pct / 100.0 * vth_nominal / 3.0;
    p.grid = grid;
    return p;
}

double VariationParams::sigma_spatial() const {
    return sigma_intra * std::sqrt(spatial_fraction);
}

double VariationParams::sigma_random() const {
    return sigma_intra * std::sqrt(1.0 - spatial_fraction);
}

void VariationParams::check() const {
    if (!(vth_nominal > 0.0))
        throw ConfigError("variation: vth_nominal must be positive");
    if (!(sigma_inter >= 0.0) || !(sigma_intra >= 0.0))
        throw ConfigError("variation: sigmas must be >= 0");
    if (!(spatial_fraction >= 0.0 && spatial_fraction <= 1.0))
        throw ConfigError("variation: spatial_fraction must lie in [0, 1]");
    if (!(corr_far > 0.0 && corr_far <= corr_near && corr_near < 1.0))
        throw ConfigError("variation: need 0 < corr_far <= corr_near < 1");
    if (grid.rows < 1 || grid.cols < 1)
        throw ConfigError("variation: grid needs at least one cell");
}

nlohmann::json VariationParams::to_json() const {
    return {{"vth_nominal", vth_nominal}, {"sigma_inter", sigma_inter},
            {"sigma_intra", sigma_intra}, {"spatial_fraction", spatial_fraction},
            {"corr_near", corr_near},     {"corr_far", corr_far},
            {"grid", {grid.rows, grid.cols}}};
}

VariationParams VariationParams::from_json(const nlohmann::json &j) {
    VariationParams p;
    try {
        p.vth_nominal = j.value("vth_nominal", p.vth_nominal);
        if (j.contains("inter_3sigma_pct"))
            p.sigma_inter = j.at("inter_3sigma_pct").get<double>() / 100.0 * p.vth_nominal / 3.0;
        if (j.contains("intra_3sigma_pct"))
            p.sigma_intra = j.at("intra_3sigma_pct").get<double>() / 100.0 * p.vth_nominal / 3.0;
        p.sigma_inter = j.value("sigma_inter", p.sigma_inter);
        p.sigma_intra = j.value("sigma_intra", p.sigma_intra);
        p.spatial_fraction = j.value("spatial_fraction", p.spatial_fraction);
        p.corr_near = j.value("corr_near", p.corr_near);
        p.corr_far = j.value("corr_far", p.corr_far);
        if (j.contains("grid")) {
            p.grid.rows = j.at("grid").at(0).get<std::uint32_t>();
            p.grid.cols = j.at("grid").at(1).get<std::uint32_t>();
        }
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("variation: ") + e.what());
    }
    p.check();
    return p;
}

std::string_view to_string(VariationMode m) {
    switch (m) {
    case VariationMode::Full:
        return "full";
    case VariationMode::InterOnly:
        return "inter_only";
    case VariationMode::IntraOnly:
        return "intra_only";
    case VariationMode::None:
        return "none";
    }
    return "full";
}

VariationMode parse_mode(std::string_view text) {
    if (text == "full")
        return VariationMode::Full;
    if (text == "inter_only")
        return VariationMode::InterOnly;
    if (text == "intra_only")
        return VariationMode::IntraOnly;
    if (text == "none")
        return VariationMode::None;
    throw ConfigError("unknown variation mode '" + std::string(text) + "'");
}

double spatial_correlation(const VariationParams &params, double d) {
    if (d <= 0.0)
        return 1.0;
    const double rows = params.grid.rows - 1.0;
    const double cols = params.grid.cols - 1.0;
    const double diameter = std::sqrt(rows * rows + cols * cols);
    if (diameter <= 1.0 || d <= 1.0)
        return params.corr_near;
    const double t = std::min(1.0, (d - 1.0) / (diameter - 1.0));
    return params.corr_near + (params.corr_far - params.corr_near) * t;
}

CovarianceModel::CovarianceModel(const VariationParams &params) : grid_(params.grid) {
    params.check();
    const std::size_t n = grid_.cells();
    const double var = params.sigma_spatial() * params.sigma_spatial();
    Eigen::MatrixXd rho(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double dr = static_cast<double>(i / grid_.cols) - static_cast<double>(j / grid_.cols);
            const double dc = static_cast<double>(i % grid_.cols) - static_cast<double>(j % grid_.cols);
            rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                spatial_correlation(params, std::sqrt(dr * dr + dc * dc));
        }
    }
    cov_ = var * rho;

    // Linear interpolation in distance need not give a PSD matrix: clip
    // negative eigenvalues, then rescale rows so the diagonal stays unit.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(rho);
    if (eig.info() != Eigen::Success)
        throw NumericError("variation: eigen-decomposition of the correlation matrix failed");
    Eigen::VectorXd lambda = eig.eigenvalues();
    const double smallest = lambda.minCoeff();
    clipped_ = smallest < 0.0 ? -smallest : 0.0;
    lambda = lambda.cwiseMax(0.0);
    Eigen::MatrixXd a = eig.eigenvectors() * lambda.cwiseSqrt().asDiagonal();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        const double norm = a.row(i).norm();
        if (!(norm > 0.0))
            throw NumericError("variation: repaired correlation matrix has a zero row " +
                               std::to_string(i));
        a.row(i) /= norm;
    }
    factor_ = std::sqrt(var) * a;
}

double CovarianceModel::correlation(std::size_t i, std::size_t j) const {
    const auto ii = static_cast<Eigen::Index>(i);
    const auto jj = static_cast<Eigen::Index>(j);
    const double d = std::sqrt(cov_(ii, ii) * cov_(jj, jj));
    return d > 0.0 ? cov_(ii, jj) / d : (i == j ? 1.0 : 0.0);
}

CovarianceModel build_covariance(const VariationParams &params) {
    return CovarianceModel(params);
}

std::string VthProfile::to_csv() const {
    std::ostringstream out;
    out << "row,col,dv_inter,dv_spatial,dv_random\n";
    for (std::uint32_t r = 0; r < grid.rows; ++r)
        for (std::uint32_t c = 0; c < grid.cols; ++c) {
            const std::size_t k = std::size_t{r} * grid.cols + c;
            out << r << ',' << c << ',' << format_double(dv_inter) << ','
                << format_double(dv_spatial[k]) << ',' << format_double(dv_random[k]) << '\n';
        }
    return out.str();
}

VthProfile sample_instance(const CovarianceModel &model, const VariationParams &params,
                           std::uint64_t seed, VariationMode mode) {
    const std::size_t n = model.grid().cells();
    if (model.grid().rows != params.grid.rows || model.grid().cols != params.grid.cols)
        throw ConfigError("variation: covariance model grid differs from the parameters");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double z_inter = normal(rng);
    Eigen::VectorXd z(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < z.size(); ++i)
        z(i) = normal(rng);
    std::vector<double> z_random(n);
    for (double &r : z_random)
        r = normal(rng);

    VthProfile p;
    p.grid = params.grid;
    p.vth_nominal = params.vth_nominal;
    const bool inter = mode == VariationMode::Full || mode == VariationMode::InterOnly;
    const bool intra = mode == VariationMode::Full || mode == VariationMode::IntraOnly;
    p.dv_inter = inter ? params.sigma_inter * z_inter : 0.0;
    p.dv_spatial.assign(n, 0.0);
    p.dv_random.assign(n, 0.0);
    if (intra) {
        const Eigen::VectorXd field = model.factor() * z;
        const double sr = params.sigma_random();
        for (std::size_t i = 0; i < n; ++i) {
            p.dv_spatial[i] = field(static_cast<Eigen::Index>(i));
            p.dv_random[i] = sr * z_random[i];
        }
    }
    return p;
}

VthProfile uniform_profile(const VariationParams &params, double dv_inter) {
    VthProfile p;
    p.grid = params.grid;
    p.vth_nominal = params.vth_nominal;
    p.dv_inter = dv_inter;
    p.dv_spatial.assign(params.grid.cells(), 0.0);
    p.dv_random.assign(params.grid.cells(), 0.0);
    return p;
}

} // namespace htscout
