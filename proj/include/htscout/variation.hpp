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

#ifndef HTSCOUT_VARIATION_HPP
#define HTSCOUT_VARIATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "htscout/placement.hpp"

namespace htscout {

/// Threshold-voltage variation: one inter-die offset per instance plus a
/// per-cell intra-die offset made of a spatially correlated field and an
/// independent random part. Voltages in volts.
struct VariationParams {
    double vth_nominal = 0.3;
    double sigma_inter = 0.02;  ///< 3 sigma = 20% of nominal
    double sigma_intra = 0.015; ///< 3 sigma = 15% of nominal
    double spatial_fraction = 0.5; ///< share of intra variance in the field
    double corr_near = 0.8;
    double corr_far = 0.3;
    GridDims grid;

    /// sigma = pct * vth_nominal / 3 for both components.
    static VariationParams from_three_sigma_percent(double vth_nominal, double inter_pct,
                                                    double intra_pct, GridDims grid);

    [[nodiscard]] double sigma_spatial() const;
    [[nodiscard]] double sigma_random() const;
    /// Largest vth reached at 3 sigma of both components.
    [[nodiscard]] double max_vth() const {
        return vth_nominal + 3.0 * sigma_inter + 3.0 * sigma_intra;
    }

    void check() const; ///< throws ConfigError

    [[nodiscard]] nlohmann::json to_json() const;
    static VariationParams from_json(const nlohmann::json &j);
};

enum class VariationMode { Full, InterOnly, IntraOnly, None };

std::string_view to_string(VariationMode m);
VariationMode parse_mode(std::string_view text);

/// Spatial covariance over grid cells (row-major): sigma_spatial^2 * rho(d)
/// with rho(0) = 1 and rho falling linearly from corr_near at distance one
/// cell to corr_far at the grid diameter.
class CovarianceModel {
public:
    explicit CovarianceModel(const VariationParams &params);

    [[nodiscard]] const Eigen::MatrixXd &matrix() const { return cov_; }
    /// Model correlation between two cells.
    [[nodiscard]] double correlation(std::size_t i, std::size_t j) const;
    /// Most negative eigenvalue removed by the PSD repair (0 if none), as a
    /// fraction of sigma_spatial^2.
    [[nodiscard]] double clipped() const { return clipped_; }
    /// F with F F^T equal to the repaired covariance.
    [[nodiscard]] const Eigen::MatrixXd &factor() const { return factor_; }
    [[nodiscard]] const GridDims &grid() const { return grid_; }

private:
    GridDims grid_;
    Eigen::MatrixXd cov_;
    Eigen::MatrixXd factor_;
    double clipped_ = 0.0;
};

/// rho as a function of cell distance for the given parameters.
double spatial_correlation(const VariationParams &params, double cell_distance);

/// CovarianceModel factory.
CovarianceModel build_covariance(const VariationParams &params);

struct VthProfile {
    GridDims grid;
    double vth_nominal = 0.3;
    double dv_inter = 0.0;
    std::vector<double> dv_spatial; ///< row-major per cell
    std::vector<double> dv_random;  ///< row-major per cell

    [[nodiscard]] double vth(std::size_t cell) const {
        return vth_nominal + dv_inter + dv_spatial[cell] + dv_random[cell];
    }
    [[nodiscard]] double vth(GridCell c) const { return vth(std::size_t{c.row} * grid.cols + c.col); }

    /// CSV `row,col,dv_inter,dv_spatial,dv_random`.
    [[nodiscard]] std::string to_csv() const;
};

/// Every component is drawn regardless of mode and then zeroed, so for one
/// seed the modes agree on every component they keep.
VthProfile sample_instance(const CovarianceModel &model, const VariationParams &params,
                           std::uint64_t seed, VariationMode mode);

/// All cells at nominal plus a common offset.
VthProfile uniform_profile(const VariationParams &params, double dv_inter = 0.0);

} // namespace htscout

#endif // HTSCOUT_VARIATION_HPP
