// SPDX-License-Identifier: Apache-2.0
//
// cfran - pilot and analog combiner design for cell-free uplinks with one-bit ADCs
// Copyright (C) 2026 The cfran Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cfran/rng.hpp"
#include "cfran/types.hpp"

namespace cfran {

/// Scenario dimensions, powers and noise. Identical per-UE power and per-RRH
/// noise variance are assumed throughout.
struct SystemConfig
{
    int n_ue = 6;
    int n_rrh = 2;
    int m_antennas = 4;
    int l_chains = 2;
    int tau = 2;
    double power_per_ue = 1.0;
    double snr_db = 10.0;
    // When unset, sigma^2 = P * 10^(-snr_db / 10).
    std::optional<double> noise_var;
    double area_side_m = 100.0;
    double d_over_lambda = 0.5;
    double delta_spread = 25.0;
    std::uint64_t rng_seed = 1;

    double noise_variance() const;

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

struct Geometry
{
    RMat ue_positions;  // n_ue x 2, meters
    RMat rrh_positions; // n_rrh x 2, meters
    RMat distances;     // n_rrh x n_ue, meters
};

struct ChannelStats
{
    RMat rho;                 // n_rrh x n_ue pathloss
    std::vector<CMat> q_corr; // per RRH, M x M
    std::vector<CMat> q_sqrt; // per RRH, Hermitian square root of q_corr
    std::vector<CMat> theta;  // per UE, block diagonal diag_i(rho(i,k) Q_i)

    int n_rrh() const { return static_cast<int>(rho.rows()); }
    int n_ue() const { return static_cast<int>(rho.cols()); }
    int m_antennas() const { return static_cast<int>(q_corr.front().rows()); }
};

/// Channel draws h_{i,k}, stored at index i * n_ue + k.
struct ChannelRealization
{
    int n_rrh = 0;
    int n_ue = 0;
    std::vector<CVec> h;

    const CVec &at(int rrh, int ue) const { return h[static_cast<size_t>(rrh * n_ue + ue)]; }

    /// h_k = [h_{1,k}; ...; h_{N_R,k}] (RRH-major).
    CVec stacked_ue(int ue) const;

    /// h_{R,i} = [h_{i,1}; ...; h_{i,N_U}] (UE-major, high-resolution path).
    CVec stacked_rrh(int rrh) const;
};

/// 1 / (1 + (D/10)^3); D in meters.
double pathloss(double distance_m);

/// Zeroth-order Bessel function of the first kind by its power series.
double bessel_j0(double x);

/// Q(a,b) = J0(2 pi |a-b| sin(d/lambda) / delta) for a uniform linear array.
CMat correlation_matrix(int m_antennas, double d_over_lambda, double delta);

Geometry sample_geometry(const SystemConfig &config, Rng &rng);

ChannelStats make_channel_stats(const SystemConfig &config, const Geometry &geometry);

/// Statistics from an explicit pathloss matrix and per-RRH correlation.
ChannelStats make_channel_stats(const RMat &rho, const std::vector<CMat> &q_corr);

ChannelRealization sample_channels(const ChannelStats &stats, Rng &rng);

} // namespace cfran
