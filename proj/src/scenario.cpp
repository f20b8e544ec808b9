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

#include "cfran/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "cfran/errors.hpp"
#include "cfran/linalg.hpp"

namespace cfran {

double SystemConfig::noise_variance() const
{
    if (noise_var)
        return *noise_var;
    return power_per_ue * std::pow(10.0, -snr_db / 10.0);
}

void SystemConfig::validate() const
{
    auto require = [](bool ok, const std::string &msg) {
        if (!ok)
            throw ConfigError(msg);
    };
    require(n_ue >= 1, "system.n_ue must be >= 1");
    require(n_rrh >= 1, "system.n_rrh must be >= 1");
    require(m_antennas >= 1, "system.m_antennas must be >= 1");
    require(l_chains >= 1, "system.l_chains must be >= 1");
    require(l_chains <= m_antennas, "system.l_chains (" + std::to_string(l_chains) +
                                        ") must not exceed system.m_antennas (" +
                                        std::to_string(m_antennas) + ")");
    require(tau >= 1, "system.tau must be >= 1");
    require(power_per_ue >= 0.0, "system.power_per_ue must be >= 0");
    require(!noise_var || *noise_var >= 0.0, "system.noise_var must be >= 0");
    require(std::isfinite(snr_db), "system.snr_db must be finite");
    require(area_side_m >= 0.0, "system.area_side_m must be >= 0");
    require(delta_spread > 0.0, "system.delta_spread must be > 0");
}

CVec ChannelRealization::stacked_ue(int ue) const
{
    const auto m = at(0, ue).size();
    CVec out(m * n_rrh);
    for (int i = 0; i < n_rrh; ++i)
        out.segment(i * m, m) = at(i, ue);
    return out;
}

CVec ChannelRealization::stacked_rrh(int rrh) const
{
    const auto m = at(rrh, 0).size();
    CVec out(m * n_ue);
    for (int k = 0; k < n_ue; ++k)
        out.segment(k * m, m) = at(rrh, k);
    return out;
}

double pathloss(double distance_m)
{
    if (!(distance_m >= 0.0))
        throw std::invalid_argument("pathloss: distance must be non-negative");
    const double r = distance_m / 10.0;
    return 1.0 / (1.0 + r * r * r);
}

double bessel_j0(double x)
{
    // sum_m (-1)^m (x/2)^{2m} / (m!)^2, stopped once a term drops below 1e-15
    // of the running sum. Adequate for |x| < 20, which covers every use here.
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int m = 1; m < 200; ++m)
    {
        term *= -q / (static_cast<double>(m) * m);
        sum += term;
        if (std::abs(term) <= 1e-15 * std::max(std::abs(sum), 1e-300))
            break;
    }
    return sum;
}

CMat correlation_matrix(int m_antennas, double d_over_lambda, double delta)
{
    if (m_antennas < 1)
        throw std::invalid_argument("correlation_matrix: need at least one antenna");
    if (!(delta > 0.0))
        throw std::invalid_argument("correlation_matrix: angular spread must be positive");

    const double scale = 2.0 * std::numbers::pi * std::sin(d_over_lambda) / delta;
    CMat q(m_antennas, m_antennas);
    for (int a = 0; a < m_antennas; ++a)
        for (int b = 0; b < m_antennas; ++b)
            q(a, b) = bessel_j0(scale * std::abs(a - b));

    // Roundoff can leave tiny negative eigenvalues; reconstruct with them clamped.
    if (min_eigenvalue(q) < 0.0)
    {
        Eigen::SelfAdjointEigenSolver<CMat> eig(q);
        RVec lam = eig.eigenvalues().cwiseMax(0.0);
        q = hermitian_part(eig.eigenvectors() * lam.cast<cd>().asDiagonal() *
                           eig.eigenvectors().adjoint());
        q.diagonal().setOnes();
        for (int a = 0; a < m_antennas; ++a)
            for (int b = 0; b < a; ++b)
                q(a, b) = std::conj(q(b, a));
    }
    return q;
}

Geometry sample_geometry(const SystemConfig &config, Rng &rng)
{
    std::uniform_real_distribution<double> coord(0.0, 1.0);
    Geometry g;
    g.ue_positions.resize(config.n_ue, 2);
    g.rrh_positions.resize(config.n_rrh, 2);
    for (int k = 0; k < config.n_ue; ++k)
        for (int d = 0; d < 2; ++d)
            g.ue_positions(k, d) = config.area_side_m * coord(rng);
    for (int i = 0; i < config.n_rrh; ++i)
        for (int d = 0; d < 2; ++d)
            g.rrh_positions(i, d) = config.area_side_m * coord(rng);

    g.distances.resize(config.n_rrh, config.n_ue);
    for (int i = 0; i < config.n_rrh; ++i)
        for (int k = 0; k < config.n_ue; ++k)
            g.distances(i, k) = (g.rrh_positions.row(i) - g.ue_positions.row(k)).norm();
    return g;
}

ChannelStats make_channel_stats(const RMat &rho, const std::vector<CMat> &q_corr)
{
    if (static_cast<Eigen::Index>(q_corr.size()) != rho.rows() || q_corr.empty())
        throw std::invalid_argument("make_channel_stats: need one correlation matrix per RRH");

    ChannelStats s;
    s.rho = rho;
    s.q_corr = q_corr;
    for (const auto &q : q_corr)
        s.q_sqrt.push_back(hermitian_sqrt(q));

    const auto m = q_corr.front().rows();
    for (Eigen::Index k = 0; k < rho.cols(); ++k)
    {
        CMat th = CMat::Zero(m * rho.rows(), m * rho.rows());
        for (Eigen::Index i = 0; i < rho.rows(); ++i)
            th.block(i * m, i * m, m, m) = rho(i, k) * q_corr[static_cast<size_t>(i)];
        s.theta.push_back(std::move(th));
    }
    return s;
}

ChannelStats make_channel_stats(const SystemConfig &config, const Geometry &geometry)
{
    RMat rho(config.n_rrh, config.n_ue);
    for (int i = 0; i < config.n_rrh; ++i)
        for (int k = 0; k < config.n_ue; ++k)
            rho(i, k) = pathloss(geometry.distances(i, k));

    const CMat q = correlation_matrix(config.m_antennas, config.d_over_lambda, config.delta_spread);
    return make_channel_stats(rho, std::vector<CMat>(static_cast<size_t>(config.n_rrh), q));
}

ChannelRealization sample_channels(const ChannelStats &stats, Rng &rng)
{
    ChannelRealization out;
    out.n_rrh = stats.n_rrh();
    out.n_ue = stats.n_ue();
    const int m = stats.m_antennas();
    ComplexGaussian white;
    out.h.reserve(static_cast<size_t>(out.n_rrh * out.n_ue));
    for (int i = 0; i < out.n_rrh; ++i)
        for (int k = 0; k < out.n_ue; ++k)
        {
            CVec hw = white.vector(m, rng);
            out.h.push_back(std::sqrt(stats.rho(i, k)) * (stats.q_sqrt[static_cast<size_t>(i)] * hw));
        }
    return out;
}

} // namespace cfran
