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

#include "cfran/frontend.hpp"

#include <cmath>
#include <stdexcept>

#include "cfran/linalg.hpp"

namespace cfran {

bool PilotSet::feasible(double tol) const
{
    if (static_cast<int>(power_budget.size()) != n_ue())
        return false;
    for (int k = 0; k < n_ue(); ++k)
        if (s.col(k).squaredNorm() / tau() > power_budget[static_cast<size_t>(k)] + tol)
            return false;
    return true;
}

bool CombinerSet::feasible(double tol) const
{
    for (const auto &wi : w)
        for (Eigen::Index c = 0; c < wi.cols(); ++c)
            for (Eigen::Index r = 0; r < wi.rows(); ++r)
            {
                const double mag2 = std::norm(wi(r, c));
                if (mode == CombinerMode::strict ? std::abs(mag2 - 1.0) > tol : mag2 > 1.0 + tol)
                    return false;
            }
    return true;
}

std::vector<CMat> receive(const ChannelRealization &channel, const PilotSet &pilots,
                          double noise_var, Rng &rng)
{
    if (pilots.n_ue() != channel.n_ue)
        throw std::invalid_argument("receive: pilot and channel user counts differ");

    ComplexGaussian noise(noise_var);
    std::vector<CMat> y;
    y.reserve(static_cast<size_t>(channel.n_rrh));
    for (int i = 0; i < channel.n_rrh; ++i)
    {
        const auto m = channel.at(i, 0).size();
        CMat yi = CMat::Zero(m, pilots.tau());
        for (int k = 0; k < channel.n_ue; ++k)
            yi.noalias() += channel.at(i, k) * pilots.s.col(k).transpose();
        if (noise_var > 0.0)
            yi += noise.matrix(m, pilots.tau(), rng);
        y.push_back(std::move(yi));
    }
    return y;
}

CVec combine_and_vectorize(const CMat &w, const CMat &y)
{
    if (w.cols() != y.rows())
        throw std::invalid_argument("combine_and_vectorize: combiner width does not match antennas");
    const CMat wy = w * y;
    return Eigen::Map<const CVec>(wy.data(), wy.size());
}

CMat pilot_combiner_block(const CVec &s_k, const CMat &w)
{
    return kron(s_k, w);
}

CMat noise_covariance(const CMat &w, int tau, double noise_var)
{
    const auto l = w.rows();
    const CMat block = noise_var * (w * w.adjoint());
    CMat c = CMat::Zero(l * tau, l * tau);
    for (int t = 0; t < tau; ++t)
        c.block(t * l, t * l, l, l) = block;
    return hermitian_part(c);
}

CMat signal_covariance(const PilotSet &pilots, const CMat &w, const ChannelStats &stats, int rrh,
                       double noise_var)
{
    const auto &q = stats.q_corr[static_cast<size_t>(rrh)];
    if (w.cols() != q.rows())
        throw std::invalid_argument("signal_covariance: combiner width does not match antennas");

    CMat c = noise_covariance(w, pilots.tau(), noise_var);
    for (int k = 0; k < pilots.n_ue(); ++k)
    {
        const double rho = stats.rho(rrh, k);
        if (rho == 0.0)
            continue;
        const CMat b = pilot_combiner_block(pilots.s.col(k), w);
        c.noalias() += rho * (b * q * b.adjoint());
    }
    return hermitian_part(c);
}

FrontEndStats frontend_stats(const PilotSet &pilots, const CombinerSet &combiners,
                             const ChannelStats &stats, double noise_var)
{
    FrontEndStats out;
    for (int i = 0; i < combiners.n_rrh(); ++i)
    {
        const CMat &w = combiners.w[static_cast<size_t>(i)];
        std::vector<CMat> blocks;
        for (int k = 0; k < pilots.n_ue(); ++k)
            blocks.push_back(pilot_combiner_block(pilots.s.col(k), w));
        out.b_blocks.push_back(std::move(blocks));
        out.c_noise.push_back(noise_covariance(w, pilots.tau(), noise_var));
        out.c_signal.push_back(signal_covariance(pilots, w, stats, i, noise_var));
    }
    return out;
}

} // namespace cfran
