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

#include <vector>

#include "cfran/rng.hpp"
#include "cfran/scenario.hpp"
#include "cfran/types.hpp"

namespace cfran {

/// tau x n_ue pilot matrix [s_1 ... s_{N_U}] with per-UE power budgets.
struct PilotSet
{
    CMat s;
    std::vector<double> power_budget;

    int tau() const { return static_cast<int>(s.rows()); }
    int n_ue() const { return static_cast<int>(s.cols()); }

    /// (1/tau) ||s_k||^2 <= P_k + tol for every k.
    bool feasible(double tol = 1e-9) const;
};

enum class CombinerMode { strict, relaxed };

/// Per-RRH L x M analog combiners.
struct CombinerSet
{
    std::vector<CMat> w;
    CombinerMode mode = CombinerMode::strict;

    int n_rrh() const { return static_cast<int>(w.size()); }

    /// Strict: |w|^2 = 1 within tol; relaxed: |w|^2 <= 1 + tol.
    bool feasible(double tol = 1e-9) const;
};

struct FrontEndStats
{
    std::vector<std::vector<CMat>> b_blocks; // [rrh][ue]: s_k kron W_i, (L tau) x M
    std::vector<CMat> c_noise;               // per RRH
    std::vector<CMat> c_signal;              // per RRH, covariance of the combined signal
};

/// Y_i = sum_k h_{i,k} s_k^T + Z_i for every RRH.
std::vector<CMat> receive(const ChannelRealization &channel, const PilotSet &pilots,
                          double noise_var, Rng &rng);

/// vec(W Y), column-major.
CVec combine_and_vectorize(const CMat &w, const CMat &y);

/// B_{k,i} = s_k kron W_i.
CMat pilot_combiner_block(const CVec &s_k, const CMat &w);

/// sigma^2 (I_tau kron W)(I_tau kron W)^H
CMat noise_covariance(const CMat &w, int tau, double noise_var);

/// sum_k rho_{i,k} B_{k,i} Q_i B_{k,i}^H + C_noise, symmetrized.
CMat signal_covariance(const PilotSet &pilots, const CMat &w, const ChannelStats &stats, int rrh,
                       double noise_var);

FrontEndStats frontend_stats(const PilotSet &pilots, const CombinerSet &combiners,
                             const ChannelStats &stats, double noise_var);

} // namespace cfran
