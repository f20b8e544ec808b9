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
#include <span>
#include <vector>

#include "cfran/bussgang.hpp"
#include "cfran/frontend.hpp"
#include "cfran/scenario.hpp"
#include "cfran/types.hpp"

namespace cfran {

/// Linearized statistics of one RRH: Bussgang gain, pilot/combiner blocks and
/// noise covariances. The high-resolution model uses A = I and C_q = 0.
struct RrhModel
{
    RVec a_gain;               // L tau
    std::vector<CMat> b_block; // per UE, (L tau) x M
    CMat c_noise;              // (L tau) x (L tau)
    CMat c_q;                  // (L tau) x (L tau)
};

/// Stacked observation model collected from all RRHs.
struct GlobalModel
{
    std::vector<RrhModel> rrh;
    RVec a_gain;              // diagonal of A = diag(A_1, ..., A_{N_R})
    std::vector<CMat> b;      // per UE, block diagonal (L tau N_R) x (M N_R)
    CMat c_noise;             // block diagonal
    CMat c_q;                 // block diagonal
    std::vector<CMat> theta;  // per UE, (M N_R) x (M N_R)

    int n_ue() const { return static_cast<int>(b.size()); }
    Eigen::Index obs_dim() const { return a_gain.size(); }
};

struct FilterSet
{
    std::vector<CMat> f; // per UE, (M N_R) x (L tau N_R)
};

struct MseReport
{
    std::vector<double> per_ue;
    double sum = 0.0;
};

struct EmpiricalMse
{
    std::vector<double> per_ue_mean;
    std::vector<double> per_ue_stderr;
    double sum_mean = 0.0;
    double sum_stderr = 0.0;
    int n_trials = 0;
};

/// Per-RRH models for the given design; one-bit models go through Bussgang.
std::vector<RrhModel> build_rrh_models(const PilotSet &pilots, const CombinerSet &combiners,
                                       const ChannelStats &stats, double noise_var, AdcModel adc);

/// Block-diagonal assembly in RRH order. Throws std::invalid_argument on
/// inconsistent per-RRH dimensions.
GlobalModel assemble_global(std::span<const RrhModel> rrh, const ChannelStats &stats);

GlobalModel build_global_model(const PilotSet &pilots, const CombinerSet &combiners,
                               const ChannelStats &stats, double noise_var, AdcModel adc);

/// Observation covariance sum_l A B_l Theta_l B_l^H A^H + A C_z A^H + C_q.
CMat observation_covariance(const GlobalModel &model);

/// F_k = Theta_k B_k^H A^H C^{-1}. Throws SingularMatrixError if C cannot be
/// factored even after jitter.
FilterSet mmse_filter(const GlobalModel &model);

/// Evaluates the four-term per-UE MSE for arbitrary linear filters.
MseReport analytic_mse(const FilterSet &filters, const GlobalModel &model);

/// Monte-Carlo squared error of F_k y_hat against h_k over full simulations
/// (channels, noise, combining and, for one-bit, quantization). Trials run in
/// parallel; trial t draws from its own stream derive_seed(seed, {t}) and sums
/// are merged in trial order, so the result equals empirical_mse_serial.
EmpiricalMse empirical_mse(const PilotSet &pilots, const CombinerSet &combiners,
                           const FilterSet &filters, const ChannelStats &stats, double noise_var,
                           AdcModel adc, int n_trials, std::uint64_t seed);

/// Single-threaded reference for empirical_mse.
EmpiricalMse empirical_mse_serial(const PilotSet &pilots, const CombinerSet &combiners,
                                  const FilterSet &filters, const ChannelStats &stats,
                                  double noise_var, AdcModel adc, int n_trials,
                                  std::uint64_t seed);

// ---------------------------------------------------------------------------
// High-resolution, noiseless path

struct HighResStats
{
    std::vector<CMat> r;   // R_i = P_i kron Q_i
    std::vector<CMat> b_r; // B_{R,i} = S_bar kron W_i
    std::vector<CMat> j;   // J_i = W Q^2 W^H (W Q W^H)^{-1}
    std::vector<CMat> k;   // K_i = S P_i^2 S^H (S P_i S^H)^{-1}
    std::vector<CMat> j_den_inv; // (W Q W^H)^{-1}
    std::vector<CMat> k_den_inv; // (S P S^H)^{-1}
};

/// Condition bound beyond which high-resolution systems count as singular.
inline constexpr double kHighResMaxCondition = 1e12;

HighResStats highres_stats(const PilotSet &pilots, const CombinerSet &combiners,
                           const ChannelStats &stats);

/// tr(W Q^2 W^H (W Q W^H)^{-1})
double trace_j(const CMat &w, const CMat &q);

/// tr(S P^2 S^H (S P S^H)^{-1}) with P = diag(p)
double trace_k(const CMat &s_bar, const RVec &p);

/// R_i B^H (B R_i B^H)^{-1} y_i, UE-major stacking.
CVec highres_estimate(const HighResStats &stats, int rrh, const CVec &y);

/// sum_i [ tr(R_i) - tr(J_i) tr(K_i) ]
double highres_summse(const HighResStats &stats);

/// Per-UE MMSE from the diagonal blocks of the per-RRH error covariances.
std::vector<double> highres_per_ue_mse(const HighResStats &stats, int n_ue);

} // namespace cfran
