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
#include <string>
#include <string_view>
#include <vector>

#include "cfran/estimation.hpp"
#include "cfran/frontend.hpp"
#include "cfran/rng.hpp"
#include "cfran/scenario.hpp"

namespace cfran {

struct OptimizerConfig
{
    int max_outer_iters = 30;
    double gamma0 = 1.0;       // first interpolation step, in (0, 1]
    double gamma_decay = 0.05; // gamma <- gamma (1 - decay * gamma)
    int inner_max_iters = 200;
    double inner_tol = 1e-6;
    double outer_tol = 1e-4;
    // Return the lowest-MSE iterate of the trace instead of the last one.
    bool keep_best = true;

    void validate() const;
};

enum class Scheme { fully_random, combiner_opt, pilot_opt, joint };

std::string_view scheme_name(Scheme scheme);
Scheme parse_scheme(std::string_view name);
bool optimizes_pilots(Scheme scheme);
bool optimizes_combiners(Scheme scheme);

struct Design
{
    PilotSet pilots;
    CombinerSet combiners;
};

/// i.i.d. CN(0,1) pilots rescaled to (1/tau) ||s_k||^2 = P_k exactly.
PilotSet random_pilots(const SystemConfig &config, Rng &rng);

/// i.i.d. uniform phases, unit modulus.
CombinerSet random_combiners(const SystemConfig &config, Rng &rng);

/// Pilots and combiners come from separate sub-streams of seed so that a scheme
/// freezing one block sees the same random draw of it as the fully random one.
Design init_design(const SystemConfig &config, std::uint64_t seed);

/// w / |w| entrywise, 0 -> 1.
CombinerSet project_modulus(const CombinerSet &w);

/// A, C_q and F frozen for one round of the convex subproblems.
struct SurrogateState
{
    std::vector<RVec> a_gain;
    std::vector<CMat> c_q;
    FilterSet filters;
};

SurrogateState make_surrogate(const GlobalModel &model, const FilterSet &filters);

/// Sum of the four-term per-UE MSE for (S, W) with A, C_q and F held fixed.
/// Dense evaluation through the global model.
double surrogate_objective(const Design &design, const SurrogateState &surrogate,
                           const ChannelStats &stats, double noise_var);

/// The surrogate as a function of the pilots for fixed W:
///   const + sum_k [ s_k^H T_k s_k - 2 Re(g_k^T s_k) ].
class PilotObjective
{
public:
    PilotObjective(const CombinerSet &combiners, const SurrogateState &surrogate,
                   const ChannelStats &stats, double noise_var);

    double value(const CMat &s) const;
    /// d/dRe(S) + j d/dIm(S)
    CMat gradient(const CMat &s) const;

    double ue_value(int k, const CVec &s_k) const;
    CVec ue_gradient(int k, const CVec &s_k) const;
    double ue_scale(int k) const { return scale_[static_cast<size_t>(k)]; }
    /// Upper bound on the Lipschitz constant of ue_gradient.
    double ue_lipschitz(int k) const { return 2.0 * t_[static_cast<size_t>(k)].norm(); }
    int n_ue() const { return static_cast<int>(t_.size()); }

private:
    std::vector<CMat> t_;
    std::vector<CVec> g_;
    std::vector<double> scale_;
    double constant_ = 0.0;
};

/// The surrogate as a function of the combiners for fixed S, separable per RRH:
///   const + sum_i [ tr(W Q W^H Psi_S) + sigma^2 tr(W W^H Psi_N) - 2 Re tr(W Q X) ].
class CombinerObjective
{
public:
    CombinerObjective(const PilotSet &pilots, const SurrogateState &surrogate,
                      const ChannelStats &stats, double noise_var);

    double value(const std::vector<CMat> &w) const;
    double rrh_value(int i, const CMat &w) const;
    /// d/dRe(W_i) + j d/dIm(W_i)
    CMat rrh_gradient(int i, const CMat &w) const;
    double scale() const { return scale_; }
    double rrh_lipschitz(int i) const;
    int n_rrh() const { return static_cast<int>(psi_s_.size()); }

private:
    std::vector<CMat> psi_s_, psi_n_, x_, q_;
    double noise_var_ = 0.0;
    double constant_ = 0.0;
    double scale_ = 1.0;
};

struct InnerResult
{
    std::vector<double> objective; // total objective after each inner iteration, [0] = start
    int iterations = 0;
};

/// Projected gradient with backtracking on the pilot surrogate, starting from
/// current; projection s_k <- s_k min(1, sqrt(tau P_k) / ||s_k||).
PilotSet pilot_subproblem(const PilotObjective &objective, const PilotSet &current,
                          const OptimizerConfig &config, InnerResult *info = nullptr);

/// Projected gradient with backtracking on the relaxed combiner surrogate
/// (|w| <= 1 per entry). Output is in relaxed mode.
CombinerSet combiner_subproblem(const CombinerObjective &objective, const CombinerSet &current,
                                const OptimizerConfig &config, InnerResult *info = nullptr);

/// gamma_{t+1} = gamma_t (1 - decay gamma_t)
double next_step_size(double gamma, double decay);

struct OptimizerTrace
{
    std::vector<double> sum_mse;              // [0] = initial design
    std::vector<std::vector<double>> per_ue;  // per iterate
    std::vector<Design> iterates;             // per iterate
    Design design;                            // returned design
    FilterSet filters;                        // MMSE filters of the returned design
    int iterations = 0;                       // outer iterations executed
    int selected = 0;                         // trace index of the returned design
    std::string termination;
};

/// Alternating pilot / combiner / filter optimization for the one-bit receiver.
/// Blocks not selected by the scheme keep their random initialization.
OptimizerTrace run_algorithm1(const SystemConfig &config, const OptimizerConfig &opt,
                              Scheme scheme, const ChannelStats &stats, std::uint64_t seed);

/// Index of the iterate a run stopped after max_iters would return.
int select_iterate(const OptimizerTrace &trace, int max_iters, bool keep_best);

// ---------------------------------------------------------------------------
// High-resolution heuristics

/// Projected gradient ascent of tr(J) over unit-modulus W, in place.
/// Returns the final tr(J); the accepted-step objective sequence goes to trace.
double highres_combiner_ascent(CMat &w, const CMat &q, int max_iters, double tol,
                               std::vector<double> *trace = nullptr);

/// Per RRH: ascent from n_starts random unit-modulus points, best kept.
CombinerSet highres_combiner_opt(const ChannelStats &stats, int l_chains,
                                 const OptimizerConfig &opt, std::uint64_t seed,
                                 int n_starts = 5);

/// sum_i weight_i tr(K_i(S))
double weighted_trace_k(const CMat &s_bar, const ChannelStats &stats,
                        const std::vector<double> &weights);

/// Greedy choice of tau rows of the n_ue-point DFT (scaled to full power)
/// followed by projected gradient ascent of sum_i weight_i tr(K_i). Requires
/// tau <= n_ue. The trace records the polish objective.
PilotSet highres_pilot_opt(const ChannelStats &stats, const std::vector<double> &weights,
                           int tau, double power_per_ue, const OptimizerConfig &opt,
                           std::vector<double> *trace = nullptr);

} // namespace cfran
