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

#include "cfran/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "cfran/errors.hpp"
#include "cfran/linalg.hpp"

namespace cfran {

namespace {

constexpr int kMaxBacktracks = 60;

// Psi = A Phi A for real diagonal A.
CMat scale_both_sides(const CMat &phi, const RVec &a)
{
    return (a.asDiagonal() * phi.real() * a.asDiagonal()).cast<cd>() +
           cd(0.0, 1.0) * (a.asDiagonal() * phi.imag() * a.asDiagonal()).cast<cd>();
}

// Per-RRH pieces shared by both subproblem objectives.
struct RrhFilterTerms
{
    CMat psi;                  // A_i Phi_i A_i, (L tau) x (L tau)
    double q_term = 0.0;       // tr(C_q_i Phi_i)
    std::vector<CMat> g_prime; // per UE: F_k[rows i, cols i] A_i, M x (L tau)
};

RrhFilterTerms filter_terms(const SurrogateState &sur, int rrh, Eigen::Index m)
{
    const auto &a = sur.a_gain[static_cast<size_t>(rrh)];
    const auto lt = a.size();
    const auto col0 = rrh * lt;

    RrhFilterTerms out;
    CMat phi = CMat::Zero(lt, lt);
    for (const auto &f : sur.filters.f)
    {
        const auto fi = f.middleCols(col0, lt);
        phi.noalias() += fi.adjoint() * fi;
        out.g_prime.push_back(f.block(rrh * m, col0, m, lt) * a.cast<cd>().asDiagonal());
    }
    out.q_term = trace_product_real(sur.c_q[static_cast<size_t>(rrh)], phi);
    out.psi = hermitian_part(scale_both_sides(phi, a));
    return out;
}

double total_theta_trace(const ChannelStats &stats)
{
    double t = 0.0;
    for (const auto &th : stats.theta)
        t += th.trace().real();
    return t;
}

} // namespace

void OptimizerConfig::validate() const
{
    auto require = [](bool ok, const char *msg) {
        if (!ok)
            throw ConfigError(msg);
    };
    require(max_outer_iters >= 0, "optimizer.max_outer_iters must be >= 0");
    require(gamma0 > 0.0 && gamma0 <= 1.0, "optimizer.gamma0 must lie in (0, 1]");
    require(gamma_decay > 0.0 && gamma_decay < 1.0, "optimizer.gamma_decay must lie in (0, 1)");
    require(inner_max_iters >= 1, "optimizer.inner_max_iters must be >= 1");
    require(inner_tol > 0.0, "optimizer.inner_tol must be > 0");
    require(outer_tol > 0.0, "optimizer.outer_tol must be > 0");
}

std::string_view scheme_name(Scheme scheme)
{
    switch (scheme)
    {
    case Scheme::fully_random: return "fully-random";
    case Scheme::combiner_opt: return "combiner-opt";
    case Scheme::pilot_opt: return "pilot-opt";
    case Scheme::joint: return "joint";
    }
    return "?";
}

Scheme parse_scheme(std::string_view name)
{
    for (auto s : {Scheme::fully_random, Scheme::combiner_opt, Scheme::pilot_opt, Scheme::joint})
        if (scheme_name(s) == name)
            return s;
    throw ConfigError("unknown scheme '" + std::string(name) +
                      "' (expected fully-random, combiner-opt, pilot-opt or joint)");
}

bool optimizes_pilots(Scheme scheme)
{
    return scheme == Scheme::pilot_opt || scheme == Scheme::joint;
}

bool optimizes_combiners(Scheme scheme)
{
    return scheme == Scheme::combiner_opt || scheme == Scheme::joint;
}

PilotSet random_pilots(const SystemConfig &config, Rng &rng)
{
    ComplexGaussian gauss;
    PilotSet p;
    p.s = gauss.matrix(config.tau, config.n_ue, rng);
    p.power_budget.assign(static_cast<size_t>(config.n_ue), config.power_per_ue);
    for (int k = 0; k < config.n_ue; ++k)
    {
        const double n = p.s.col(k).norm();
        p.s.col(k) *= n > 0.0 ? std::sqrt(config.tau * config.power_per_ue) / n : 0.0;
    }
    return p;
}

CombinerSet random_combiners(const SystemConfig &config, Rng &rng)
{
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    CombinerSet c;
    c.mode = CombinerMode::strict;
    for (int i = 0; i < config.n_rrh; ++i)
    {
        CMat w(config.l_chains, config.m_antennas);
        for (Eigen::Index col = 0; col < w.cols(); ++col)
            for (Eigen::Index r = 0; r < w.rows(); ++r)
                w(r, col) = std::polar(1.0, phase(rng));
        c.w.push_back(std::move(w));
    }
    return c;
}

Design init_design(const SystemConfig &config, std::uint64_t seed)
{
    Rng pilot_rng(derive_seed(seed, {label_key("pilots")}));
    Rng combiner_rng(derive_seed(seed, {label_key("combiners")}));
    return {random_pilots(config, pilot_rng), random_combiners(config, combiner_rng)};
}

CombinerSet project_modulus(const CombinerSet &w)
{
    CombinerSet out;
    out.mode = CombinerMode::strict;
    for (const auto &wi : w.w)
    {
        CMat p = wi;
        for (Eigen::Index c = 0; c < p.cols(); ++c)
            for (Eigen::Index r = 0; r < p.rows(); ++r)
            {
                const double mag = std::abs(p(r, c));
                p(r, c) = mag > 0.0 ? p(r, c) / mag : cd(1.0, 0.0);
            }
        out.w.push_back(std::move(p));
    }
    return out;
}

SurrogateState make_surrogate(const GlobalModel &model, const FilterSet &filters)
{
    SurrogateState s;
    for (const auto &r : model.rrh)
    {
        s.a_gain.push_back(r.a_gain);
        s.c_q.push_back(r.c_q);
    }
    s.filters = filters;
    return s;
}

double surrogate_objective(const Design &design, const SurrogateState &surrogate,
                           const ChannelStats &stats, double noise_var)
{
    const FrontEndStats fe = frontend_stats(design.pilots, design.combiners, stats, noise_var);
    std::vector<RrhModel> rrh;
    for (int i = 0; i < design.combiners.n_rrh(); ++i)
    {
        RrhModel m;
        m.a_gain = surrogate.a_gain[static_cast<size_t>(i)];
        m.c_q = surrogate.c_q[static_cast<size_t>(i)];
        m.b_block = fe.b_blocks[static_cast<size_t>(i)];
        m.c_noise = fe.c_noise[static_cast<size_t>(i)];
        rrh.push_back(std::move(m));
    }
    return analytic_mse(surrogate.filters, assemble_global(rrh, stats)).sum;
}

// ---------------------------------------------------------------------------

PilotObjective::PilotObjective(const CombinerSet &combiners, const SurrogateState &surrogate,
                               const ChannelStats &stats, double noise_var)
{
    const int n_ue = stats.n_ue();
    const auto m = stats.m_antennas();
    const auto l = combiners.w.front().rows();
    const auto tau = surrogate.a_gain.front().size() / l;

    t_.assign(static_cast<size_t>(n_ue), CMat::Zero(tau, tau));
    g_.assign(static_cast<size_t>(n_ue), CVec::Zero(tau));
    constant_ = total_theta_trace(stats);

    for (int i = 0; i < combiners.n_rrh(); ++i)
    {
        const CMat &w = combiners.w[static_cast<size_t>(i)];
        const CMat &q = stats.q_corr[static_cast<size_t>(i)];
        const RrhFilterTerms ft = filter_terms(surrogate, i, m);
        const CMat wq = w * q;
        const CMat wqw = wq * w.adjoint();
        const CMat ww = w * w.adjoint();

        constant_ += ft.q_term;
        CMat t_i(tau, tau);
        for (Eigen::Index u = 0; u < tau; ++u)
            for (Eigen::Index t = 0; t < tau; ++t)
                t_i(u, t) = (wqw * ft.psi.block(u * l, t * l, l, l)).trace();
        for (Eigen::Index t = 0; t < tau; ++t)
            constant_ += noise_var * trace_product_real(ww, ft.psi.block(t * l, t * l, l, l));

        for (int k = 0; k < n_ue; ++k)
        {
            const double rho = stats.rho(i, k);
            t_[static_cast<size_t>(k)] += rho * t_i;
            for (Eigen::Index t = 0; t < tau; ++t)
                g_[static_cast<size_t>(k)](t) +=
                    rho * (ft.g_prime[static_cast<size_t>(k)].middleCols(t * l, l) * wq).trace();
        }
    }
    for (int k = 0; k < n_ue; ++k)
    {
        t_[static_cast<size_t>(k)] = hermitian_part(t_[static_cast<size_t>(k)]);
        scale_.push_back(stats.theta[static_cast<size_t>(k)].trace().real());
    }
}

double PilotObjective::ue_value(int k, const CVec &s_k) const
{
    const auto &t = t_[static_cast<size_t>(k)];
    const auto &g = g_[static_cast<size_t>(k)];
    return s_k.dot(t * s_k).real() - 2.0 * (g.transpose() * s_k).value().real();
}

CVec PilotObjective::ue_gradient(int k, const CVec &s_k) const
{
    return 2.0 * (t_[static_cast<size_t>(k)] * s_k - g_[static_cast<size_t>(k)].conjugate());
}

double PilotObjective::value(const CMat &s) const
{
    double v = constant_;
    for (int k = 0; k < n_ue(); ++k)
        v += ue_value(k, s.col(k));
    return v;
}

CMat PilotObjective::gradient(const CMat &s) const
{
    CMat g(s.rows(), s.cols());
    for (int k = 0; k < n_ue(); ++k)
        g.col(k) = ue_gradient(k, s.col(k));
    return g;
}

CombinerObjective::CombinerObjective(const PilotSet &pilots, const SurrogateState &surrogate,
                                     const ChannelStats &stats, double noise_var)
    : noise_var_(noise_var)
{
    const auto m = stats.m_antennas();
    const auto tau = pilots.tau();
    const auto l = surrogate.a_gain.front().size() / tau;
    constant_ = total_theta_trace(stats);
    scale_ = std::max(constant_, std::numeric_limits<double>::min());

    for (int i = 0; i < stats.n_rrh(); ++i)
    {
        const RrhFilterTerms ft = filter_terms(surrogate, i, m);
        constant_ += ft.q_term;

        CMat psi_n = CMat::Zero(l, l);
        for (Eigen::Index t = 0; t < tau; ++t)
            psi_n += ft.psi.block(t * l, t * l, l, l);

        CMat psi_s = CMat::Zero(l, l);
        CMat x = CMat::Zero(m, l);
        for (int k = 0; k < pilots.n_ue(); ++k)
        {
            const double rho = stats.rho(i, k);
            if (rho == 0.0)
                continue;
            const auto s = pilots.s.col(k);
            // (s kron I)^H Psi (s kron I) and G' (s kron I)
            for (Eigen::Index t = 0; t < tau; ++t)
            {
                for (Eigen::Index u = 0; u < tau; ++u)
                    psi_s += (rho * std::conj(s(t)) * s(u)) * ft.psi.block(t * l, u * l, l, l);
                x += (rho * s(t)) * ft.g_prime[static_cast<size_t>(k)].middleCols(t * l, l);
            }
        }
        psi_s_.push_back(hermitian_part(psi_s));
        psi_n_.push_back(hermitian_part(psi_n));
        x_.push_back(std::move(x));
        q_.push_back(stats.q_corr[static_cast<size_t>(i)]);
    }
}

double CombinerObjective::rrh_value(int i, const CMat &w) const
{
    const auto idx = static_cast<size_t>(i);
    const CMat wq = w * q_[idx];
    return trace_product_real(wq * w.adjoint(), psi_s_[idx]) +
           noise_var_ * trace_product_real(w * w.adjoint(), psi_n_[idx]) -
           2.0 * trace_product_real(wq, x_[idx]);
}

CMat CombinerObjective::rrh_gradient(int i, const CMat &w) const
{
    const auto idx = static_cast<size_t>(i);
    return 2.0 * (psi_s_[idx] * w * q_[idx] + noise_var_ * (psi_n_[idx] * w) -
                  x_[idx].adjoint() * q_[idx]);
}

double CombinerObjective::rrh_lipschitz(int i) const
{
    const auto idx = static_cast<size_t>(i);
    return 2.0 * (psi_s_[idx].norm() * q_[idx].norm() + noise_var_ * psi_n_[idx].norm());
}

double CombinerObjective::value(const std::vector<CMat> &w) const
{
    double v = constant_;
    for (int i = 0; i < n_rrh(); ++i)
        v += rrh_value(i, w[static_cast<size_t>(i)]);
    return v;
}

// ---------------------------------------------------------------------------

namespace {

// One projected-gradient block (a UE's pilot or an RRH's combiner) advanced in
// lockstep with the others so the recorded total objective is monotone.
template <class Value, class Gradient, class Project>
struct PgBlock
{
    CMat x;
    double f = 0.0;
    double eta = 1.0;
    double scale = 1.0;
    bool active = true;

    // Returns the objective decrease; deactivates on convergence.
    double step(const Value &value, const Gradient &gradient, const Project &project, double tol)
    {
        const CMat g = gradient(x);
        if (g.norm() == 0.0)
        {
            active = false;
            return 0.0;
        }
        for (int bt = 0; bt < kMaxBacktracks; ++bt)
        {
            const CMat xn = project(x - eta * g);
            const CMat d = xn - x;
            const double dn2 = d.squaredNorm();
            if (dn2 == 0.0)
                break;
            const double fn = value(xn);
            const double model = f + (g.array().conjugate() * d.array()).sum().real() + dn2 / (2.0 * eta);
            if (fn <= model && fn <= f)
            {
                const double decrease = f - fn;
                x = xn;
                f = fn;
                if (decrease <= tol * (std::abs(fn) + scale))
                    active = false;
                eta *= 2.0;
                return decrease;
            }
            eta *= 0.5;
        }
        active = false;
        return 0.0;
    }
};

} // namespace

PilotSet pilot_subproblem(const PilotObjective &objective, const PilotSet &current,
                          const OptimizerConfig &config, InnerResult *info)
{
    PilotSet out = current;
    const int n_ue = current.n_ue();

    auto make_value = [&](int k) { return [&, k](const CMat &s) { return objective.ue_value(k, s.col(0)); }; };
    auto make_grad = [&](int k) { return [&, k](const CMat &s) { return CMat(objective.ue_gradient(k, s.col(0))); }; };
    auto make_proj = [&](int k) {
        const double radius = std::sqrt(current.tau() * current.power_budget[static_cast<size_t>(k)]);
        return [radius](const CMat &s) {
            const double n = s.norm();
            return n > radius ? CMat(s * (radius / n)) : s;
        };
    };
    using Block = PgBlock<decltype(make_value(0)), decltype(make_grad(0)), decltype(make_proj(0))>;

    std::vector<Block> blocks;
    double total = objective.value(current.s);
    for (int k = 0; k < n_ue; ++k)
    {
        Block b;
        b.x = current.s.col(k);
        b.f = objective.ue_value(k, b.x.col(0));
        const double lip = objective.ue_lipschitz(k);
        b.eta = lip > 0.0 ? 1.0 / lip : 1.0;
        b.scale = objective.ue_scale(k);
        blocks.push_back(std::move(b));
    }

    InnerResult local;
    local.objective.push_back(total);
    for (int it = 0; it < config.inner_max_iters; ++it)
    {
        bool any = false;
        for (int k = 0; k < n_ue; ++k)
        {
            auto &b = blocks[static_cast<size_t>(k)];
            if (!b.active)
                continue;
            any = true;
            total -= b.step(make_value(k), make_grad(k), make_proj(k), config.inner_tol);
        }
        if (!any)
            break;
        local.objective.push_back(total);
        ++local.iterations;
    }
    for (int k = 0; k < n_ue; ++k)
        out.s.col(k) = blocks[static_cast<size_t>(k)].x.col(0);
    if (info)
        *info = std::move(local);
    return out;
}

CombinerSet combiner_subproblem(const CombinerObjective &objective, const CombinerSet &current,
                                const OptimizerConfig &config, InnerResult *info)
{
    const int n_rrh = current.n_rrh();
    auto make_value = [&](int i) { return [&, i](const CMat &w) { return objective.rrh_value(i, w); }; };
    auto make_grad = [&](int i) { return [&, i](const CMat &w) { return objective.rrh_gradient(i, w); }; };
    auto proj = [](const CMat &w) {
        CMat p = w;
        for (Eigen::Index c = 0; c < p.cols(); ++c)
            for (Eigen::Index r = 0; r < p.rows(); ++r)
            {
                const double mag = std::abs(p(r, c));
                if (mag > 1.0)
                    p(r, c) /= mag;
            }
        return p;
    };
    using Block = PgBlock<decltype(make_value(0)), decltype(make_grad(0)), decltype(proj)>;

    std::vector<Block> blocks;
    double total = objective.value(current.w);
    for (int i = 0; i < n_rrh; ++i)
    {
        Block b;
        b.x = proj(current.w[static_cast<size_t>(i)]);
        b.f = objective.rrh_value(i, b.x);
        const double lip = objective.rrh_lipschitz(i);
        b.eta = lip > 0.0 ? 1.0 / lip : 1.0;
        b.scale = objective.scale() / n_rrh;
        blocks.push_back(std::move(b));
    }
    // Projection of an infeasible start changes the objective; restart the total.
    total = objective.value([&] {
        std::vector<CMat> w;
        for (const auto &b : blocks)
            w.push_back(b.x);
        return w;
    }());

    InnerResult local;
    local.objective.push_back(total);
    for (int it = 0; it < config.inner_max_iters; ++it)
    {
        bool any = false;
        for (int i = 0; i < n_rrh; ++i)
        {
            auto &b = blocks[static_cast<size_t>(i)];
            if (!b.active)
                continue;
            any = true;
            total -= b.step(make_value(i), make_grad(i), proj, config.inner_tol);
        }
        if (!any)
            break;
        local.objective.push_back(total);
        ++local.iterations;
    }

    CombinerSet out;
    out.mode = CombinerMode::relaxed;
    for (auto &b : blocks)
        out.w.push_back(std::move(b.x));
    if (info)
        *info = std::move(local);
    return out;
}

double next_step_size(double gamma, double decay)
{
    return gamma * (1.0 - decay * gamma);
}

// ---------------------------------------------------------------------------

namespace {

struct Evaluation
{
    MseReport mse;
    GlobalModel model;
    FilterSet filters;
};

Evaluation evaluate_design(const Design &d, const ChannelStats &stats, double noise_var)
{
    Evaluation e;
    e.model = build_global_model(d.pilots, d.combiners, stats, noise_var, AdcModel::one_bit);
    e.filters = mmse_filter(e.model);
    e.mse = analytic_mse(e.filters, e.model);
    return e;
}

} // namespace

int select_iterate(const OptimizerTrace &trace, int max_iters, bool keep_best)
{
    const int last = std::min<int>(max_iters, static_cast<int>(trace.sum_mse.size()) - 1);
    if (!keep_best)
        return last;
    int best = 0;
    for (int t = 1; t <= last; ++t)
        if (trace.sum_mse[static_cast<size_t>(t)] < trace.sum_mse[static_cast<size_t>(best)])
            best = t;
    return best;
}

OptimizerTrace run_algorithm1(const SystemConfig &config, const OptimizerConfig &opt,
                              Scheme scheme, const ChannelStats &stats, std::uint64_t seed)
{
    const double noise_var = config.noise_variance();
    Design d = init_design(config, seed);
    Evaluation ev = evaluate_design(d, stats, noise_var);

    OptimizerTrace trace;
    auto record = [&](const Design &design, const Evaluation &e) {
        trace.sum_mse.push_back(e.mse.sum);
        trace.per_ue.push_back(e.mse.per_ue);
        trace.iterates.push_back(design);
    };
    record(d, ev);
    FilterSet last_filters = ev.filters;
    std::vector<FilterSet> filters_by_iterate{ev.filters};

    const int max_iters = scheme == Scheme::fully_random ? 0 : opt.max_outer_iters;
    trace.termination = "max_iterations";
    double gamma = opt.gamma0;
    for (int t = 1; t <= max_iters; ++t)
    {
        const SurrogateState sur = make_surrogate(ev.model, ev.filters);
        if (optimizes_pilots(scheme))
        {
            const PilotObjective obj(d.combiners, sur, stats, noise_var);
            const PilotSet target = pilot_subproblem(obj, d.pilots, opt);
            d.pilots.s += gamma * (target.s - d.pilots.s);
        }
        if (optimizes_combiners(scheme))
        {
            const CombinerObjective obj(d.pilots, sur, stats, noise_var);
            const CombinerSet target = combiner_subproblem(obj, d.combiners, opt);
            CombinerSet mixed = d.combiners;
            for (size_t i = 0; i < mixed.w.size(); ++i)
                mixed.w[i] += gamma * (target.w[i] - mixed.w[i]);
            d.combiners = project_modulus(mixed);
        }

        const double previous = ev.mse.sum;
        ev = evaluate_design(d, stats, noise_var);
        record(d, ev);
        filters_by_iterate.push_back(ev.filters);
        trace.iterations = t;

        if (std::abs(ev.mse.sum - previous) <= opt.outer_tol * std::abs(previous))
        {
            trace.termination = "converged";
            break;
        }
        gamma = next_step_size(gamma, opt.gamma_decay);
    }
    if (max_iters == 0)
        trace.termination = "no_optimization";

    trace.selected = select_iterate(trace, trace.iterations, opt.keep_best);
    trace.design = trace.iterates[static_cast<size_t>(trace.selected)];
    trace.filters = filters_by_iterate[static_cast<size_t>(trace.selected)];
    return trace;
}

// ---------------------------------------------------------------------------

namespace {

// 2 (D^{-1} X P^2 - D^{-1} N D^{-1} X P) for f = tr(X P^2 X^H (X P X^H)^{-1})
CMat ratio_trace_gradient(const CMat &x, const CMat &p)
{
    const CMat xp = x * p;
    const CMat d = xp * x.adjoint();
    const CMat n = xp * xp.adjoint();
    const HermitianFactor factor(d, kHighResMaxCondition, "ratio-trace gradient");
    const CMat dinv_xp = factor.solve(xp);
    const CMat dinv_n = factor.solve(n);
    return 2.0 * (factor.solve(xp * p) - dinv_n * dinv_xp);
}

template <class F>
double safe_eval(F &&f)
{
    try
    {
        return f();
    }
    catch (const SingularMatrixError &)
    {
        return -std::numeric_limits<double>::infinity();
    }
}

// Monotone projected ascent shared by the high-resolution heuristics.
template <class Value, class Gradient, class Project>
double projected_ascent(CMat &x, const Value &value, const Gradient &gradient,
                        const Project &project, int max_iters, double tol,
                        std::vector<double> *trace)
{
    double f = value(x);
    if (trace)
        trace->push_back(f);
    double eta = -1.0;
    for (int it = 0; it < max_iters; ++it)
    {
        CMat g;
        try
        {
            g = gradient(x);
        }
        catch (const SingularMatrixError &)
        {
            break;
        }
        const double gmax = g.cwiseAbs().maxCoeff();
        if (!(gmax > 0.0))
            break;
        if (eta < 0.0)
            eta = 1.0 / gmax;
        bool accepted = false;
        for (int bt = 0; bt < kMaxBacktracks; ++bt)
        {
            CMat xn = project(CMat(x + eta * g));
            const double fn = safe_eval([&] { return value(xn); });
            if (fn > f)
            {
                const double gain = fn - f;
                x = std::move(xn);
                f = fn;
                if (trace)
                    trace->push_back(f);
                accepted = gain > tol * std::abs(f);
                eta *= 2.0;
                break;
            }
            eta *= 0.5;
        }
        if (!accepted)
            break;
    }
    return f;
}

CMat unit_modulus(const CMat &w)
{
    CombinerSet c;
    c.w.push_back(w);
    return project_modulus(c).w.front();
}

} // namespace

double highres_combiner_ascent(CMat &w, const CMat &q, int max_iters, double tol,
                               std::vector<double> *trace)
{
    const CMat q2 = q * q;
    return projected_ascent(
        w, [&](const CMat &x) { return trace_j(x, q); },
        [&](const CMat &x) {
            // Same ratio-trace form with the Hermitian weight Q.
            const CMat xq = x * q;
            const CMat d = xq * x.adjoint();
            const CMat n = xq * q * x.adjoint();
            const HermitianFactor factor(d, kHighResMaxCondition, "W Q W^H");
            return CMat(2.0 * (factor.solve(x * q2) - factor.solve(n) * factor.solve(xq)));
        },
        unit_modulus, max_iters, tol, trace);
}

CombinerSet highres_combiner_opt(const ChannelStats &stats, int l_chains,
                                 const OptimizerConfig &opt, std::uint64_t seed, int n_starts)
{
    SystemConfig shape;
    shape.n_rrh = 1;
    shape.l_chains = l_chains;
    shape.m_antennas = stats.m_antennas();

    CombinerSet out;
    out.mode = CombinerMode::strict;
    for (int i = 0; i < stats.n_rrh(); ++i)
    {
        const CMat &q = stats.q_corr[static_cast<size_t>(i)];
        double best = -std::numeric_limits<double>::infinity();
        CMat best_w;
        for (int start = 0; start < n_starts; ++start)
        {
            Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(start)}));
            CMat w = random_combiners(shape, rng).w.front();
            const double v = safe_eval([&] { return highres_combiner_ascent(w, q, opt.inner_max_iters, opt.inner_tol); });
            if (v > best)
            {
                best = v;
                best_w = w;
            }
        }
        if (!std::isfinite(best))
            throw SingularMatrixError("highres_combiner_opt: every start was singular",
                                      std::numeric_limits<double>::infinity());
        out.w.push_back(std::move(best_w));
    }
    return out;
}

double weighted_trace_k(const CMat &s_bar, const ChannelStats &stats,
                        const std::vector<double> &weights)
{
    double v = 0.0;
    for (int i = 0; i < stats.n_rrh(); ++i)
        v += weights[static_cast<size_t>(i)] * trace_k(s_bar, stats.rho.row(i).transpose());
    return v;
}

PilotSet highres_pilot_opt(const ChannelStats &stats, const std::vector<double> &weights,
                           int tau, double power_per_ue, const OptimizerConfig &opt,
                           std::vector<double> *trace)
{
    const int n_ue = stats.n_ue();
    if (tau > n_ue)
        throw std::invalid_argument("highres_pilot_opt: tau must not exceed the number of UEs");
    if (static_cast<int>(weights.size()) != stats.n_rrh())
        throw std::invalid_argument("highres_pilot_opt: need one weight per RRH");

    const double amp = std::sqrt(power_per_ue);
    auto dft_row = [&](int n) {
        Eigen::RowVectorXcd r(n_ue);
        for (int k = 0; k < n_ue; ++k)
            r(k) = std::polar(amp, -2.0 * std::numbers::pi * n * k / n_ue);
        return r;
    };

    // Greedy row selection; ties go to the lowest DFT index.
    CMat s(0, n_ue);
    std::vector<bool> used(static_cast<size_t>(n_ue), false);
    for (int t = 0; t < tau; ++t)
    {
        double best = -std::numeric_limits<double>::infinity();
        int best_n = -1;
        for (int n = 0; n < n_ue; ++n)
        {
            if (used[static_cast<size_t>(n)])
                continue;
            CMat cand(t + 1, n_ue);
            cand.topRows(t) = s;
            cand.row(t) = dft_row(n);
            const double v = safe_eval([&] { return weighted_trace_k(cand, stats, weights); });
            if (v > best + 1e-12 || best_n < 0)
            {
                best = v;
                best_n = n;
            }
        }
        used[static_cast<size_t>(best_n)] = true;
        CMat grown(t + 1, n_ue);
        grown.topRows(t) = s;
        grown.row(t) = dft_row(best_n);
        s = std::move(grown);
    }

    const double radius = std::sqrt(tau * power_per_ue);
    auto project = [radius](const CMat &x) {
        CMat p = x;
        for (Eigen::Index k = 0; k < p.cols(); ++k)
        {
            const double n = p.col(k).norm();
            if (n > radius)
                p.col(k) *= radius / n;
        }
        return p;
    };
    auto gradient = [&](const CMat &x) {
        CMat g = CMat::Zero(x.rows(), x.cols());
        for (int i = 0; i < stats.n_rrh(); ++i)
        {
            const RVec p = stats.rho.row(i).transpose();
            g += weights[static_cast<size_t>(i)] * ratio_trace_gradient(x, p.cast<cd>().asDiagonal().toDenseMatrix());
        }
        return g;
    };
    projected_ascent(
        s, [&](const CMat &x) { return weighted_trace_k(x, stats, weights); }, gradient, project,
        opt.inner_max_iters, opt.inner_tol, trace);

    PilotSet out;
    out.s = std::move(s);
    out.power_budget.assign(static_cast<size_t>(n_ue), power_per_ue);
    return out;
}

} // namespace cfran
