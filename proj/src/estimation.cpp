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

#include "cfran/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cfran/errors.hpp"
#include "cfran/linalg.hpp"

namespace cfran {

std::vector<RrhModel> build_rrh_models(const PilotSet &pilots, const CombinerSet &combiners,
                                       const ChannelStats &stats, double noise_var, AdcModel adc)
{
    const FrontEndStats fe = frontend_stats(pilots, combiners, stats, noise_var);
    std::vector<RrhModel> out;
    for (int i = 0; i < combiners.n_rrh(); ++i)
    {
        RrhModel m;
        m.b_block = fe.b_blocks[static_cast<size_t>(i)];
        m.c_noise = fe.c_noise[static_cast<size_t>(i)];
        const CMat &c_in = fe.c_signal[static_cast<size_t>(i)];
        if (adc == AdcModel::one_bit)
        {
            BussgangState bs = linearize_one_bit(c_in);
            m.a_gain = std::move(bs.a_gain);
            m.c_q = std::move(bs.c_q);
        }
        else
        {
            m.a_gain = RVec::Ones(c_in.rows());
            m.c_q = CMat::Zero(c_in.rows(), c_in.cols());
        }
        out.push_back(std::move(m));
    }
    return out;
}

GlobalModel assemble_global(std::span<const RrhModel> rrh, const ChannelStats &stats)
{
    if (rrh.empty())
        throw std::invalid_argument("assemble_global: no RRH models");
    const auto obs = rrh.front().a_gain.size();
    const auto n_ue = rrh.front().b_block.size();
    for (const auto &m : rrh)
    {
        if (m.a_gain.size() != obs || m.c_noise.rows() != obs || m.c_q.rows() != obs ||
            m.b_block.size() != n_ue)
            throw std::invalid_argument("assemble_global: RRH models have mismatched dimensions");
        for (const auto &b : m.b_block)
            if (b.rows() != obs || b.cols() != rrh.front().b_block.front().cols())
                throw std::invalid_argument("assemble_global: pilot/combiner block size mismatch");
    }
    if (static_cast<int>(rrh.size()) != stats.n_rrh() || static_cast<int>(n_ue) != stats.n_ue())
        throw std::invalid_argument("assemble_global: model and channel statistics disagree");

    GlobalModel g;
    g.rrh.assign(rrh.begin(), rrh.end());
    const auto n_rrh = static_cast<Eigen::Index>(rrh.size());
    g.a_gain.resize(obs * n_rrh);
    std::vector<CMat> noise, q;
    for (Eigen::Index i = 0; i < n_rrh; ++i)
    {
        g.a_gain.segment(i * obs, obs) = rrh[static_cast<size_t>(i)].a_gain;
        noise.push_back(rrh[static_cast<size_t>(i)].c_noise);
        q.push_back(rrh[static_cast<size_t>(i)].c_q);
    }
    g.c_noise = block_diag(noise);
    g.c_q = block_diag(q);
    for (size_t k = 0; k < n_ue; ++k)
    {
        std::vector<CMat> blocks;
        for (const auto &m : rrh)
            blocks.push_back(m.b_block[k]);
        g.b.push_back(block_diag(blocks));
    }
    g.theta = stats.theta;
    return g;
}

GlobalModel build_global_model(const PilotSet &pilots, const CombinerSet &combiners,
                               const ChannelStats &stats, double noise_var, AdcModel adc)
{
    const auto rrh = build_rrh_models(pilots, combiners, stats, noise_var, adc);
    return assemble_global(rrh, stats);
}

CMat observation_covariance(const GlobalModel &model)
{
    const auto a = model.a_gain.cast<cd>().asDiagonal();
    CMat c = a * model.c_noise * a;
    c += model.c_q;
    for (int l = 0; l < model.n_ue(); ++l)
    {
        const CMat ab = a * model.b[static_cast<size_t>(l)];
        c.noalias() += ab * model.theta[static_cast<size_t>(l)] * ab.adjoint();
    }
    return hermitian_part(c);
}

FilterSet mmse_filter(const GlobalModel &model)
{
    const HermitianFactor factor(observation_covariance(model),
                                 std::numeric_limits<double>::infinity(),
                                 "MMSE observation covariance");
    const auto a = model.a_gain.cast<cd>().asDiagonal();
    FilterSet out;
    for (int k = 0; k < model.n_ue(); ++k)
    {
        // F_k = (C^{-1} A B_k Theta_k)^H since C and Theta_k are Hermitian
        const CMat rhs = a * model.b[static_cast<size_t>(k)] * model.theta[static_cast<size_t>(k)];
        out.f.push_back(factor.solve(rhs).adjoint());
    }
    return out;
}

MseReport analytic_mse(const FilterSet &filters, const GlobalModel &model)
{
    const auto a = model.a_gain.cast<cd>().asDiagonal();
    std::vector<CMat> ab;
    for (const auto &b : model.b)
        ab.push_back(a * b);
    const CMat noise = a * model.c_noise * a;

    MseReport out;
    for (int k = 0; k < model.n_ue(); ++k)
    {
        const CMat &f = filters.f[static_cast<size_t>(k)];
        const CMat &theta_k = model.theta[static_cast<size_t>(k)];
        const CMat bias = f * ab[static_cast<size_t>(k)] - CMat::Identity(theta_k.rows(), theta_k.cols());
        cd e = (bias * theta_k * bias.adjoint()).trace();
        for (int l = 0; l < model.n_ue(); ++l)
        {
            if (l == k)
                continue;
            const CMat fab = f * ab[static_cast<size_t>(l)];
            e += (fab * model.theta[static_cast<size_t>(l)] * fab.adjoint()).trace();
        }
        e += (f * noise * f.adjoint()).trace();
        e += (f * model.c_q * f.adjoint()).trace();
        const double v = std::max(0.0, e.real());
        out.per_ue.push_back(v);
        out.sum += v;
    }
    return out;
}

namespace {

// Squared estimation error per UE for one simulated pilot phase.
void simulate_trial(const PilotSet &pilots, const CombinerSet &combiners, const FilterSet &filters,
                    const ChannelStats &stats, double noise_var, AdcModel adc, std::uint64_t seed,
                    int trial, double *err_out)
{
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(trial)}));
    const ChannelRealization h = sample_channels(stats, rng);
    const std::vector<CMat> y = receive(h, pilots, noise_var, rng);

    const auto block = combiners.w.front().rows() * pilots.tau();
    CVec y_hat(block * combiners.n_rrh());
    for (int i = 0; i < combiners.n_rrh(); ++i)
    {
        const CVec yi = combine_and_vectorize(combiners.w[static_cast<size_t>(i)], y[static_cast<size_t>(i)]);
        y_hat.segment(i * block, block) = adc == AdcModel::one_bit ? quantize_one_bit(yi) : yi;
    }
    for (int k = 0; k < pilots.n_ue(); ++k)
        err_out[k] = (filters.f[static_cast<size_t>(k)] * y_hat - h.stacked_ue(k)).squaredNorm();
}

EmpiricalMse reduce_trials(const std::vector<double> &err, int n_ue, int n_trials)
{
    EmpiricalMse out;
    out.n_trials = n_trials;
    std::vector<double> s1(static_cast<size_t>(n_ue), 0.0), s2(static_cast<size_t>(n_ue), 0.0);
    double t1 = 0.0, t2 = 0.0;
    for (int t = 0; t < n_trials; ++t)
    {
        double total = 0.0;
        for (int k = 0; k < n_ue; ++k)
        {
            const double e = err[static_cast<size_t>(t) * n_ue + k];
            s1[static_cast<size_t>(k)] += e;
            s2[static_cast<size_t>(k)] += e * e;
            total += e;
        }
        t1 += total;
        t2 += total * total;
    }
    const double n = n_trials;
    auto stderr_of = [n](double sum, double sumsq) {
        if (n < 2)
            return 0.0;
        const double mean = sum / n;
        const double var = std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0));
        return std::sqrt(var / n);
    };
    for (int k = 0; k < n_ue; ++k)
    {
        out.per_ue_mean.push_back(s1[static_cast<size_t>(k)] / n);
        out.per_ue_stderr.push_back(stderr_of(s1[static_cast<size_t>(k)], s2[static_cast<size_t>(k)]));
    }
    out.sum_mean = t1 / n;
    out.sum_stderr = stderr_of(t1, t2);
    return out;
}

void check_trials(int n_trials)
{
    if (n_trials < 1)
        throw std::invalid_argument("empirical_mse: need at least one trial");
}

} // namespace

EmpiricalMse empirical_mse(const PilotSet &pilots, const CombinerSet &combiners,
                           const FilterSet &filters, const ChannelStats &stats, double noise_var,
                           AdcModel adc, int n_trials, std::uint64_t seed)
{
    check_trials(n_trials);
    const int n_ue = pilots.n_ue();
    std::vector<double> err(static_cast<size_t>(n_trials) * n_ue);
#pragma omp parallel for schedule(static)
    for (int t = 0; t < n_trials; ++t)
        simulate_trial(pilots, combiners, filters, stats, noise_var, adc, seed, t,
                       err.data() + static_cast<size_t>(t) * n_ue);
    return reduce_trials(err, n_ue, n_trials);
}

EmpiricalMse empirical_mse_serial(const PilotSet &pilots, const CombinerSet &combiners,
                                  const FilterSet &filters, const ChannelStats &stats,
                                  double noise_var, AdcModel adc, int n_trials,
                                  std::uint64_t seed)
{
    check_trials(n_trials);
    const int n_ue = pilots.n_ue();
    std::vector<double> err(static_cast<size_t>(n_trials) * n_ue);
    for (int t = 0; t < n_trials; ++t)
        simulate_trial(pilots, combiners, filters, stats, noise_var, adc, seed, t,
                       err.data() + static_cast<size_t>(t) * n_ue);
    return reduce_trials(err, n_ue, n_trials);
}

// ---------------------------------------------------------------------------

namespace {

// N D^{-1} for Hermitian N and Hermitian positive definite D.
CMat ratio_matrix(const CMat &num, const CMat &den, const char *context)
{
    const HermitianFactor factor(den, kHighResMaxCondition, context);
    return factor.solve(num).adjoint(); // (D^{-1} N)^H = N D^{-1}
}

} // namespace

double trace_j(const CMat &w, const CMat &q)
{
    const CMat wq = w * q;
    return ratio_matrix(wq * wq.adjoint(), wq * w.adjoint(), "W Q W^H").trace().real();
}

double trace_k(const CMat &s_bar, const RVec &p)
{
    const CMat sp = s_bar * p.cast<cd>().asDiagonal();
    return ratio_matrix(sp * sp.adjoint(), sp * s_bar.adjoint(), "S P S^H").trace().real();
}

HighResStats highres_stats(const PilotSet &pilots, const CombinerSet &combiners,
                           const ChannelStats &stats)
{
    HighResStats out;
    for (int i = 0; i < combiners.n_rrh(); ++i)
    {
        const CMat &w = combiners.w[static_cast<size_t>(i)];
        const CMat &q = stats.q_corr[static_cast<size_t>(i)];
        const RVec p = stats.rho.row(i).transpose();
        out.r.push_back(kron(p.cast<cd>().asDiagonal().toDenseMatrix(), q));
        out.b_r.push_back(kron(pilots.s, w));

        const CMat wq = w * q;
        const HermitianFactor fj(wq * w.adjoint(), kHighResMaxCondition, "W Q W^H");
        out.j.push_back(fj.solve(wq * wq.adjoint()).adjoint());
        out.j_den_inv.push_back(fj.inverse());
        const CMat sp = pilots.s * p.cast<cd>().asDiagonal();
        const HermitianFactor fk(sp * pilots.s.adjoint(), kHighResMaxCondition, "S P S^H");
        out.k.push_back(fk.solve(sp * sp.adjoint()).adjoint());
        out.k_den_inv.push_back(fk.inverse());
    }
    return out;
}

namespace {

// (S P S^H)^{-1} kron (W Q W^H)^{-1}; each factor is checked on its own since
// the condition numbers multiply.
CMat highres_gram_inverse(const HighResStats &stats, int rrh)
{
    const auto idx = static_cast<size_t>(rrh);
    return kron(stats.k_den_inv[idx], stats.j_den_inv[idx]);
}

} // namespace

CVec highres_estimate(const HighResStats &stats, int rrh, const CVec &y)
{
    const CMat &r = stats.r[static_cast<size_t>(rrh)];
    const CMat &b = stats.b_r[static_cast<size_t>(rrh)];
    return r * b.adjoint() * (highres_gram_inverse(stats, rrh) * y);
}

double highres_summse(const HighResStats &stats)
{
    double total = 0.0;
    for (size_t i = 0; i < stats.r.size(); ++i)
        total += stats.r[i].trace().real() - stats.j[i].trace().real() * stats.k[i].trace().real();
    return total;
}

std::vector<double> highres_per_ue_mse(const HighResStats &stats, int n_ue)
{
    std::vector<double> out(static_cast<size_t>(n_ue), 0.0);
    for (size_t i = 0; i < stats.r.size(); ++i)
    {
        const CMat &r = stats.r[i];
        const CMat &b = stats.b_r[i];
        const CMat br = b * r;
        const CMat err = r - br.adjoint() * highres_gram_inverse(stats, static_cast<int>(i)) * br;
        const auto m = r.rows() / n_ue;
        for (int k = 0; k < n_ue; ++k)
            out[static_cast<size_t>(k)] += std::max(0.0, err.block(k * m, k * m, m, m).trace().real());
    }
    return out;
}

} // namespace cfran
