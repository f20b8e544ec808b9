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

#include <doctest.h>

#include "cfran/errors.hpp"
#include "cfran/estimation.hpp"
#include "cfran/linalg.hpp"
#include "cfran/optimizer.hpp"
#include "support/oracles.hpp"

using namespace cfran;

namespace {

struct Instance
{
    SystemConfig config;
    ChannelStats stats;
    Design design;
    GlobalModel model;
    FilterSet filters;
};

Instance make_instance(const SystemConfig &c, std::uint64_t seed)
{
    Instance in;
    in.config = c;
    Rng rng(seed);
    in.stats = oracle::random_stats(c.n_rrh, c.n_ue, c.m_antennas, rng);
    in.design = init_design(c, seed + 1);
    in.model = build_global_model(in.design.pilots, in.design.combiners, in.stats, c.noise_variance(),
                                  AdcModel::one_bit);
    in.filters = mmse_filter(in.model);
    return in;
}

} // namespace

TEST_CASE("global assembly")
{
    const auto in1 = make_instance(oracle::small_config(2, 1, 3, 2, 2), 1);
    const auto rrh1 = build_rrh_models(in1.design.pilots, in1.design.combiners, in1.stats,
                                       in1.config.noise_variance(), AdcModel::one_bit);
    CHECK(in1.model.a_gain == rrh1[0].a_gain);
    CHECK(in1.model.c_q == rrh1[0].c_q);
    CHECK(in1.model.b[1] == rrh1[0].b_block[1]);

    const auto in = make_instance(oracle::small_config(3, 2, 3, 2, 2), 2);
    const auto lt = 4;
    CHECK(in.model.obs_dim() == 2 * lt);
    CHECK(in.model.c_q.block(0, lt, lt, lt).isZero(0.0));
    CHECK(in.model.c_noise.block(lt, 0, lt, lt).isZero(0.0));
    CHECK(in.model.b[0].block(0, 3, lt, 3).isZero(0.0));

    Rng rng(3);
    const CVec x = oracle::gaussian_matrix(2 * lt, 1, rng);
    const auto rrh = build_rrh_models(in.design.pilots, in.design.combiners, in.stats,
                                      in.config.noise_variance(), AdcModel::one_bit);
    CVec blockwise(2 * lt);
    blockwise.head(lt) = rrh[0].c_q * x.head(lt);
    blockwise.tail(lt) = rrh[1].c_q * x.tail(lt);
    CHECK((in.model.c_q * x - blockwise).norm() < 1e-14 * blockwise.norm());

    std::vector<RrhModel> mismatched = rrh;
    mismatched[1].c_q = CMat::Identity(2, 2);
    CHECK_THROWS_AS(assemble_global(mismatched, in.stats), std::invalid_argument);
}

TEST_CASE("observation covariance equals the dense assembly")
{
    const auto in = make_instance(oracle::small_config(3, 2, 3, 2, 2), 4);
    CHECK(oracle::fro_rel(observation_covariance(in.model), oracle::dense_observation_cov(in.model)) < 1e-12);
}

TEST_CASE("MMSE filter")
{
    SUBCASE("zero pathloss gives zero filters")
    {
        Rng rng(5);
        const auto base = oracle::random_stats(1, 2, 2, rng);
        const ChannelStats st = make_channel_stats(RMat::Zero(1, 2), base.q_corr);
        const auto c = oracle::small_config(2, 1, 2, 2, 2);
        const Design d = init_design(c, 6);
        const auto m = build_global_model(d.pilots, d.combiners, st, c.noise_variance(), AdcModel::one_bit);
        for (const auto &f : mmse_filter(m).f)
            CHECK(f.isZero(0.0));
    }

    SUBCASE("perturbation optimality")
    {
        const auto in = make_instance(oracle::small_config(2, 1, 2, 2, 2), 7);
        Rng rng(8);
        for (int k = 0; k < 2; ++k)
        {
            const CMat &f = in.filters.f[static_cast<size_t>(k)];
            const double e0 = oracle::dense_mse(f, in.model, k);
            for (int rep = 0; rep < 100; ++rep)
            {
                const double scale = std::pow(10.0, -3.0 + 3.0 * rep / 100.0);
                const CMat df = scale * oracle::gaussian_matrix(f.rows(), f.cols(), rng);
                CHECK(e0 <= oracle::dense_mse(f + df, in.model, k) + 1e-12);
            }
        }
    }

    SUBCASE("closed form identity")
    {
        for (std::uint64_t seed = 10; seed < 15; ++seed)
        {
            const auto in = make_instance(oracle::small_config(4, 2, 3, 2, 3), seed);
            const auto rep = analytic_mse(in.filters, in.model);
            for (int k = 0; k < 4; ++k)
                CHECK(oracle::rel_err(rep.per_ue[static_cast<size_t>(k)], oracle::closed_form_mse(in.model, k)) < 1e-8);
        }
    }
}

TEST_CASE("analytic MSE")
{
    const auto in = make_instance(oracle::small_config(3, 2, 3, 2, 2), 20);

    SUBCASE("four-term form matches dense evaluation for arbitrary filters")
    {
        Rng rng(21);
        FilterSet f;
        for (const auto &fk : in.filters.f)
            f.f.push_back(oracle::gaussian_matrix(fk.rows(), fk.cols(), rng));
        const auto rep = analytic_mse(f, in.model);
        double sum = 0.0;
        for (int k = 0; k < 3; ++k)
        {
            CHECK(oracle::rel_err(rep.per_ue[static_cast<size_t>(k)],
                                  oracle::dense_mse(f.f[static_cast<size_t>(k)], in.model, k)) < 1e-10);
            sum += rep.per_ue[static_cast<size_t>(k)];
        }
        CHECK(rep.sum == doctest::Approx(sum).epsilon(1e-14));
    }

    SUBCASE("zero filters give tr(Theta)")
    {
        FilterSet f;
        for (const auto &fk : in.filters.f)
            f.f.push_back(CMat::Zero(fk.rows(), fk.cols()));
        const auto rep = analytic_mse(f, in.model);
        for (int k = 0; k < 3; ++k)
            CHECK(rep.per_ue[static_cast<size_t>(k)] ==
                  doctest::Approx(in.stats.theta[static_cast<size_t>(k)].trace().real()));
    }

    SUBCASE("never above tr(Theta)")
    {
        const auto rep = analytic_mse(in.filters, in.model);
        for (int k = 0; k < 3; ++k)
        {
            CHECK(rep.per_ue[static_cast<size_t>(k)] >= 0.0);
            CHECK(rep.per_ue[static_cast<size_t>(k)] <= in.stats.theta[static_cast<size_t>(k)].trace().real() + 1e-12);
        }
    }

    SUBCASE("very large noise")
    {
        SystemConfig c = in.config;
        c.noise_var = 1e6;
        const auto m = build_global_model(in.design.pilots, in.design.combiners, in.stats, 1e6, AdcModel::one_bit);
        const auto rep = analytic_mse(mmse_filter(m), m);
        for (int k = 0; k < 3; ++k)
            CHECK(oracle::rel_err(rep.per_ue[static_cast<size_t>(k)],
                                  in.stats.theta[static_cast<size_t>(k)].trace().real()) < 0.01);
    }
}

TEST_CASE("empirical MSE")
{
    const auto in = make_instance(oracle::small_config(3, 2, 3, 2, 2), 30);
    const double nv = in.config.noise_variance();

    SUBCASE("agrees with the analytic value")
    {
        const auto emp = empirical_mse(in.design.pilots, in.design.combiners, in.filters, in.stats, nv,
                                       AdcModel::one_bit, 40000, 31);
        const auto ana = analytic_mse(in.filters, in.model);
        CHECK(std::abs(emp.sum_mean - ana.sum) < 4.0 * emp.sum_stderr);
    }
    SUBCASE("zero filters")
    {
        FilterSet f;
        for (const auto &fk : in.filters.f)
            f.f.push_back(CMat::Zero(fk.rows(), fk.cols()));
        const auto emp = empirical_mse(in.design.pilots, in.design.combiners, f, in.stats, nv,
                                       AdcModel::one_bit, 20000, 32);
        for (int k = 0; k < 3; ++k)
            CHECK(std::abs(emp.per_ue_mean[static_cast<size_t>(k)] -
                           in.stats.theta[static_cast<size_t>(k)].trace().real()) <
                  3.5 * emp.per_ue_stderr[static_cast<size_t>(k)]);
    }
    SUBCASE("deterministic and equal to the serial reference")
    {
        const auto a = empirical_mse(in.design.pilots, in.design.combiners, in.filters, in.stats, nv,
                                     AdcModel::one_bit, 3000, 33);
        const auto b = empirical_mse(in.design.pilots, in.design.combiners, in.filters, in.stats, nv,
                                     AdcModel::one_bit, 3000, 33);
        const auto c = empirical_mse_serial(in.design.pilots, in.design.combiners, in.filters, in.stats, nv,
                                            AdcModel::one_bit, 3000, 33);
        CHECK(a.sum_mean == b.sum_mean);
        CHECK(a.sum_mean == c.sum_mean);
        CHECK(a.per_ue_mean == c.per_ue_mean);
        CHECK(a.sum_stderr == c.sum_stderr);
    }
    SUBCASE("high-resolution noiseless path")
    {
        const auto m = build_global_model(in.design.pilots, in.design.combiners, in.stats, 0.0,
                                          AdcModel::high_res_noiseless);
        const auto f = mmse_filter(m);
        const auto emp = empirical_mse(in.design.pilots, in.design.combiners, f, in.stats, 0.0,
                                       AdcModel::high_res_noiseless, 20000, 34);
        const auto ana = analytic_mse(f, m);
        CHECK(std::abs(emp.sum_mean - ana.sum) < 4.0 * emp.sum_stderr + 1e-9);
    }
}

// ---------------------------------------------------------------------------

namespace {

struct HighResInstance
{
    ChannelStats stats;
    PilotSet pilots;
    CombinerSet combiners;
};

HighResInstance highres_instance(int n_ue, int n_rrh, int m, int l, int tau, std::uint64_t seed)
{
    HighResInstance h;
    Rng rng(seed);
    h.stats = oracle::random_stats(n_rrh, n_ue, m, rng);
    h.pilots.s = oracle::gaussian_matrix(tau, n_ue, rng);
    h.pilots.power_budget.assign(static_cast<size_t>(n_ue), 10.0);
    h.combiners.mode = CombinerMode::relaxed;
    for (int i = 0; i < n_rrh; ++i)
        h.combiners.w.push_back(oracle::gaussian_matrix(l, m, rng));
    return h;
}

} // namespace

TEST_CASE("high-resolution decomposition")
{
    SUBCASE("random instance")
    {
        const auto h = highres_instance(3, 2, 3, 2, 2, 40);
        const auto hs = highres_stats(h.pilots, h.combiners, h.stats);
        const double direct = oracle::direct_highres_summse(h.pilots, h.combiners, h.stats);
        CHECK(oracle::rel_err(highres_summse(hs), direct) < 1e-8);
        double per_ue = 0.0;
        for (double v : highres_per_ue_mse(hs, 3))
            per_ue += v;
        CHECK(oracle::rel_err(per_ue, direct) < 1e-8);
        for (size_t i = 0; i < hs.j.size(); ++i)
        {
            CHECK(std::abs(hs.j[i].trace().imag()) < 1e-9);
            CHECK(std::abs(hs.k[i].trace().imag()) < 1e-9);
            CHECK(min_eigenvalue(hs.r[i]) >= -1e-12);
        }
    }

    SUBCASE("equal pathloss across users")
    {
        auto h = highres_instance(3, 2, 3, 2, 2, 41);
        RMat rho = RMat::Constant(2, 3, 0.4);
        h.stats = make_channel_stats(rho, h.stats.q_corr);
        const auto hs = highres_stats(h.pilots, h.combiners, h.stats);
        CHECK(oracle::rel_err(highres_summse(hs), oracle::direct_highres_summse(h.pilots, h.combiners, h.stats)) < 1e-8);
    }

    SUBCASE("square invertible case is exact")
    {
        auto h = highres_instance(3, 2, 3, 3, 3, 42);
        const auto hs = highres_stats(h.pilots, h.combiners, h.stats);
        double tr_r = 0.0;
        for (const auto &r : hs.r)
            tr_r += r.trace().real();
        CHECK(std::abs(highres_summse(hs)) < 1e-8 * tr_r);

        Rng rng(43);
        ChannelRealization ch = sample_channels(h.stats, rng);
        for (int i = 0; i < 2; ++i)
        {
            const CVec y = hs.b_r[static_cast<size_t>(i)] * ch.stacked_rrh(i);
            const CVec est = highres_estimate(hs, i, y);
            CHECK((est - ch.stacked_rrh(i)).norm() < 1e-8 * ch.stacked_rrh(i).norm());
        }
    }

    SUBCASE("single user scalar projection")
    {
        auto h = highres_instance(1, 1, 3, 1, 1, 44);
        const auto hs = highres_stats(h.pilots, h.combiners, h.stats);
        Rng rng(45);
        const CVec hv = sample_channels(h.stats, rng).stacked_rrh(0);
        const CVec y = hs.b_r[0] * hv;
        // R b^H y / (b R b^H) with b the 1 x M row s w
        const CMat b = h.pilots.s(0, 0) * h.combiners.w[0];
        const CMat r = h.stats.rho(0, 0) * h.stats.q_corr[0];
        const CVec expected = r * b.adjoint() * y / (b * r * b.adjoint())(0, 0);
        CHECK((highres_estimate(hs, 0, y) - expected).norm() < 1e-12 * expected.norm());

        // Consistent scaling of the observation map and the data.
        HighResStats scaled = highres_stats(h.pilots, h.combiners, h.stats);
        PilotSet p2 = h.pilots;
        p2.s *= 2.5;
        scaled = highres_stats(p2, h.combiners, h.stats);
        CHECK((highres_estimate(scaled, 0, 2.5 * y) - highres_estimate(hs, 0, y)).norm() < 1e-12 * expected.norm());
    }

    SUBCASE("rank deficiency is reported")
    {
        auto h = highres_instance(2, 1, 3, 2, 3, 46);
        CHECK_THROWS_AS(highres_stats(h.pilots, h.combiners, h.stats), SingularMatrixError);
    }

    SUBCASE("an extra pilot symbol never hurts")
    {
        for (std::uint64_t seed = 50; seed < 55; ++seed)
        {
            auto h = highres_instance(4, 2, 3, 2, 2, seed);
            const double before = highres_summse(highres_stats(h.pilots, h.combiners, h.stats));
            Rng rng(seed + 100);
            PilotSet p3 = h.pilots;
            p3.s.conservativeResize(3, Eigen::NoChange);
            p3.s.row(2) = oracle::gaussian_matrix(1, 4, rng);
            const double after = highres_summse(highres_stats(p3, h.combiners, h.stats));
            CHECK(after <= before + 1e-10);
        }
    }
}

TEST_CASE("trace J properties")
{
    Rng rng(60);
    // Q = I: tr(J) = L for any full-rank W.
    for (int rep = 0; rep < 5; ++rep)
    {
        CMat w(2, 4);
        std::uniform_real_distribution<double> u(0.0, 6.283185307179586);
        for (int c = 0; c < 4; ++c)
            for (int r = 0; r < 2; ++r)
                w(r, c) = std::polar(1.0, u(rng));
        CHECK(trace_j(w, CMat::Identity(4, 4)) == doctest::Approx(2.0));
    }
    // L = M, W = I: tr(J) = tr(Q).
    const auto st = oracle::random_stats(1, 1, 4, rng);
    CHECK(trace_j(CMat::Identity(4, 4), st.q_corr[0]) == doctest::Approx(st.q_corr[0].trace().real()));
    // Invariance to an invertible left factor.
    const CMat w = oracle::gaussian_matrix(2, 4, rng);
    const CMat t = oracle::gaussian_matrix(2, 2, rng) + 2.0 * CMat::Identity(2, 2);
    CHECK(trace_j(t * w, st.q_corr[0]) == doctest::Approx(trace_j(w, st.q_corr[0])).epsilon(1e-9));
}
