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

#include "cfran/frontend.hpp"
#include "cfran/linalg.hpp"
#include "support/oracles.hpp"

using namespace cfran;

namespace {

PilotSet pilots_from(const CMat &s, double p = 1.0)
{
    PilotSet ps;
    ps.s = s;
    ps.power_budget.assign(static_cast<size_t>(s.cols()), p);
    return ps;
}

CMat unit_modulus(Eigen::Index l, Eigen::Index m, Rng &rng)
{
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    CMat w(l, m);
    for (Eigen::Index c = 0; c < m; ++c)
        for (Eigen::Index r = 0; r < l; ++r)
            w(r, c) = std::polar(1.0, u(rng));
    return w;
}

} // namespace

TEST_CASE("receive")
{
    SUBCASE("zero channels and zero noise")
    {
        const ChannelStats st = make_channel_stats(RMat::Zero(2, 2), {CMat::Identity(3, 3), CMat::Identity(3, 3)});
        Rng rng(1);
        const auto h = sample_channels(st, rng);
        Rng rng2(2);
        const auto y = receive(h, pilots_from(CMat::Ones(2, 2)), 0.0, rng2);
        REQUIRE(y.size() == 2);
        CHECK(y[0].isZero(0.0));
        CHECK(y[1].isZero(0.0));
    }
    SUBCASE("single UE, one symbol, noiseless")
    {
        const ChannelStats st = make_channel_stats(RMat::Ones(1, 1), {CMat::Identity(3, 3)});
        Rng rng(3);
        const auto h = sample_channels(st, rng);
        CMat s(1, 1);
        s(0, 0) = cd(0.6, -0.8);
        const auto y = receive(h, pilots_from(s), 0.0, rng);
        CHECK((y[0].col(0) - h.at(0, 0) * s(0, 0)).norm() < 1e-15);
    }
    SUBCASE("covariance of vec(Y)")
    {
        Rng g(4);
        const auto st = oracle::random_stats(1, 2, 2, g);
        const CMat s = oracle::gaussian_matrix(2, 2, g);
        const double nv = 0.3;
        CMat expected = nv * CMat::Identity(4, 4);
        for (int k = 0; k < 2; ++k)
            expected += st.rho(0, k) * kron(s.col(k) * s.col(k).adjoint(), st.q_corr[0]);

        Rng rng(5);
        const int n = 100000;
        CMat acc = CMat::Zero(4, 4);
        RMat sq = RMat::Zero(4, 4);
        for (int t = 0; t < n; ++t)
        {
            const auto h = sample_channels(st, rng);
            const CMat y = receive(h, pilots_from(s), nv, rng)[0];
            const CVec v = Eigen::Map<const CVec>(y.data(), y.size());
            const CMat o = v * v.adjoint();
            acc += o;
            sq += o.real().cwiseAbs2();
        }
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
            {
                const double mean = acc(a, b).real() / n;
                const double se = std::sqrt(std::max(sq(a, b) / n - mean * mean, 0.0) / n);
                CHECK(std::abs(mean - expected(a, b).real()) < 3.5 * se + 1e-12);
            }
    }
}

TEST_CASE("combine and vectorize")
{
    const CMat w = CMat::Ones(1, 4);
    const CMat y = CMat::Ones(4, 1);
    const CVec v = combine_and_vectorize(w, y);
    REQUIRE(v.size() == 1);
    CHECK(v(0).real() == doctest::Approx(4.0));

    Rng rng(6);
    const CMat y3 = oracle::gaussian_matrix(3, 2, rng);
    const CVec id = combine_and_vectorize(CMat::Identity(3, 3), y3);
    CHECK((id - Eigen::Map<const CVec>(y3.data(), 6)).norm() == 0.0);

    for (int rep = 0; rep < 10; ++rep)
    {
        const CMat wr = oracle::gaussian_matrix(2, 4, rng);
        const CMat yr = oracle::gaussian_matrix(4, 3, rng);
        const CVec lhs = combine_and_vectorize(wr, yr);
        const CVec rhs = kron(CMat::Identity(3, 3), wr) * Eigen::Map<const CVec>(yr.data(), yr.size());
        CHECK((lhs - rhs).norm() < 1e-13 * rhs.norm());
    }
}

TEST_CASE("noise covariance")
{
    Rng rng(7);
    const CMat w = unit_modulus(2, 4, rng);
    CHECK(noise_covariance(w, 3, 0.0).isZero(0.0));
    const CMat c = noise_covariance(w, 3, 0.5);
    for (int a = 0; a < 6; ++a)
        CHECK(c(a, a).real() == doctest::Approx(0.5 * 4));
    const CMat wr = oracle::gaussian_matrix(2, 3, rng);
    const CMat iw = kron(CMat::Identity(2, 2), wr);
    CHECK(oracle::fro_rel(noise_covariance(wr, 2, 0.7), 0.7 * iw * iw.adjoint()) < 1e-14);
}

TEST_CASE("signal covariance")
{
    Rng g(8);
    const auto st = oracle::random_stats(2, 3, 4, g);
    const CMat w = unit_modulus(2, 4, g);

    SUBCASE("zero pilots")
    {
        const CMat c = signal_covariance(pilots_from(CMat::Zero(2, 3)), w, st, 0, 1.0);
        CHECK(oracle::fro_rel(c, noise_covariance(w, 2, 1.0)) < 1e-15);
        for (int a = 0; a < 4; ++a)
            CHECK(c(a, a).real() == doctest::Approx(4.0));
    }

    const CMat s = oracle::gaussian_matrix(2, 3, g);
    const double nv = 0.2;
    const CMat c = signal_covariance(pilots_from(s), w, st, 1, nv);
    const CMat cz = noise_covariance(w, 2, nv);

    SUBCASE("hermitian, PSD, dominates noise")
    {
        CHECK(c == c.adjoint());
        CHECK(min_eigenvalue(c) >= -1e-10 * c.trace().real());
        CHECK(min_eigenvalue(c - cz) >= -1e-10 * c.trace().real());
    }
    SUBCASE("additivity and scaling")
    {
        CMat sa = s, sb = s;
        sa.col(2).setZero();
        sb.leftCols(2).setZero();
        const CMat ca = signal_covariance(pilots_from(sa), w, st, 1, nv) - cz;
        const CMat cb = signal_covariance(pilots_from(sb), w, st, 1, nv) - cz;
        CHECK(oracle::fro_rel(ca + cb, c - cz) < 1e-12);
        const CMat c3 = signal_covariance(pilots_from(3.0 * s), w, st, 1, nv) - cz;
        CHECK(oracle::fro_rel(c3, 9.0 * (c - cz)) < 1e-12);
    }
    SUBCASE("explicit blocks")
    {
        CMat ref = cz;
        for (int k = 0; k < 3; ++k)
        {
            const CMat b = kron(s.col(k), w);
            ref += st.rho(1, k) * b * st.q_corr[1] * b.adjoint();
        }
        CHECK(oracle::fro_rel(c, ref) < 1e-13);
        CHECK(oracle::fro_rel(pilot_combiner_block(s.col(1), w), kron(s.col(1), w)) == 0.0);
    }
    SUBCASE("Monte-Carlo covariance of the combined signal")
    {
        Rng rng(9);
        const int n = 100000;
        const auto d = c.rows();
        CMat acc = CMat::Zero(d, d);
        RMat sq = RMat::Zero(d, d);
        for (int t = 0; t < n; ++t)
        {
            const auto h = sample_channels(st, rng);
            const CMat y = receive(h, pilots_from(s), nv, rng)[1];
            const CVec v = combine_and_vectorize(w, y);
            const CMat o = v * v.adjoint();
            acc += o;
            sq += o.real().cwiseAbs2();
        }
        for (Eigen::Index a = 0; a < d; ++a)
            for (Eigen::Index b = 0; b < d; ++b)
            {
                const double mean = acc(a, b).real() / n;
                const double se = std::sqrt(std::max(sq(a, b) / n - mean * mean, 0.0) / n);
                CHECK(std::abs(mean - c(a, b).real()) < 3.5 * se + 1e-12);
            }
    }
}

TEST_CASE("feasibility predicates")
{
    PilotSet p = pilots_from(CMat::Ones(2, 2));
    CHECK(p.feasible());
    p.s(0, 0) = 1.1;
    CHECK_FALSE(p.feasible());
    CombinerSet w;
    w.w.push_back(CMat::Ones(2, 3));
    CHECK(w.feasible());
    w.w[0](0, 0) = 0.5;
    CHECK_FALSE(w.feasible());
    w.mode = CombinerMode::relaxed;
    CHECK(w.feasible());
    w.w[0](0, 0) = 1.01;
    CHECK_FALSE(w.feasible());
}
