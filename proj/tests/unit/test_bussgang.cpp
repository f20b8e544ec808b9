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

#include "cfran/bussgang.hpp"
#include "cfran/errors.hpp"
#include "cfran/linalg.hpp"
#include "support/oracles.hpp"

using namespace cfran;

TEST_CASE("quantizer mapping")
{
    CVec y(3);
    y << cd(3.0, -2.0), cd(0.0, 0.0), cd(-1e-300, 5.0);
    const CVec q = quantize_one_bit(y);
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(q(0) - cd(r, -r)) < 1e-15);
    CHECK(std::abs(q(1) - cd(r, r)) < 1e-15);
    CHECK(std::abs(q(2) - cd(-r, r)) < 1e-15);
    for (Eigen::Index a = 0; a < q.size(); ++a)
        CHECK(std::abs(q(a)) == doctest::Approx(1.0));

    Rng rng(1);
    const CVec z = oracle::gaussian_matrix(8, 1, rng);
    CHECK(quantize_one_bit(z) == quantize_one_bit(3.7 * z));
}

TEST_CASE("Bussgang gain")
{
    const RVec a1 = bussgang_gain(CMat::Identity(3, 3));
    for (Eigen::Index j = 0; j < 3; ++j)
        CHECK(a1(j) == doctest::Approx(kOneBitGain));
    const RVec a4 = bussgang_gain(4.0 * CMat::Identity(2, 2));
    CHECK(a4(0) == doctest::Approx(kOneBitGain / 2.0));
    CHECK(kOneBitGain == doctest::Approx(std::sqrt(2.0 / std::numbers::pi)));

    CMat c1 = CMat::Identity(2, 2), c2 = CMat::Identity(2, 2);
    c1(0, 1) = 0.3;
    c1(1, 0) = 0.3;
    c2(0, 1) = cd(0.0, -0.6);
    c2(1, 0) = cd(0.0, 0.6);
    CHECK(bussgang_gain(c1) == bussgang_gain(c2));

    CMat bad = CMat::Identity(2, 2);
    bad(1, 1) = 0.0;
    CHECK_THROWS_AS(bussgang_gain(bad), DegenerateSignalError);
}

TEST_CASE("arcsine covariance closed forms")
{
    CHECK(oracle::fro_rel(arcsine_covariance(CMat::Identity(3, 3)), CMat::Identity(3, 3)) < 1e-15);

    for (double r : {-0.99, -0.5, 0.0, 0.5, 0.99, 1.0})
    {
        CMat c(2, 2);
        c << 1.0, r, r, 1.0;
        const CMat out = arcsine_covariance(c);
        CHECK(out(0, 1).real() == doctest::Approx(2.0 / std::numbers::pi * std::asin(r)));
        CHECK(out(0, 0).real() == doctest::Approx(1.0));
    }

    CMat c(2, 2);
    c << 1.0, cd(0.3, 0.4), cd(0.3, -0.4), 1.0;
    const CMat out = arcsine_covariance(c);
    CHECK(std::abs(out(0, 1) - (2.0 / std::numbers::pi) * cd(std::asin(0.3), std::asin(0.4))) < 1e-14);
    Rng rng(2);
    const CMat mc = oracle::mc_quantized_cov(c, 1000000, rng);
    CHECK(std::abs(mc(0, 1) - out(0, 1)) < 0.01);

    CMat over(2, 2);
    over << 1.0, 1.0 + 5e-10, 1.0 + 5e-10, 1.0;
    CHECK(arcsine_covariance(over)(0, 1).real() == doctest::Approx(1.0));
    over(0, 1) = over(1, 0) = 1.01;
    CHECK_THROWS_AS(arcsine_covariance(over), InvalidCovarianceError);
}

TEST_CASE("arcsine covariance random instances")
{
    Rng rng(3);
    for (int rep = 0; rep < 20; ++rep)
    {
        const CMat c = oracle::random_pd(1 + rep % 6, rng);
        const CMat out = arcsine_covariance(c);
        CHECK(oracle::fro_rel(out, oracle::arcsine_entrywise(c)) < 1e-13);
        CHECK(out == out.adjoint());
        for (Eigen::Index a = 0; a < out.rows(); ++a)
            CHECK(std::abs(out(a, a) - 1.0) < 1e-12);
    }
}

TEST_CASE("quantization noise covariance")
{
    const CMat cq = quantization_noise_cov(CMat::Identity(3, 3));
    const double d = 1.0 - 2.0 / std::numbers::pi;
    CHECK(oracle::fro_rel(cq, d * CMat::Identity(3, 3)) < 1e-14);

    CMat c1(2, 2);
    c1 << 1.0, 1.0, 1.0, 1.0;
    CHECK(quantization_noise_cov(c1)(0, 1).real() == doctest::Approx(d));

    for (double r : {-0.99, -0.5, 0.0, 0.5, 0.99})
    {
        CMat c(2, 2);
        c << 1.0, r, r, 1.0;
        CHECK(min_eigenvalue(quantization_noise_cov(c)) >= -1e-10);
    }

    Rng rng(4);
    for (int rep = 0; rep < 10; ++rep)
    {
        const CMat c = oracle::random_pd(5, rng) * (0.1 + rep);
        const BussgangState s = linearize_one_bit(c);
        const CMat a = s.a_gain.cast<cd>().asDiagonal();
        const CMat aca = a * c * a;
        for (Eigen::Index j = 0; j < 5; ++j)
        {
            CHECK(aca(j, j).real() == doctest::Approx(2.0 / std::numbers::pi));
            CHECK(s.c_q(j, j).real() == doctest::Approx(d));
        }
        CHECK(min_eigenvalue(s.c_q) >= -1e-8);
        CHECK(oracle::fro_rel(s.c_q, s.c_out - aca) < 1e-14);
    }
}

TEST_CASE("Bussgang cross-correlation is linear for Gaussian inputs")
{
    // E[x q(y)^H] = E[x y^H] A with x another linear map of the same source.
    Rng rng(5);
    const int n = 1000000;
    const CMat mix = oracle::gaussian_matrix(3, 4, rng);
    const CMat aux = oracle::gaussian_matrix(2, 4, rng);
    const CMat cyy = mix * mix.adjoint();
    const RVec a = bussgang_gain(cyy);
    const CMat expected = aux * mix.adjoint() * a.cast<cd>().asDiagonal();

    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    CMat acc = CMat::Zero(2, 3);
    RMat sq = RMat::Zero(2, 3);
    CVec w(4);
    for (int t = 0; t < n; ++t)
    {
        for (int j = 0; j < 4; ++j)
            w(j) = cd(g(rng), g(rng));
        const CVec x = aux * w;
        const CVec y = mix * w;
        CVec q(3);
        for (int j = 0; j < 3; ++j)
            q(j) = oracle::sign_rail(y(j));
        const CMat o = x * q.adjoint();
        acc += o;
        sq += o.real().cwiseAbs2();
    }
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 3; ++c)
        {
            const double mean = acc(r, c).real() / n;
            const double se = std::sqrt(std::max(sq(r, c) / n - mean * mean, 0.0) / n);
            CHECK(std::abs(mean - expected(r, c).real()) < 3.5 * se);
        }
}
