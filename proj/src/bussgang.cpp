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

#include "cfran/bussgang.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cfran/errors.hpp"
#include "cfran/linalg.hpp"

namespace cfran {

namespace {

constexpr double kClampTol = 1e-9;

RVec checked_diagonal(const CMat &c_in)
{
    RVec d = c_in.diagonal().real();
    for (Eigen::Index r = 0; r < d.size(); ++r)
        if (!(d(r) > 0.0))
            throw DegenerateSignalError("one-bit front end: dimension " + std::to_string(r) +
                                        " has non-positive power " + std::to_string(d(r)));
    return d;
}

double clamped_arcsin(double x)
{
    if (std::abs(x) > 1.0 + kClampTol)
        throw InvalidCovarianceError("arcsine law: normalized correlation " + std::to_string(x) +
                                     " outside [-1, 1]");
    return std::asin(std::clamp(x, -1.0, 1.0));
}

} // namespace

CVec quantize_one_bit(const CVec &y)
{
    constexpr double level = std::numbers::sqrt2 / 2.0;
    CVec out(y.size());
    for (Eigen::Index r = 0; r < y.size(); ++r)
        out(r) = cd(y(r).real() >= 0.0 ? level : -level, y(r).imag() >= 0.0 ? level : -level);
    return out;
}

RVec bussgang_gain(const CMat &c_in)
{
    return kOneBitGain * checked_diagonal(c_in).cwiseSqrt().cwiseInverse();
}

CMat arcsine_covariance(const CMat &c_in)
{
    const RVec inv_sd = checked_diagonal(c_in).cwiseSqrt().cwiseInverse();
    const auto n = c_in.rows();
    CMat out(n, n);
    for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index r = 0; r < n; ++r)
        {
            if (r == c)
            {
                out(r, c) = 1.0;
                continue;
            }
            // Average the two mirrored entries so the result is exactly Hermitian.
            const cd v = 0.5 * (c_in(r, c) + std::conj(c_in(c, r))) * (inv_sd(r) * inv_sd(c));
            out(r, c) = (2.0 / std::numbers::pi) *
                        cd(clamped_arcsin(v.real()), clamped_arcsin(v.imag()));
        }
    return out;
}

CMat quantization_noise_cov(const CMat &c_in)
{
    return linearize_one_bit(c_in).c_q;
}

BussgangState linearize_one_bit(const CMat &c_in)
{
    BussgangState s;
    s.sigma_diag = checked_diagonal(c_in);
    s.a_gain = kOneBitGain * s.sigma_diag.cwiseSqrt().cwiseInverse();
    s.c_out = arcsine_covariance(c_in);
    const auto a = s.a_gain.cast<cd>().asDiagonal();
    s.c_q = hermitian_part(s.c_out - a * c_in * a);
    return s;
}

} // namespace cfran
