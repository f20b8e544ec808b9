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

#include "cfran/types.hpp"

namespace cfran {

/// Bussgang gain of the one-bit quantizer below relative to diag(C)^{-1/2}:
/// sqrt(2/pi) for output levels +-1/sqrt(2) per I/Q rail.
inline constexpr double kOneBitGain = 0.79788456080286535588; // sqrt(2/pi)

/// Linearization of one RRH's one-bit front end.
struct BussgangState
{
    RVec sigma_diag; // diagonal of the input covariance
    RVec a_gain;     // diagonal of A = sqrt(2/pi) Sigma^{-1/2}
    CMat c_out;      // output covariance (arcsine law), unit diagonal
    CMat c_q;        // quantization-noise covariance C_out - A C_in A^H
};

/// (sign(Re y) + j sign(Im y)) / sqrt(2) entrywise, with sign(0) = +1.
CVec quantize_one_bit(const CVec &y);

/// Diagonal of A = sqrt(2/pi) diag(c_in)^{-1/2}. Throws DegenerateSignalError if
/// any diagonal entry is not strictly positive.
RVec bussgang_gain(const CMat &c_in);

/// (2/pi) [ arcsin(S Re{C} S) + j arcsin(S Im{C} S) ] with S = diag(C)^{-1/2}.
/// Normalized entries within 1e-9 beyond +-1 are clamped; anything further out
/// raises InvalidCovarianceError.
CMat arcsine_covariance(const CMat &c_in);

/// arcsine_covariance(c_in) - A c_in A^H.
CMat quantization_noise_cov(const CMat &c_in);

BussgangState linearize_one_bit(const CMat &c_in);

} // namespace cfran
