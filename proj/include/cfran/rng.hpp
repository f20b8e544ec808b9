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

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

#include "cfran/types.hpp"

namespace cfran {

using Rng = std::mt19937_64;

/// Mixes a base seed with a list of keys into an independent stream seed
/// (splitmix64 finalizer applied per key).
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys);

/// Stable 64-bit hash of a short label, for naming sub-streams.
std::uint64_t label_key(std::string_view label);

/// Bit pattern of a double, so sweep values can key a stream.
std::uint64_t value_key(double value);

/// Circularly-symmetric complex Gaussian CN(0, variance): real and imaginary
/// parts are independent with variance / 2 each.
class ComplexGaussian
{
public:
    explicit ComplexGaussian(double variance = 1.0)
        : normal_(0.0, std::sqrt(variance / 2.0))
    {
    }

    cd operator()(Rng &rng) { return {normal_(rng), normal_(rng)}; }

    CMat matrix(Eigen::Index rows, Eigen::Index cols, Rng &rng);
    CVec vector(Eigen::Index n, Rng &rng);

private:
    std::normal_distribution<double> normal_;
};

} // namespace cfran
