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

#include "cfran/rng.hpp"

#include <bit>

namespace cfran {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> keys)
{
    std::uint64_t h = splitmix64(base);
    for (auto key : keys)
        h = splitmix64(h ^ splitmix64(key + 0x632be59bd9b4e019ULL));
    return h;
}

std::uint64_t label_key(std::string_view label)
{
    // FNV-1a
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : label)
    {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t value_key(double value)
{
    if (value == 0.0)
        value = 0.0; // fold -0.0 onto +0.0
    return std::bit_cast<std::uint64_t>(value);
}

CMat ComplexGaussian::matrix(Eigen::Index rows, Eigen::Index cols, Rng &rng)
{
    CMat m(rows, cols);
    // Column-major fill order is part of the determinism contract.
    for (Eigen::Index c = 0; c < cols; ++c)
        for (Eigen::Index r = 0; r < rows; ++r)
            m(r, c) = (*this)(rng);
    return m;
}

CVec ComplexGaussian::vector(Eigen::Index n, Rng &rng)
{
    CVec v(n);
    for (Eigen::Index r = 0; r < n; ++r)
        v(r) = (*this)(rng);
    return v;
}

} // namespace cfran
