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

#include <limits>
#include <span>
#include <string>

#include <Eigen/Cholesky>

#include "cfran/types.hpp"

namespace cfran {

/// (C + C^H) / 2
CMat hermitian_part(const CMat &c);

/// Hermitian PSD square root; eigenvalues below zero are clamped to 0.
CMat hermitian_sqrt(const CMat &c);

double min_eigenvalue(const CMat &c);
double max_eigenvalue(const CMat &c);

CMat kron(const CMat &a, const CMat &b);

/// Dense block-diagonal assembly; off-block entries are exactly zero.
CMat block_diag(std::span<const CMat> blocks);

/// Real part of tr(A B) without forming the product.
double trace_product_real(const CMat &a, const CMat &b);

/// Cholesky factorization of a Hermitian positive definite matrix.
///
/// If the plain factorization fails, a diagonal jitter of 1e-12 * trace / dim is
/// added once and the factorization retried; jittered() reports whether that
/// happened. When max_condition is finite the factor is also rejected if its
/// estimated condition number exceeds the bound, which is how rank-deficient
/// (rather than merely ill-scaled) systems are surfaced.
class HermitianFactor
{
public:
    explicit HermitianFactor(const CMat &c,
                             double max_condition = std::numeric_limits<double>::infinity(),
                             const std::string &context = "Hermitian solve");

    CMat solve(const CMat &rhs) const { return llt_.solve(rhs); }
    CMat inverse() const;
    bool jittered() const { return jittered_; }
    double condition_estimate() const { return condition_; }

private:
    Eigen::LLT<CMat> llt_;
    bool jittered_ = false;
    double condition_ = 1.0;
};

} // namespace cfran
