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

#include "cfran/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "cfran/errors.hpp"

namespace cfran {

CMat hermitian_part(const CMat &c)
{
    return (c + c.adjoint()) * 0.5;
}

CMat hermitian_sqrt(const CMat &c)
{
    Eigen::SelfAdjointEigenSolver<CMat> eig(hermitian_part(c));
    RVec root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const CMat &v = eig.eigenvectors();
    return hermitian_part(v * root.cast<cd>().asDiagonal() * v.adjoint());
}

double min_eigenvalue(const CMat &c)
{
    Eigen::SelfAdjointEigenSolver<CMat> eig(hermitian_part(c), Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff();
}

double max_eigenvalue(const CMat &c)
{
    Eigen::SelfAdjointEigenSolver<CMat> eig(hermitian_part(c), Eigen::EigenvaluesOnly);
    return eig.eigenvalues().maxCoeff();
}

CMat kron(const CMat &a, const CMat &b)
{
    CMat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index r = 0; r < a.rows(); ++r)
        for (Eigen::Index c = 0; c < a.cols(); ++c)
            out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    return out;
}

CMat block_diag(std::span<const CMat> blocks)
{
    Eigen::Index rows = 0, cols = 0;
    for (const auto &b : blocks)
    {
        rows += b.rows();
        cols += b.cols();
    }
    CMat out = CMat::Zero(rows, cols);
    Eigen::Index r = 0, c = 0;
    for (const auto &b : blocks)
    {
        out.block(r, c, b.rows(), b.cols()) = b;
        r += b.rows();
        c += b.cols();
    }
    return out;
}

double trace_product_real(const CMat &a, const CMat &b)
{
    // tr(AB) = sum_{r,c} A(r,c) B(c,r)
    return (a.array() * b.transpose().array()).sum().real();
}

HermitianFactor::HermitianFactor(const CMat &c, double max_condition, const std::string &context)
{
    const CMat h = hermitian_part(c);
    llt_.compute(h);
    if (llt_.info() != Eigen::Success)
    {
        const double dim = static_cast<double>(std::max<Eigen::Index>(h.rows(), 1));
        const double jitter = 1e-12 * std::max(h.trace().real(), 0.0) / dim;
        CMat shifted = h;
        shifted.diagonal().array() += jitter;
        llt_.compute(shifted);
        jittered_ = true;
        if (llt_.info() != Eigen::Success || jitter == 0.0)
            throw SingularMatrixError(context + ": matrix is not positive definite",
                                      std::numeric_limits<double>::infinity());
    }

    // The squared ratio of Cholesky pivots bounds the spectral condition from below
    // and tracks it closely for the small dense systems used here.
    const RVec pivots = llt_.matrixLLT().diagonal().real().cwiseAbs();
    const double lo = pivots.minCoeff(), hi = pivots.maxCoeff();
    condition_ = lo > 0.0 ? (hi / lo) * (hi / lo) : std::numeric_limits<double>::infinity();
    if (condition_ > max_condition)
        throw SingularMatrixError(context + ": matrix is numerically singular", condition_);
}

CMat HermitianFactor::inverse() const
{
    const Eigen::Index n = llt_.matrixLLT().rows();
    return hermitian_part(llt_.solve(CMat::Identity(n, n)));
}

} // namespace cfran
