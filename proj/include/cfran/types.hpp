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

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace cfran {

using cd = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Index conventions used throughout:
//   k  user equipment (UE), 0 .. n_ue-1
//   i  remote radio head (RRH), 0 .. n_rrh-1
// Observations are stacked RRH-major with column-major vec() inside each RRH,
// so entry (l, t) of W_i Y_i sits at offset i*L*tau + t*L + l.

enum class AdcModel { one_bit, high_res_noiseless };

} // namespace cfran
