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

#include <iosfwd>
#include <string>
#include <vector>

#include "cfran/sweep.hpp"

namespace cfran {

inline constexpr const char *kCsvHeader =
    "scheme,sweep_name,sweep_value,placement,seed,sum_mse_analytic,sum_mse_empirical,iterations,wall_time_ms";

/// %.9g decimal, '\n' line endings, empty empirical field when unset.
void write_csv(std::ostream &out, const std::vector<ResultRecord> &records);

/// Throws std::runtime_error if the file cannot be written.
void emit_csv(const std::vector<ResultRecord> &records, const std::string &path);

/// Reads back what write_csv emits; per-UE values are not part of the format.
std::vector<ResultRecord> read_csv(std::istream &in);

} // namespace cfran
