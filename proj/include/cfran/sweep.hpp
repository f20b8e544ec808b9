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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cfran/config.hpp"
#include "cfran/optimizer.hpp"

namespace cfran {

struct ResultRecord
{
    std::string scheme;
    std::string sweep_name;
    double sweep_value = 0.0;
    int placement = 0;
    std::uint64_t seed = 0;
    double sum_mse_analytic = 0.0;
    std::optional<double> sum_mse_empirical;
    std::vector<double> per_ue_mse;
    int iterations = 0;
    double wall_time_ms = 0.0;
};

struct SkippedPoint
{
    double sweep_value = 0.0;
    std::string reason;
};

struct SweepResult
{
    std::vector<ResultRecord> records;
    std::vector<Design> designs; // parallel to records
    std::vector<SkippedPoint> skipped;
};

struct RunOptions
{
    bool timing = true; // false: wall_time_ms written as 0 for byte-stable output
};

/// Seed of one record. It does not depend on the sweep value: placement p sees
/// the same geometry and random draws at every point of the sweep, so trends
/// along the axis are paired.
std::uint64_t record_seed(const ExperimentSpec &spec, double sweep_value, int placement);

/// Base configs with the sweep value applied.
SystemConfig config_at(const ExperimentSpec &spec, double sweep_value);
OptimizerConfig optimizer_at(const ExperimentSpec &spec, double sweep_value);

struct RecordRun
{
    ResultRecord record;
    Design design;
};

/// Recomputes one record from its seed alone.
RecordRun reproduce_record(const ExperimentSpec &spec, double sweep_value, int placement,
                           std::uint64_t seed, const RunOptions &options = {});

/// Every (sweep value, placement) of the spec. Work items run concurrently;
/// records come back in (sweep value, placement) order.
SweepResult run_sweep(const ExperimentSpec &spec, const RunOptions &options = {});

/// Single-threaded reference for run_sweep.
SweepResult run_sweep_serial(const ExperimentSpec &spec, const RunOptions &options = {});

/// Sorts records and designs together on (scheme, sweep_value, placement).
void canonical_sort(SweepResult &result);

} // namespace cfran
