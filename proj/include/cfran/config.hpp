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

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "cfran/optimizer.hpp"
#include "cfran/scenario.hpp"
#include "cfran/types.hpp"

namespace cfran {

enum class SweepAxis { iterations, l_chains, tau, snr_db };

std::string_view axis_name(SweepAxis axis);
SweepAxis parse_axis(std::string_view name);
std::string_view adc_name(AdcModel adc);
AdcModel parse_adc(std::string_view name);

struct SweepSpec
{
    SweepAxis axis = SweepAxis::iterations;
    std::vector<double> values; // empty: iterations axis at optimizer.max_outer_iters
};

struct ExperimentSpec
{
    SystemConfig base;
    OptimizerConfig optimizer;
    Scheme scheme = Scheme::joint;
    SweepSpec sweep;
    int n_placements = 50;
    int n_channel_trials = 0;
    AdcModel adc = AdcModel::one_bit;

    /// Sweep values with the default filled in.
    std::vector<double> sweep_values() const;

    /// Throws ConfigError naming the offending key.
    void validate() const;
};

/// Flat key -> raw value map in file order of last assignment.
using ConfigMap = std::map<std::string, std::string, std::less<>>;

/// Parses "key = value" lines; '#' starts a comment. Duplicate keys are errors.
ConfigMap read_config_map(std::string_view text);

/// Applies an override, replacing any value from the file.
void apply_override(ConfigMap &map, std::string key, std::string value);

ExperimentSpec build_spec(const ConfigMap &map);

ExperimentSpec parse_config_text(std::string_view text);
ExperimentSpec parse_config(const std::string &path);

} // namespace cfran
