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

// cfran run --config <path> --out <csv> [--scheme S] [--seed N] [--empirical-trials K]
// Exit codes: 0 ok, 1 I/O failure, 2 config error, 3 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "cfran/config.hpp"
#include "cfran/csv.hpp"
#include "cfran/errors.hpp"
#include "cfran/sweep.hpp"

namespace {

int run(const std::string &config_path, const std::string &out_path,
        const std::map<std::string, std::string> &overrides, bool timing)
{
    std::ifstream in(config_path);
    if (!in)
        throw cfran::ConfigError("cannot read config file '" + config_path + "'");
    std::ostringstream text;
    text << in.rdbuf();

    auto map = cfran::read_config_map(text.str());
    for (const auto &[k, v] : overrides)
        cfran::apply_override(map, k, v);
    const cfran::ExperimentSpec spec = cfran::build_spec(map);

    const auto result = cfran::run_sweep(spec, {.timing = timing});
    for (const auto &s : result.skipped)
        std::fprintf(stderr, "skipped %s=%g: %s\n", std::string(cfran::axis_name(spec.sweep.axis)).c_str(),
                     s.sweep_value, s.reason.c_str());

    cfran::emit_csv(result.records, out_path);

    // Mean sum-MSE per sweep value.
    std::map<double, std::pair<double, int>> mean;
    for (const auto &r : result.records)
    {
        mean[r.sweep_value].first += r.sum_mse_analytic;
        ++mean[r.sweep_value].second;
    }
    for (const auto &[v, acc] : mean)
        std::printf("%s %s=%g mean_sum_mse=%.6g (%d placements)\n", std::string(cfran::scheme_name(spec.scheme)).c_str(),
                    std::string(cfran::axis_name(spec.sweep.axis)).c_str(), v, acc.first / acc.second, acc.second);
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Pilot and analog combiner design for cell-free uplinks with one-bit ADCs"};
    app.require_subcommand(1);

    auto *cmd = app.add_subcommand("run", "Run an experiment sweep and write CSV records");
    std::string config_path, out_path, scheme;
    std::uint64_t seed = 0;
    int trials = 0;
    bool no_timing = false;
    cmd->add_option("--config", config_path, "key=value experiment file")->required();
    cmd->add_option("--out", out_path, "CSV output path")->required();
    auto *scheme_opt = cmd->add_option("--scheme", scheme, "fully-random, combiner-opt, pilot-opt or joint");
    auto *seed_opt = cmd->add_option("--seed", seed, "base seed (system.rng_seed)");
    auto *trials_opt = cmd->add_option("--empirical-trials", trials, "Monte-Carlo trials per record (0 = off)");
    cmd->add_flag("--no-timing", no_timing, "write wall_time_ms as 0");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    std::map<std::string, std::string> overrides;
    if (*scheme_opt)
        overrides["experiment.scheme"] = scheme;
    if (*seed_opt)
        overrides["system.rng_seed"] = std::to_string(seed);
    if (*trials_opt)
        overrides["experiment.n_channel_trials"] = std::to_string(trials);

    try
    {
        return run(config_path, out_path, overrides, !no_timing);
    }
    catch (const cfran::ConfigError &e)
    {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }
    catch (const cfran::NumericalError &e)
    {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
