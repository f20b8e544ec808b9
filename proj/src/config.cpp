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

#include "cfran/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "cfran/errors.hpp"

namespace cfran {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view what)
{
    throw ConfigError(std::string(key) + ": cannot parse '" + std::string(value) + "' as " +
                      std::string(what));
}

template <class T>
T parse_number(std::string_view key, std::string_view value, std::string_view what)
{
    T out{};
    const auto *end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end)
        bad_value(key, value, what);
    return out;
}

int parse_int(std::string_view key, std::string_view value)
{
    return parse_number<int>(key, value, "an integer");
}

double parse_double(std::string_view key, std::string_view value)
{
    const double v = parse_number<double>(key, value, "a number");
    if (!std::isfinite(v))
        bad_value(key, value, "a finite number");
    return v;
}

bool parse_bool(std::string_view key, std::string_view value)
{
    if (value == "true" || value == "1")
        return true;
    if (value == "false" || value == "0")
        return false;
    bad_value(key, value, "a boolean (true/false)");
}

std::vector<double> parse_list(std::string_view key, std::string_view value)
{
    std::vector<double> out;
    while (true)
    {
        const auto comma = value.find(',');
        const auto item = trim(value.substr(0, comma));
        if (item.empty())
            bad_value(key, value, "a comma-separated list of numbers");
        out.push_back(parse_double(key, item));
        if (comma == std::string_view::npos)
            break;
        value.remove_prefix(comma + 1);
    }
    return out;
}

bool is_integer(double v)
{
    return std::floor(v) == v && std::abs(v) < 1e9;
}

const std::set<std::string, std::less<>> &known_keys()
{
    static const std::set<std::string, std::less<>> keys = {
        "system.n_ue", "system.n_rrh", "system.m_antennas", "system.l_chains", "system.tau",
        "system.power_per_ue", "system.snr_db", "system.noise_var", "system.area_side_m",
        "system.d_over_lambda", "system.delta_spread", "system.rng_seed",
        "optimizer.max_outer_iters", "optimizer.gamma0", "optimizer.gamma_decay",
        "optimizer.inner_max_iters", "optimizer.inner_tol", "optimizer.outer_tol",
        "optimizer.keep_best",
        "experiment.scheme", "experiment.n_placements", "experiment.n_channel_trials",
        "experiment.adc",
        "sweep.axis", "sweep.values"};
    return keys;
}

} // namespace

std::string_view axis_name(SweepAxis axis)
{
    switch (axis)
    {
    case SweepAxis::iterations: return "iterations";
    case SweepAxis::l_chains: return "l_chains";
    case SweepAxis::tau: return "tau";
    case SweepAxis::snr_db: return "snr_db";
    }
    return "?";
}

SweepAxis parse_axis(std::string_view name)
{
    for (auto a : {SweepAxis::iterations, SweepAxis::l_chains, SweepAxis::tau, SweepAxis::snr_db})
        if (axis_name(a) == name)
            return a;
    throw ConfigError("sweep.axis: unknown axis '" + std::string(name) +
                      "' (expected iterations, l_chains, tau or snr_db)");
}

std::string_view adc_name(AdcModel adc)
{
    return adc == AdcModel::one_bit ? "one-bit" : "high-res-noiseless";
}

AdcModel parse_adc(std::string_view name)
{
    if (name == "one-bit")
        return AdcModel::one_bit;
    if (name == "high-res-noiseless")
        return AdcModel::high_res_noiseless;
    throw ConfigError("experiment.adc: unknown model '" + std::string(name) +
                      "' (expected one-bit or high-res-noiseless)");
}

std::vector<double> ExperimentSpec::sweep_values() const
{
    if (!sweep.values.empty())
        return sweep.values;
    if (sweep.axis == SweepAxis::iterations)
        return {static_cast<double>(optimizer.max_outer_iters)};
    return {};
}

void ExperimentSpec::validate() const
{
    base.validate();
    optimizer.validate();
    if (n_placements < 1)
        throw ConfigError("experiment.n_placements must be >= 1");
    if (n_channel_trials < 0)
        throw ConfigError("experiment.n_channel_trials must be >= 0");

    const auto values = sweep_values();
    if (values.empty())
        throw ConfigError("sweep.values: axis " + std::string(axis_name(sweep.axis)) +
                          " needs at least one value");
    for (double v : values)
    {
        if (sweep.axis == SweepAxis::snr_db)
            continue;
        if (!is_integer(v))
            throw ConfigError("sweep.values: " + std::string(axis_name(sweep.axis)) +
                              " values must be integers");
        if (sweep.axis == SweepAxis::iterations ? v < 0 : v < 1)
            throw ConfigError("sweep.values: value out of range for axis " +
                              std::string(axis_name(sweep.axis)));
    }

    if (adc == AdcModel::high_res_noiseless)
    {
        if (sweep.axis == SweepAxis::snr_db)
            throw ConfigError("sweep.axis: snr_db has no effect with experiment.adc=high-res-noiseless");
        if (sweep.axis == SweepAxis::iterations && values.size() > 1)
            throw ConfigError("sweep.values: the high-resolution heuristics are not iterative; "
                              "give at most one iterations value");
        if (base.tau > base.n_ue)
            throw ConfigError("system.tau must not exceed system.n_ue with experiment.adc=high-res-noiseless");
    }
}

ConfigMap read_config_map(std::string_view text)
{
    ConfigMap map;
    int line_no = 0;
    while (!text.empty())
    {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key=value, got '" +
                              std::string(line) + "'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (!known_keys().contains(key))
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        if (value.empty())
            throw ConfigError(key + ": empty value");
        if (!map.emplace(key, value).second)
            throw ConfigError(key + ": assigned more than once");
    }
    return map;
}

void apply_override(ConfigMap &map, std::string key, std::string value)
{
    if (!known_keys().contains(key))
        throw ConfigError("unknown key '" + key + "'");
    map[std::move(key)] = std::move(value);
}

ExperimentSpec build_spec(const ConfigMap &map)
{
    ExperimentSpec spec;
    auto get = [&](std::string_view key) -> const std::string * {
        const auto it = map.find(key);
        return it == map.end() ? nullptr : &it->second;
    };
    auto required_int = [&](std::string_view key, int &out) {
        const auto *v = get(key);
        if (!v)
            throw ConfigError("missing required key " + std::string(key));
        out = parse_int(key, *v);
    };
    auto opt_int = [&](std::string_view key, int &out) {
        if (const auto *v = get(key))
            out = parse_int(key, *v);
    };
    auto opt_double = [&](std::string_view key, double &out) {
        if (const auto *v = get(key))
            out = parse_double(key, *v);
    };

    auto &s = spec.base;
    required_int("system.n_ue", s.n_ue);
    required_int("system.n_rrh", s.n_rrh);
    required_int("system.m_antennas", s.m_antennas);
    required_int("system.l_chains", s.l_chains);
    required_int("system.tau", s.tau);
    opt_double("system.power_per_ue", s.power_per_ue);
    opt_double("system.snr_db", s.snr_db);
    if (const auto *v = get("system.noise_var"))
        s.noise_var = parse_double("system.noise_var", *v);
    opt_double("system.area_side_m", s.area_side_m);
    opt_double("system.d_over_lambda", s.d_over_lambda);
    opt_double("system.delta_spread", s.delta_spread);
    if (const auto *v = get("system.rng_seed"))
        s.rng_seed = parse_number<std::uint64_t>("system.rng_seed", *v, "an unsigned integer");

    auto &o = spec.optimizer;
    opt_int("optimizer.max_outer_iters", o.max_outer_iters);
    opt_double("optimizer.gamma0", o.gamma0);
    opt_double("optimizer.gamma_decay", o.gamma_decay);
    opt_int("optimizer.inner_max_iters", o.inner_max_iters);
    opt_double("optimizer.inner_tol", o.inner_tol);
    opt_double("optimizer.outer_tol", o.outer_tol);
    if (const auto *v = get("optimizer.keep_best"))
        o.keep_best = parse_bool("optimizer.keep_best", *v);

    if (const auto *v = get("experiment.scheme"))
        spec.scheme = parse_scheme(*v);
    opt_int("experiment.n_placements", spec.n_placements);
    opt_int("experiment.n_channel_trials", spec.n_channel_trials);
    if (const auto *v = get("experiment.adc"))
        spec.adc = parse_adc(*v);

    const auto *axis = get("sweep.axis");
    const auto *values = get("sweep.values");
    if (axis)
        spec.sweep.axis = parse_axis(*axis);
    if (values)
        spec.sweep.values = parse_list("sweep.values", *values);
    if (axis && !values && spec.sweep.axis != SweepAxis::iterations)
        throw ConfigError("missing required key sweep.values (needed by sweep.axis)");
    if (values && !axis)
        throw ConfigError("missing required key sweep.axis (needed by sweep.values)");

    spec.validate();
    return spec;
}

ExperimentSpec parse_config_text(std::string_view text)
{
    return build_spec(read_config_map(text));
}

ExperimentSpec parse_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

} // namespace cfran
