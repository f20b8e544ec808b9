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

#include "cfran/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <numeric>

#include "cfran/errors.hpp"

namespace cfran {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

ResultRecord base_record(const ExperimentSpec &spec, double value, int placement, std::uint64_t seed)
{
    ResultRecord r;
    r.scheme = std::string(scheme_name(spec.scheme));
    r.sweep_name = std::string(axis_name(spec.sweep.axis));
    r.sweep_value = value;
    r.placement = placement;
    r.seed = seed;
    return r;
}

void set_mse(ResultRecord &r, std::vector<double> per_ue)
{
    r.per_ue_mse = std::move(per_ue);
    r.sum_mse_analytic = std::accumulate(r.per_ue_mse.begin(), r.per_ue_mse.end(), 0.0);
}

ChannelStats placement_stats(const SystemConfig &cfg, std::uint64_t seed)
{
    Rng rng(derive_seed(seed, {label_key("geometry")}));
    return make_channel_stats(cfg, sample_geometry(cfg, rng));
}

void add_empirical(const ExperimentSpec &spec, ResultRecord &r, const Design &d,
                   const FilterSet &filters, const ChannelStats &stats, double noise_var)
{
    if (spec.n_channel_trials <= 0)
        return;
    const auto emp = empirical_mse(d.pilots, d.combiners, filters, stats, noise_var, spec.adc,
                                   spec.n_channel_trials, derive_seed(r.seed, {label_key("empirical")}));
    r.sum_mse_empirical = emp.sum_mean;
}

// One-bit runs for all budgets of one placement (iterations axis) or one
// record (other axes).
std::vector<RecordRun> run_one_bit(const ExperimentSpec &spec, const std::vector<double> &values,
                                   int placement, std::uint64_t seed, const RunOptions &options)
{
    const auto start = Clock::now();
    const double top = *std::max_element(values.begin(), values.end());
    const SystemConfig cfg = config_at(spec, top);
    const OptimizerConfig opt = optimizer_at(spec, top);
    const ChannelStats stats = placement_stats(cfg, seed);
    const OptimizerTrace trace =
        run_algorithm1(cfg, opt, spec.scheme, stats, derive_seed(seed, {label_key("design")}));
    const double run_ms = elapsed_ms(start);

    std::vector<RecordRun> out;
    for (double v : values)
    {
        const auto rec_start = Clock::now();
        const int budget = spec.sweep.axis == SweepAxis::iterations ? static_cast<int>(v) : trace.iterations;
        const int sel = spec.sweep.axis == SweepAxis::iterations
                            ? select_iterate(trace, budget, opt.keep_best)
                            : trace.selected;
        RecordRun rr;
        rr.record = base_record(spec, v, placement, seed);
        rr.design = trace.iterates[static_cast<size_t>(sel)];
        set_mse(rr.record, trace.per_ue[static_cast<size_t>(sel)]);
        rr.record.iterations = std::min(budget, trace.iterations);
        if (spec.n_channel_trials > 0)
        {
            const GlobalModel m = build_global_model(rr.design.pilots, rr.design.combiners, stats,
                                                     cfg.noise_variance(), AdcModel::one_bit);
            add_empirical(spec, rr.record, rr.design, mmse_filter(m), stats, cfg.noise_variance());
        }
        rr.record.wall_time_ms = options.timing ? run_ms + elapsed_ms(rec_start) : 0.0;
        out.push_back(std::move(rr));
    }
    return out;
}

RecordRun run_high_res(const ExperimentSpec &spec, double value, int placement, std::uint64_t seed,
                       const RunOptions &options)
{
    const auto start = Clock::now();
    const SystemConfig cfg = config_at(spec, value);
    const OptimizerConfig opt = optimizer_at(spec, value);
    const ChannelStats stats = placement_stats(cfg, seed);

    Design d = init_design(cfg, derive_seed(seed, {label_key("design")}));
    if (optimizes_combiners(spec.scheme))
        d.combiners = highres_combiner_opt(stats, cfg.l_chains, opt,
                                           derive_seed(seed, {label_key("highres-combiner")}));
    if (optimizes_pilots(spec.scheme))
    {
        std::vector<double> weights;
        for (int i = 0; i < cfg.n_rrh; ++i)
            weights.push_back(trace_j(d.combiners.w[static_cast<size_t>(i)], stats.q_corr[static_cast<size_t>(i)]));
        d.pilots = highres_pilot_opt(stats, weights, cfg.tau, cfg.power_per_ue, opt);
    }

    RecordRun rr;
    rr.record = base_record(spec, value, placement, seed);
    set_mse(rr.record, highres_per_ue_mse(highres_stats(d.pilots, d.combiners, stats), cfg.n_ue));
    if (spec.n_channel_trials > 0)
    {
        const GlobalModel m = build_global_model(d.pilots, d.combiners, stats, 0.0, AdcModel::high_res_noiseless);
        add_empirical(spec, rr.record, d, mmse_filter(m), stats, 0.0);
    }
    rr.design = std::move(d);
    rr.record.wall_time_ms = options.timing ? elapsed_ms(start) : 0.0;
    return rr;
}

struct WorkItem
{
    std::vector<double> values; // several only for the iterations axis
    int placement = 0;
};

std::vector<RecordRun> run_item(const ExperimentSpec &spec, const WorkItem &item,
                                const RunOptions &options)
{
    const std::uint64_t seed = record_seed(spec, item.values.front(), item.placement);
    if (spec.adc == AdcModel::high_res_noiseless)
        return {run_high_res(spec, item.values.front(), item.placement, seed, options)};
    return run_one_bit(spec, item.values, item.placement, seed, options);
}

struct Plan
{
    std::vector<WorkItem> items;
    std::vector<SkippedPoint> skipped;
};

Plan plan_sweep(const ExperimentSpec &spec)
{
    Plan plan;
    const auto values = spec.sweep_values();
    if (spec.sweep.axis == SweepAxis::iterations)
    {
        for (int p = 0; p < spec.n_placements; ++p)
            plan.items.push_back({values, p});
        return plan;
    }
    for (double v : values)
    {
        try
        {
            config_at(spec, v).validate();
            if (spec.adc == AdcModel::high_res_noiseless && config_at(spec, v).tau > spec.base.n_ue)
                throw ConfigError("system.tau must not exceed system.n_ue with experiment.adc=high-res-noiseless");
        }
        catch (const ConfigError &e)
        {
            plan.skipped.push_back({v, e.what()});
            continue;
        }
        for (int p = 0; p < spec.n_placements; ++p)
            plan.items.push_back({{v}, p});
    }
    return plan;
}

SweepResult collect(Plan &plan, std::vector<std::vector<RecordRun>> &runs)
{
    SweepResult out;
    out.skipped = std::move(plan.skipped);
    for (auto &item_runs : runs)
        for (auto &rr : item_runs)
        {
            out.records.push_back(std::move(rr.record));
            out.designs.push_back(std::move(rr.design));
        }
    // Iterations-axis items hold all budgets of one placement; order by value.
    canonical_sort(out);
    return out;
}

} // namespace

std::uint64_t record_seed(const ExperimentSpec &spec, double /*sweep_value*/, int placement)
{
    return derive_seed(spec.base.rng_seed,
                       {label_key(axis_name(spec.sweep.axis)), static_cast<std::uint64_t>(placement)});
}

SystemConfig config_at(const ExperimentSpec &spec, double sweep_value)
{
    SystemConfig cfg = spec.base;
    switch (spec.sweep.axis)
    {
    case SweepAxis::iterations: break;
    case SweepAxis::l_chains: cfg.l_chains = static_cast<int>(sweep_value); break;
    case SweepAxis::tau: cfg.tau = static_cast<int>(sweep_value); break;
    case SweepAxis::snr_db:
        cfg.snr_db = sweep_value;
        cfg.noise_var.reset();
        break;
    }
    return cfg;
}

OptimizerConfig optimizer_at(const ExperimentSpec &spec, double sweep_value)
{
    OptimizerConfig opt = spec.optimizer;
    if (spec.sweep.axis == SweepAxis::iterations)
        opt.max_outer_iters = static_cast<int>(sweep_value);
    return opt;
}

RecordRun reproduce_record(const ExperimentSpec &spec, double sweep_value, int placement,
                           std::uint64_t seed, const RunOptions &options)
{
    if (spec.adc == AdcModel::high_res_noiseless)
        return run_high_res(spec, sweep_value, placement, seed, options);
    return run_one_bit(spec, {sweep_value}, placement, seed, options).front();
}

SweepResult run_sweep(const ExperimentSpec &spec, const RunOptions &options)
{
    Plan plan = plan_sweep(spec);
    const auto n = static_cast<long>(plan.items.size());
    std::vector<std::vector<RecordRun>> runs(plan.items.size());
    std::vector<std::exception_ptr> errors(plan.items.size());

#pragma omp parallel for schedule(dynamic, 1)
    for (long t = 0; t < n; ++t)
    {
        try
        {
            runs[static_cast<size_t>(t)] = run_item(spec, plan.items[static_cast<size_t>(t)], options);
        }
        catch (...)
        {
            errors[static_cast<size_t>(t)] = std::current_exception();
        }
    }
    for (const auto &e : errors)
        if (e)
            std::rethrow_exception(e);
    return collect(plan, runs);
}

SweepResult run_sweep_serial(const ExperimentSpec &spec, const RunOptions &options)
{
    Plan plan = plan_sweep(spec);
    std::vector<std::vector<RecordRun>> runs;
    for (const auto &item : plan.items)
        runs.push_back(run_item(spec, item, options));
    return collect(plan, runs);
}

void canonical_sort(SweepResult &result)
{
    std::vector<size_t> order(result.records.size());
    std::iota(order.begin(), order.end(), size_t{0});
    const auto &r = result.records;
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (r[a].scheme != r[b].scheme)
            return r[a].scheme < r[b].scheme;
        if (r[a].sweep_value != r[b].sweep_value)
            return r[a].sweep_value < r[b].sweep_value;
        return r[a].placement < r[b].placement;
    });
    SweepResult sorted;
    sorted.skipped = std::move(result.skipped);
    const bool with_designs = result.designs.size() == result.records.size();
    for (size_t i : order)
    {
        sorted.records.push_back(std::move(result.records[i]));
        if (with_designs)
            sorted.designs.push_back(std::move(result.designs[i]));
    }
    result = std::move(sorted);
}

} // namespace cfran
