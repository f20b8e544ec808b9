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

// Serial reference vs OpenMP kernels: Monte-Carlo MSE and a small sweep.

#include <chrono>
#include <cstdio>

#include <omp.h>

#include "cfran/sweep.hpp"

using namespace cfran;

namespace {

template <class F>
double time_ms(F &&f, int reps)
{
    double best = 1e300;
    for (int r = 0; r < reps; ++r)
    {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

void report(const char *name, double serial, double parallel, bool same)
{
    std::printf("%-16s serial %9.2f ms  omp %9.2f ms  speedup %5.2fx  %s\n", name, serial, parallel,
                serial / parallel, same ? "identical" : "MISMATCH");
}

} // namespace

int main()
{
    std::printf("threads: %d\n", omp_get_max_threads());

    SystemConfig cfg;
    Rng rng(derive_seed(cfg.rng_seed, {label_key("geometry")}));
    const ChannelStats stats = make_channel_stats(cfg, sample_geometry(cfg, rng));
    const Design d = init_design(cfg, 11);
    const GlobalModel model = build_global_model(d.pilots, d.combiners, stats, cfg.noise_variance(), AdcModel::one_bit);
    const FilterSet f = mmse_filter(model);

    const int trials = 20000;
    EmpiricalMse a, b;
    const double ts = time_ms([&] { a = empirical_mse_serial(d.pilots, d.combiners, f, stats, cfg.noise_variance(), AdcModel::one_bit, trials, 5); }, 3);
    const double tp = time_ms([&] { b = empirical_mse(d.pilots, d.combiners, f, stats, cfg.noise_variance(), AdcModel::one_bit, trials, 5); }, 3);
    report("empirical_mse", ts, tp, a.sum_mean == b.sum_mean);

    ExperimentSpec spec;
    spec.sweep.axis = SweepAxis::l_chains;
    spec.sweep.values = {1, 2, 3, 4};
    spec.n_placements = 8;
    SweepResult rs, rp;
    const double ss = time_ms([&] { rs = run_sweep_serial(spec, {.timing = false}); }, 1);
    const double sp = time_ms([&] { rp = run_sweep(spec, {.timing = false}); }, 1);
    bool same = rs.records.size() == rp.records.size();
    for (size_t i = 0; same && i < rs.records.size(); ++i)
        same = rs.records[i].sum_mse_analytic == rp.records[i].sum_mse_analytic;
    report("run_sweep", ss, sp, same);
    return same && a.sum_mean == b.sum_mean ? 0 : 1;
}
