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

#include "cfran/csv.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cfran {

namespace {

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::vector<std::string> split(const std::string &line)
{
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ','))
        out.push_back(field);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

} // namespace

void write_csv(std::ostream &out, const std::vector<ResultRecord> &records)
{
    out << kCsvHeader << '\n';
    for (const auto &r : records)
    {
        out << r.scheme << ',' << r.sweep_name << ',' << fmt(r.sweep_value) << ',' << r.placement << ','
            << r.seed << ',' << fmt(r.sum_mse_analytic) << ','
            << (r.sum_mse_empirical ? fmt(*r.sum_mse_empirical) : std::string()) << ',' << r.iterations
            << ',' << fmt(r.wall_time_ms) << '\n';
    }
}

void emit_csv(const std::vector<ResultRecord> &records, const std::string &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    write_csv(out, records);
    out.flush();
    if (!out)
        throw std::runtime_error("write to '" + path + "' failed");
}

std::vector<ResultRecord> read_csv(std::istream &in)
{
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw std::runtime_error("read_csv: unexpected header");
    std::vector<ResultRecord> out;
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        const auto f = split(line);
        if (f.size() != 9)
            throw std::runtime_error("read_csv: expected 9 fields in '" + line + "'");
        ResultRecord r;
        r.scheme = f[0];
        r.sweep_name = f[1];
        r.sweep_value = std::stod(f[2]);
        r.placement = std::stoi(f[3]);
        r.seed = std::stoull(f[4]);
        r.sum_mse_analytic = std::stod(f[5]);
        if (!f[6].empty())
            r.sum_mse_empirical = std::stod(f[6]);
        r.iterations = std::stoi(f[7]);
        r.wall_time_ms = std::stod(f[8]);
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace cfran
