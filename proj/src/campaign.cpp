// SPDX-License-Identifier: Apache-2.0
//
// dualris: joint beamforming and dual-RIS phase optimization
// Copyright (C) 2026 The dualris authors
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

#include "dualris/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <iterator>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <tuple>

#include "dualris/format.hpp"

namespace dualris
{

const char *to_string(Scheme scheme)
{
    switch (scheme)
    {
    case Scheme::proposed:
        return "proposed";
    case Scheme::fixed_phase:
        return "fixed";
    case Scheme::all_random:
        return "all-random";
    case Scheme::same_random:
        return "same-random";
    }
    return "?";
}

std::optional<Scheme> parse_scheme(std::string_view name)
{
    if (name == "proposed")
        return Scheme::proposed;
    if (auto kind = parse_baseline(name))
    {
        switch (*kind)
        {
        case BaselineKind::fixed_phase:
            return Scheme::fixed_phase;
        case BaselineKind::all_random:
            return Scheme::all_random;
        case BaselineKind::same_random:
            return Scheme::same_random;
        }
    }
    return std::nullopt;
}

std::uint64_t scheme_code(Scheme scheme)
{
    switch (scheme)
    {
    case Scheme::proposed:
        return 0;
    case Scheme::fixed_phase:
        return 1;
    case Scheme::all_random:
        return 2;
    case Scheme::same_random:
        return 3;
    }
    return 99;
}

std::optional<Scale> parse_scale(std::string_view name)
{
    if (name == "desk")
        return Scale::desk;
    if (name == "paper")
        return Scale::paper;
    return std::nullopt;
}

const char *to_string(SweptParameter parameter)
{
    switch (parameter)
    {
    case SweptParameter::iteration:
        return "iteration";
    case SweptParameter::num_elements:
        return "N";
    case SweptParameter::p_max_db:
        return "P_dB";
    case SweptParameter::noise_power:
        return "sigma2";
    case SweptParameter::num_users:
        return "K";
    }
    return "?";
}

namespace
{

bool is_count(double v)
{
    return v >= 1.0 && v == std::floor(v) && v < 1e9;
}

std::optional<BaselineKind> baseline_of(Scheme scheme)
{
    switch (scheme)
    {
    case Scheme::fixed_phase:
        return BaselineKind::fixed_phase;
    case Scheme::all_random:
        return BaselineKind::all_random;
    case Scheme::same_random:
        return BaselineKind::same_random;
    case Scheme::proposed:
        break;
    }
    return std::nullopt;
}

std::vector<double> decades(int lo, int hi)
{
    std::vector<double> out;
    for (int e = lo; e <= hi; ++e)
        out.push_back(std::pow(10.0, e));
    return out;
}

std::vector<double> iota_grid(int first, int last, int step = 1)
{
    std::vector<double> out;
    for (int v = first; v <= last; v += step)
        out.push_back(v);
    return out;
}

} // namespace

void Campaign::validate() const
{
    if (figure < 2 || figure > 6)
        throw Error(ErrorKind::config, "campaign: figure must be 2..6", figure);
    if (grid.empty())
        throw Error(ErrorKind::config, "campaign: empty grid");
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        if (!std::isfinite(grid[i]))
            throw Error(ErrorKind::config, "campaign: non-finite grid value");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw Error(ErrorKind::config, "campaign: grid must be strictly increasing");
    }
    if (draws < 1)
        throw Error(ErrorKind::config, "campaign: draws must be >= 1", draws);
    if (schemes.empty())
        throw Error(ErrorKind::config, "campaign: no schemes");
    if (threads < 0)
        throw Error(ErrorKind::config, "campaign: negative thread count", threads);

    switch (parameter)
    {
    case SweptParameter::iteration:
    case SweptParameter::num_elements:
    case SweptParameter::num_users:
        for (double v : grid)
            if (!is_count(v))
                throw Error(ErrorKind::config, std::string("campaign: ") + to_string(parameter) +
                                                   " grid needs positive integers", v);
        break;
    case SweptParameter::noise_power:
        if (grid.front() <= 0.0)
            throw Error(ErrorKind::config, "campaign: sigma2 grid must be positive", grid.front());
        break;
    case SweptParameter::p_max_db:
        break;
    }
    for (std::size_t i = 0; i < grid.size(); ++i)
        point_config(i).validate();
    alt.validate();
}

SystemConfig Campaign::point_config(std::size_t point) const
{
    SystemConfig cfg = fixed;
    cfg.rng_seed = master_seed;
    const double v = grid.at(point);
    switch (parameter)
    {
    case SweptParameter::iteration:
        break;
    case SweptParameter::num_elements:
        cfg.num_elements = static_cast<int>(v);
        break;
    case SweptParameter::p_max_db:
        cfg.p_max = from_db(v);
        break;
    case SweptParameter::noise_power:
        cfg.noise_power = v;
        break;
    case SweptParameter::num_users:
        cfg.num_users = static_cast<int>(v);
        break;
    }
    return cfg;
}

Campaign figure_campaign(int figure, Scale scale)
{
    const bool paper = scale == Scale::paper;
    Campaign c;
    c.figure = figure;
    c.fixed.num_antennas = paper ? 8 : 4;
    c.fixed.num_users = paper ? 8 : 2;
    c.fixed.num_elements = paper ? 16 : 8;
    c.fixed.p_max = from_db(paper ? 60.0 : 20.0);
    c.fixed.noise_power = 1.0;
    c.fixed.qos_threshold = 6.6;
    c.alt.max_iterations = 200;
    c.draws = paper ? 50 : 30;

    switch (figure)
    {
    case 2:
        c.parameter = SweptParameter::iteration;
        c.grid = iota_grid(1, c.alt.max_iterations);
        c.draws = paper ? 50 : 20;
        break;
    case 3:
        c.parameter = SweptParameter::num_elements;
        c.grid = paper ? std::vector<double>{4, 8, 16, 32, 64} : std::vector<double>{4, 8, 16, 32};
        break;
    case 4:
        c.parameter = SweptParameter::p_max_db;
        c.grid = iota_grid(0, 60, 10);
        break;
    case 5:
        c.parameter = SweptParameter::noise_power;
        c.grid = paper ? decades(0, 8) : decades(-2, 6);
        break;
    case 6:
        c.parameter = SweptParameter::num_users;
        c.grid = paper ? iota_grid(2, 16, 2) : std::vector<double>{2, 4, 8};
        break;
    default:
        throw Error(ErrorKind::config, "campaign: figure must be 2..6", figure);
    }
    return c;
}

SchemeRun run_scheme(Scheme scheme, const SystemConfig &cfg, const AlternatingConfig &alt, std::uint64_t master_seed,
                     std::size_t point, int draw)
{
    const auto start = std::chrono::steady_clock::now();
    SystemConfig local = cfg;
    local.rng_seed = master_seed;
    const ChannelSet ch = draw_channels(local, static_cast<std::uint64_t>(draw));

    SchemeRun run;
    if (auto kind = baseline_of(scheme))
    {
        Rng rng = make_rng(master_seed, {kSchemeStream, scheme_code(scheme), static_cast<std::uint64_t>(point),
                                         static_cast<std::uint64_t>(draw)});
        run.result = run_baseline(*kind, ch, local, alt, rng);
    }
    else
        run.result = optimize(ch, local, alt);
    run.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return run;
}

std::vector<ResultRow> campaign_rows(const Campaign &campaign)
{
    campaign.validate();
    const bool per_iteration = campaign.parameter == SweptParameter::iteration;
    const std::size_t points = per_iteration ? 1 : campaign.grid.size();
    const std::size_t draws = static_cast<std::size_t>(campaign.draws);

    AlternatingConfig alt = campaign.alt;
    if (per_iteration)
        alt.max_iterations = static_cast<int>(campaign.grid.back());

    struct Task
    {
        Scheme scheme;
        std::size_t point;
        int draw;
    };
    std::vector<Task> tasks;
    for (Scheme s : campaign.schemes)
        for (std::size_t p = 0; p < points; ++p)
            for (std::size_t d = 0; d < draws; ++d)
                tasks.push_back({s, p, static_cast<int>(d)});

    std::vector<std::vector<ResultRow>> results(tasks.size());
    auto work = [&](std::size_t i) {
        const Task &task = tasks[i];
        ResultRow base;
        base.figure = campaign.figure;
        base.scheme = task.scheme;
        base.draw = task.draw;
        base.seed = campaign.master_seed;
        auto &out = results[i];
        try
        {
            const SchemeRun run =
                run_scheme(task.scheme, campaign.point_config(task.point), alt, campaign.master_seed, task.point, task.draw);
            const auto &records = run.result.trace.records;
            base.iterations = static_cast<int>(records.size());
            base.wall_ms = run.wall_ms;
            if (per_iteration)
            {
                // Best-so-far values; a run that stopped early keeps its final value.
                for (double v : campaign.grid)
                {
                    const std::size_t n = std::min(records.size(), static_cast<std::size_t>(v));
                    ResultRow row = base;
                    row.value = v;
                    row.sum_rate = records[n - 1].best_sum_rate;
                    row.ee = records[n - 1].best_ee;
                    out.push_back(std::move(row));
                }
            }
            else
            {
                ResultRow row = base;
                row.value = campaign.grid[task.point];
                row.sum_rate = run.result.sum_rate;
                row.ee = run.result.ee;
                out.push_back(std::move(row));
            }
        }
        catch (const Error &e)
        {
            out.clear();
            base.status = to_string(e.kind());
            if (per_iteration)
                for (double v : campaign.grid)
                {
                    ResultRow row = base;
                    row.value = v;
                    out.push_back(std::move(row));
                }
            else
            {
                base.value = campaign.grid[task.point];
                out.push_back(base);
            }
        }
    };

    unsigned threads = campaign.threads > 0 ? static_cast<unsigned>(campaign.threads)
                                            : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, tasks.size()));
    if (threads <= 1)
    {
        for (std::size_t i = 0; i < tasks.size(); ++i)
            work(i);
    }
    else
    {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < tasks.size(); i = next++)
                {
                    try
                    {
                        work(i);
                    }
                    catch (...)
                    {
                        std::lock_guard lock(failure_mutex);
                        if (!failure)
                            failure = std::current_exception();
                    }
                }
            });
        for (auto &th : pool)
            th.join();
        if (failure)
            std::rethrow_exception(failure);
    }

    // Scheme-major, then grid point, then draw. Iteration sweeps produce a
    // whole curve per task, so they are transposed here.
    std::vector<ResultRow> rows;
    if (per_iteration)
    {
        for (std::size_t s = 0; s < campaign.schemes.size(); ++s)
            for (std::size_t g = 0; g < campaign.grid.size(); ++g)
                for (std::size_t d = 0; d < draws; ++d)
                    rows.push_back(std::move(results[s * draws + d][g]));
    }
    else
    {
        for (auto &r : results)
            std::move(r.begin(), r.end(), std::back_inserter(rows));
    }
    return rows;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow> &rows)
{
    // Keyed by first appearance so the summary follows the row order.
    std::vector<SummaryRow> out;
    std::vector<std::vector<const ResultRow *>> members;
    std::map<std::tuple<int, std::uint64_t, double>, std::size_t> index;
    for (const auto &row : rows)
    {
        const auto key = std::make_tuple(row.figure, scheme_code(row.scheme), row.value);
        auto [it, inserted] = index.try_emplace(key, out.size());
        if (inserted)
        {
            SummaryRow s;
            s.figure = row.figure;
            s.scheme = row.scheme;
            s.value = row.value;
            out.push_back(s);
            members.emplace_back();
        }
        members[it->second].push_back(&row);
    }

    auto mean_and_stderr = [](const std::vector<double> &x) {
        if (x.empty())
            return std::pair{0.0, 0.0};
        const double n = static_cast<double>(x.size());
        const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
        if (x.size() < 2)
            return std::pair{mean, 0.0};
        double ss = 0.0;
        for (double v : x)
            ss += (v - mean) * (v - mean);
        return std::pair{mean, std::sqrt(ss / (n - 1.0) / n)};
    };

    for (std::size_t i = 0; i < out.size(); ++i)
    {
        std::vector<double> rate, ee;
        for (const ResultRow *row : members[i])
        {
            if (row->status != "ok")
            {
                ++out[i].failed;
                continue;
            }
            rate.push_back(row->sum_rate);
            ee.push_back(row->ee);
        }
        out[i].count = static_cast<int>(rate.size());
        std::tie(out[i].mean_sum_rate, out[i].stderr_sum_rate) = mean_and_stderr(rate);
        std::tie(out[i].mean_ee, out[i].stderr_ee) = mean_and_stderr(ee);
    }
    return out;
}

std::string rows_csv(const Campaign &campaign, const std::vector<ResultRow> &rows)
{
    std::ostringstream os;
    os << "figure,scheme,parameter,value,draw,seed,sum_rate,ee,iterations,status\n";
    for (const auto &r : rows)
        os << r.figure << ',' << to_string(r.scheme) << ',' << to_string(campaign.parameter) << ','
           << format_double(r.value) << ',' << r.draw << ',' << r.seed << ',' << format_double(r.sum_rate) << ','
           << format_double(r.ee) << ',' << r.iterations << ',' << r.status << '\n';
    return os.str();
}

std::string summary_csv(const Campaign &campaign, const std::vector<SummaryRow> &summary)
{
    std::ostringstream os;
    os << "figure,scheme,parameter,value,count,failed,mean_sum_rate,stderr_sum_rate,mean_ee,stderr_ee\n";
    for (const auto &s : summary)
        os << s.figure << ',' << to_string(s.scheme) << ',' << to_string(campaign.parameter) << ','
           << format_double(s.value) << ',' << s.count << ',' << s.failed << ',' << format_double(s.mean_sum_rate)
           << ',' << format_double(s.stderr_sum_rate) << ',' << format_double(s.mean_ee) << ','
           << format_double(s.stderr_ee) << '\n';
    return os.str();
}

std::string timing_csv(const std::vector<ResultRow> &rows)
{
    std::ostringstream os;
    os << "scheme,value,draw,wall_ms\n";
    for (const auto &r : rows)
        os << to_string(r.scheme) << ',' << format_double(r.value) << ',' << r.draw << ','
           << format_double(r.wall_ms) << '\n';
    return os.str();
}

std::filesystem::path summary_path(const std::filesystem::path &out)
{
    return std::filesystem::path(out.string() + ".summary.csv");
}

std::filesystem::path timing_path(const std::filesystem::path &out)
{
    return std::filesystem::path(out.string() + ".timing.csv");
}

namespace
{

void write_file(const std::filesystem::path &path, const std::string &text)
{
    std::error_code ec;
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw Error(ErrorKind::io, "cannot open " + path.string() + " for writing");
    os << text;
    os.flush();
    if (!os)
        throw Error(ErrorKind::io, "write failed: " + path.string());
}

} // namespace

std::vector<ResultRow> run_campaign(const Campaign &campaign, const std::filesystem::path &out)
{
    std::vector<ResultRow> rows = campaign_rows(campaign);
    write_file(out, rows_csv(campaign, rows));
    write_file(summary_path(out), summary_csv(campaign, summarize(rows)));
    write_file(timing_path(out), timing_csv(rows));
    return rows;
}

} // namespace dualris
