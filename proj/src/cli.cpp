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

#include "dualris/cli.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <optional>

#include <CLI11.hpp>

#include "dualris/campaign.hpp"
#include "dualris/config_file.hpp"
#include "dualris/format.hpp"

namespace dualris
{

namespace
{

std::optional<std::string> env(const char *name)
{
    const char *v = std::getenv(name);
    if (v == nullptr || *v == '\0')
        return std::nullopt;
    return std::string(v);
}

std::uint64_t parse_seed(const std::string &text, const char *source)
{
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw Error(ErrorKind::config, std::string(source) + ": not an unsigned integer seed: " + text);
    return v;
}

struct Common
{
    std::string scale = "desk";
    std::optional<std::uint64_t> seed;
    std::string config;
};

/// Fixed configuration and master seed after applying file, environment and flags.
std::pair<Campaign, std::uint64_t> resolve(int figure, const Common &opt)
{
    const auto scale = parse_scale(opt.scale);
    if (!scale)
        throw Error(ErrorKind::config, "unknown scale: " + opt.scale);
    Campaign c = figure_campaign(figure, *scale);

    std::uint64_t seed = c.master_seed;
    if (!opt.config.empty())
    {
        SystemConfig base = c.fixed;
        base.rng_seed = seed;
        c.fixed = load_config(opt.config, base);
        seed = c.fixed.rng_seed;
    }
    if (auto s = env("DUALRIS_SEED"))
        seed = parse_seed(*s, "DUALRIS_SEED");
    if (opt.seed)
        seed = *opt.seed;
    c.master_seed = seed;
    c.fixed.rng_seed = seed;
    return {c, seed};
}

int run_figure(int figure, const Common &opt, const std::string &out_flag, int threads, int draws, std::ostream &out)
{
    auto [campaign, seed] = resolve(figure, opt);
    campaign.threads = threads;
    if (draws > 0)
        campaign.draws = draws;

    std::filesystem::path path;
    if (!out_flag.empty())
        path = out_flag;
    else
    {
        const std::filesystem::path dir = env("DUALRIS_OUT_DIR").value_or(".");
        path = dir / ("fig" + std::to_string(figure) + "_" + opt.scale + ".csv");
    }

    const auto rows = run_campaign(campaign, path);
    int failed = 0;
    for (const auto &r : rows)
        failed += r.status != "ok";
    out << "figure " << figure << " (" << opt.scale << ", seed " << seed << "): " << rows.size() << " rows";
    if (failed > 0)
        out << ", " << failed << " flagged";
    out << "\nwrote " << path.string() << "\n      " << summary_path(path).string() << "\n";
    for (const auto &s : summarize(rows))
    {
        if (campaign.parameter == SweptParameter::iteration && s.value != campaign.grid.back())
            continue;
        out << "  " << to_string(s.scheme) << ' ' << to_string(campaign.parameter) << '=' << format_double(s.value)
            << "  mean sum rate " << format_double(s.mean_sum_rate) << '\n';
    }
    return kExitOk;
}

int run_single(const Common &opt, int draw, const std::string &scheme_name, std::ostream &out)
{
    const auto scheme = parse_scheme(scheme_name);
    if (!scheme)
        throw Error(ErrorKind::config, "unknown scheme: " + scheme_name);
    auto [campaign, seed] = resolve(2, opt);
    campaign.fixed.validate();

    const SchemeRun run = run_scheme(*scheme, campaign.fixed, campaign.alt, seed, 0, draw);
    out << "iteration,sum_rate,ee,transmit_power,best_sum_rate,beamforming_iterations,phase_iterations,"
           "qos_violations,phase_infeasible\n";
    for (const auto &r : run.result.trace.records)
        out << r.iteration << ',' << format_double(r.sum_rate) << ',' << format_double(r.ee) << ','
            << format_double(r.transmit_power) << ',' << format_double(r.best_sum_rate) << ','
            << r.beamforming_iterations << ',' << r.phase_iterations << ',' << r.qos_violations << ','
            << (r.phase_infeasible ? 1 : 0) << '\n';
    out << "final_sum_rate " << format_double(run.result.sum_rate) << '\n';
    out << "final_ee " << format_double(run.result.ee) << '\n';
    return kExitOk;
}

int run_selftest(std::ostream &out)
{
    int failed = 0;
    for (const auto &c : self_test())
    {
        out << (c.passed ? "PASS " : "FAIL ") << c.name;
        if (!c.detail.empty())
            out << "  (" << c.detail << ')';
        out << '\n';
        failed += !c.passed;
    }
    return failed == 0 ? kExitOk : kExitFailure;
}

} // namespace

int cli_main(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CLI::App app{"dual-RIS beamforming and phase optimization benchmarks", "dualris-bench"};
    app.require_subcommand(1);

    Common common;
    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--scale", common.scale, "desk or paper")->check(CLI::IsMember({"desk", "paper"}));
        sub->add_option("--seed", common.seed, "master seed");
        sub->add_option("--config", common.config, "key = value config file")->check(CLI::ExistingFile);
    };

    int figure = 0;
    std::string out_path;
    int threads = 0;
    int draws = 0;
    auto *run = app.add_subcommand("run", "run a figure campaign and write CSV");
    run->add_option("--figure", figure, "figure 2..6")->required()->check(CLI::Range(2, 6));
    add_common(run);
    run->add_option("--out", out_path, "output CSV path");
    run->add_option("--threads", threads, "worker threads, 0 for all")->check(CLI::NonNegativeNumber);
    run->add_option("--draws", draws, "draws per grid point")->check(CLI::PositiveNumber);

    int draw = 0;
    std::string scheme = "proposed";
    auto *single = app.add_subcommand("single", "optimize one draw and print its trace");
    add_common(single);
    single->add_option("--draw", draw, "draw index")->check(CLI::NonNegativeNumber);
    single->add_option("--scheme", scheme, "proposed, fixed, all-random or same-random");

    auto *selftest = app.add_subcommand("selftest", "run quick invariant checks");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try
    {
        if (run->parsed())
            return run_figure(figure, common, out_path, threads, draws, out);
        if (single->parsed())
            return run_single(common, draw, scheme, out);
        if (selftest->parsed())
            return run_selftest(out);
    }
    catch (const Error &e)
    {
        err << "error: " << e.what() << '\n';
        if (e.kind() == ErrorKind::config || e.kind() == ErrorKind::infeasible)
            return kExitInfeasible;
        return kExitFailure;
    }
    catch (const std::exception &e)
    {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitUsage;
}

} // namespace dualris
