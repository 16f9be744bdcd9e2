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

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "dualris/campaign.hpp"
#include "support.hpp"

using namespace dualris;

namespace
{

Campaign quick(int figure, int iterations = 5, int draws = 2)
{
    Campaign c = figure_campaign(figure, Scale::desk);
    c.alt.max_iterations = iterations;
    if (figure == 2)
        c.grid = {1, 2, 3, 4, 5};
    c.draws = draws;
    c.threads = 1;
    return c;
}

std::string slurp(const std::filesystem::path &path)
{
    std::ifstream is(path, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace

TEST(Campaign, FigureDefaultsAreValid)
{
    for (Scale scale : {Scale::desk, Scale::paper})
        for (int fig = 2; fig <= 6; ++fig)
        {
            const Campaign c = figure_campaign(fig, scale);
            EXPECT_NO_THROW(c.validate()) << fig;
            EXPECT_EQ(c.schemes.size(), 4u);
        }
    const Campaign paper = figure_campaign(4, Scale::paper);
    EXPECT_EQ(paper.fixed.num_antennas, 8);
    EXPECT_EQ(paper.fixed.num_users, 8);
    EXPECT_EQ(paper.fixed.num_elements, 16);
    EXPECT_EQ(paper.fixed.qos_threshold, 6.6);
    EXPECT_EQ(paper.alt.max_iterations, 200);
    EXPECT_EQ(paper.grid.front(), 0.0);
    EXPECT_EQ(paper.grid.back(), 60.0);
    EXPECT_THROW(figure_campaign(7, Scale::desk), Error);
}

TEST(Campaign, PointConfigAppliesGridValue)
{
    const Campaign c3 = figure_campaign(3, Scale::desk);
    EXPECT_EQ(c3.point_config(2).num_elements, 16);
    const Campaign c4 = figure_campaign(4, Scale::desk);
    EXPECT_NEAR(c4.point_config(3).p_max, 1000.0, 1e-9);
    const Campaign c5 = figure_campaign(5, Scale::desk);
    EXPECT_EQ(c5.point_config(0).noise_power, 1e-2);
    const Campaign c6 = figure_campaign(6, Scale::desk);
    EXPECT_EQ(c6.point_config(2).num_users, 8);
}

TEST(Campaign, ValidationErrors)
{
    auto expect_config = [](const Campaign &c) {
        try
        {
            c.validate();
            FAIL();
        }
        catch (const Error &e)
        {
            EXPECT_EQ(e.kind(), ErrorKind::config);
        }
    };
    Campaign c = quick(3);
    c.grid = {};
    expect_config(c);
    c = quick(3);
    c.grid = {8, 4};
    expect_config(c);
    c = quick(3);
    c.grid = {4, 4.5};
    expect_config(c);
    c = quick(3);
    c.draws = 0;
    expect_config(c);
    c = quick(5);
    c.grid = {0.0, 1.0};
    expect_config(c);
    c = quick(3);
    c.schemes.clear();
    expect_config(c);
}

TEST(Campaign, RowOrderIsSchemeGridDraw)
{
    for (int fig : {2, 3})
    {
        Campaign c = quick(fig, 3);
        if (fig == 3)
            c.grid = {4, 8};
        const auto rows = campaign_rows(c);
        ASSERT_EQ(rows.size(), c.schemes.size() * c.grid.size() * c.draws);
        std::size_t i = 0;
        for (Scheme s : c.schemes)
            for (double v : c.grid)
                for (int d = 0; d < c.draws; ++d, ++i)
                {
                    EXPECT_EQ(rows[i].scheme, s);
                    EXPECT_EQ(rows[i].value, v);
                    EXPECT_EQ(rows[i].draw, d);
                    EXPECT_EQ(rows[i].status, "ok");
                }
    }
}

TEST(Campaign, ThreadCountDoesNotChangeRows)
{
    Campaign c = quick(3, 3);
    c.grid = {4, 8};
    c.threads = 1;
    const auto a = rows_csv(c, campaign_rows(c));
    c.threads = 3;
    const auto b = rows_csv(c, campaign_rows(c));
    EXPECT_EQ(a, b);
}

TEST(Campaign, SchemesUseSeparateStreams)
{
    // Dropping a scheme leaves the others' rows unchanged.
    Campaign c = quick(3, 3);
    c.grid = {4};
    const auto all = campaign_rows(c);
    c.schemes = {Scheme::all_random};
    const auto one = campaign_rows(c);
    ASSERT_EQ(one.size(), 2u);
    for (const auto &row : all)
        if (row.scheme == Scheme::all_random)
        {
            EXPECT_EQ(row.sum_rate, one[row.draw].sum_rate);
        }
}

TEST(Campaign, SummaryMatchesRawMeans)
{
    Campaign c = quick(6, 3, 3);
    c.grid = {2, 4};
    const auto rows = campaign_rows(c);
    const auto summary = summarize(rows);
    ASSERT_EQ(summary.size(), c.schemes.size() * c.grid.size());
    for (const auto &s : summary)
    {
        double sum = 0.0, sum_sq = 0.0;
        int n = 0;
        for (const auto &r : rows)
            if (r.scheme == s.scheme && r.value == s.value)
            {
                sum += r.sum_rate;
                sum_sq += r.sum_rate * r.sum_rate;
                ++n;
            }
        ASSERT_EQ(n, 3);
        const double mean = sum / n;
        EXPECT_NEAR(s.mean_sum_rate, mean, 1e-12 * mean);
        const double sd = std::sqrt(std::max(0.0, (sum_sq - n * mean * mean) / (n - 1)));
        EXPECT_NEAR(s.stderr_sum_rate, sd / std::sqrt(n), 1e-9 * std::max(1.0, mean));
        EXPECT_EQ(s.count, 3);
        EXPECT_EQ(s.failed, 0);
    }
}

TEST(Campaign, SummaryExcludesFlaggedRows)
{
    std::vector<ResultRow> rows(3);
    for (int i = 0; i < 3; ++i)
    {
        rows[i].figure = 4;
        rows[i].value = 10.0;
        rows[i].draw = i;
        rows[i].sum_rate = 2.0 * (i + 1);
        rows[i].ee = 1.0;
    }
    rows[1].status = "numerical";
    rows[1].sum_rate = 0.0;
    const auto s = summarize(rows);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0].count, 2);
    EXPECT_EQ(s[0].failed, 1);
    EXPECT_DOUBLE_EQ(s[0].mean_sum_rate, 4.0);
}

TEST(Campaign, IterationCurveIsNonDecreasing)
{
    Campaign c = quick(2, 5, 3);
    c.schemes = {Scheme::proposed};
    const auto rows = campaign_rows(c);
    for (int d = 0; d < 3; ++d)
    {
        double previous = 0.0;
        for (const auto &r : rows)
            if (r.draw == d)
            {
                EXPECT_GE(r.sum_rate, previous);
                previous = r.sum_rate;
            }
    }
}

TEST(Campaign, NoiseSweepDecreasesTowardZero)
{
    Campaign c = quick(5, 10, 3);
    c.schemes = {Scheme::proposed};
    c.grid = {1e-2, 1.0, 1e2, 1e4, 1e6};
    const auto summary = summarize(campaign_rows(c));
    ASSERT_EQ(summary.size(), 5u);
    for (std::size_t i = 1; i < summary.size(); ++i)
        EXPECT_LT(summary[i].mean_sum_rate, summary[i - 1].mean_sum_rate);
    EXPECT_LT(summary.back().mean_sum_rate, 0.1);
}

TEST(Campaign, FilesAndFormats)
{
    const auto dir = std::filesystem::temp_directory_path() / "dualris_campaign_test";
    std::filesystem::remove_all(dir);
    Campaign c = quick(3, 2, 1);
    c.grid = {4};
    const auto out = dir / "nested" / "fig3.csv";
    const auto rows = run_campaign(c, out);
    const std::string csv = slurp(out);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "figure,scheme,parameter,value,draw,seed,sum_rate,ee,iterations,status");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), static_cast<long>(rows.size() + 1));
    const std::string summary = slurp(summary_path(out));
    EXPECT_EQ(summary.substr(0, summary.find('\n')),
              "figure,scheme,parameter,value,count,failed,mean_sum_rate,stderr_sum_rate,mean_ee,stderr_ee");
    EXPECT_TRUE(std::filesystem::exists(timing_path(out)));
    EXPECT_EQ(summary_path(out).filename(), "fig3.csv.summary.csv");
    std::filesystem::remove_all(dir);
}

TEST(Campaign, UnwritablePathIsIoError)
{
    const auto file = std::filesystem::temp_directory_path() / "dualris_not_a_dir";
    std::ofstream(file) << "x";
    Campaign c = quick(3, 1, 1);
    c.grid = {4};
    c.schemes = {Scheme::fixed_phase};
    try
    {
        run_campaign(c, file / "out.csv");
        FAIL();
    }
    catch (const Error &e)
    {
        EXPECT_EQ(e.kind(), ErrorKind::io);
    }
    std::filesystem::remove(file);
}

TEST(Scheme, Names)
{
    for (Scheme s : {Scheme::proposed, Scheme::fixed_phase, Scheme::all_random, Scheme::same_random})
        EXPECT_EQ(parse_scheme(to_string(s)), s);
    EXPECT_FALSE(parse_scheme("best").has_value());
    EXPECT_EQ(parse_scale("paper"), Scale::paper);
    EXPECT_FALSE(parse_scale("huge").has_value());
}
