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

#ifndef DUALRIS_CAMPAIGN_HPP
#define DUALRIS_CAMPAIGN_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dualris/baselines.hpp"

// Monte-Carlo campaigns behind the rate-versus-parameter figures.
//
// Random streams. Channels of draw d come from draw_channels with
// rng_seed = master seed and draw index d, so every scheme and every grid
// point of a campaign sees the same draws. Scheme-specific randomness (random
// phases) uses make_rng(master, {kSchemeStream, scheme code, point, d}).
//
// Row order is scheme-major, then grid point, then draw.

namespace dualris
{

enum class Scheme
{
    proposed,
    fixed_phase,
    all_random,
    same_random
};

const char *to_string(Scheme scheme);
std::optional<Scheme> parse_scheme(std::string_view name);
/// Stream code; fixed per scheme so that adding a scheme never moves another one's draws.
std::uint64_t scheme_code(Scheme scheme);

enum class Scale
{
    desk,
    paper
};

std::optional<Scale> parse_scale(std::string_view name);

enum class SweptParameter
{
    iteration,    // outer iteration index
    num_elements, // N
    p_max_db,     // P_max in dB
    noise_power,  // sigma^2
    num_users     // K
};

const char *to_string(SweptParameter parameter);

inline constexpr std::uint64_t kSchemeStream = 0x5c4e;

struct Campaign
{
    int figure = 2;
    SweptParameter parameter = SweptParameter::iteration;
    std::vector<double> grid;
    SystemConfig fixed;
    AlternatingConfig alt;
    int draws = 1;
    std::vector<Scheme> schemes{Scheme::proposed, Scheme::fixed_phase, Scheme::all_random, Scheme::same_random};
    std::uint64_t master_seed = 1;
    int threads = 0; // 0: one per hardware thread

    void validate() const;
    /// Fixed configuration with grid point `point` applied. For the
    /// iteration sweep this is the fixed configuration itself.
    SystemConfig point_config(std::size_t point) const;
};

/// Default campaign of a figure (2 to 6).
Campaign figure_campaign(int figure, Scale scale);

struct ResultRow
{
    int figure = 0;
    Scheme scheme = Scheme::proposed;
    double value = 0.0; // swept value
    int draw = 0;
    std::uint64_t seed = 0; // master seed
    double sum_rate = 0.0;
    double ee = 0.0;
    int iterations = 0; // outer iterations run
    std::string status = "ok";
    double wall_ms = 0.0;
};

struct SummaryRow
{
    int figure = 0;
    Scheme scheme = Scheme::proposed;
    double value = 0.0;
    int count = 0; // rows with status ok
    int failed = 0;
    double mean_sum_rate = 0.0;
    double stderr_sum_rate = 0.0;
    double mean_ee = 0.0;
    double stderr_ee = 0.0;
};

/// Outcome of one scheme on one draw.
struct SchemeRun
{
    OptimizeResult result;
    double wall_ms = 0.0;
};

SchemeRun run_scheme(Scheme scheme, const SystemConfig &cfg, const AlternatingConfig &alt, std::uint64_t master_seed,
                     std::size_t point, int draw);

/// All rows of the campaign, in file order. Draws run in parallel; solver
/// failures become rows whose status names the error kind.
std::vector<ResultRow> campaign_rows(const Campaign &campaign);

/// Per (scheme, value) mean and standard error over rows with status ok.
std::vector<SummaryRow> summarize(const std::vector<ResultRow> &rows);

std::string rows_csv(const Campaign &campaign, const std::vector<ResultRow> &rows);
std::string summary_csv(const Campaign &campaign, const std::vector<SummaryRow> &summary);
/// Wall-clock times per row; kept out of the main file so that it stays reproducible.
std::string timing_csv(const std::vector<ResultRow> &rows);

/// Paths written next to the main CSV.
std::filesystem::path summary_path(const std::filesystem::path &out);
std::filesystem::path timing_path(const std::filesystem::path &out);

/// Runs the campaign and writes out, its summary and its timing file.
std::vector<ResultRow> run_campaign(const Campaign &campaign, const std::filesystem::path &out);

} // namespace dualris

#endif
