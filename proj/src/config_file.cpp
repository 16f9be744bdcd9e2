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

#include "dualris/config_file.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "dualris/format.hpp"

namespace dualris
{

namespace
{

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void parse_fail(int line, const std::string &message)
{
    throw Error(ErrorKind::config, "config line " + std::to_string(line) + ": " + message);
}

template <typename T>
T parse_number(std::string_view value, int line, std::string_view key)
{
    T out{};
    const auto *end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc() || ptr != end)
        parse_fail(line, "cannot parse value '" + std::string(value) + "' for key '" + std::string(key) + "'");
    return out;
}

} // namespace

SystemConfig parse_config(std::string_view text, SystemConfig base)
{
    SystemConfig cfg = base;
    int line_no = 0;
    while (!text.empty())
    {
        ++line_no;
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            parse_fail(line_no, "expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            parse_fail(line_no, "expected 'key = value'");

        if (key == "M")
            cfg.num_antennas = parse_number<int>(value, line_no, key);
        else if (key == "K")
            cfg.num_users = parse_number<int>(value, line_no, key);
        else if (key == "N")
            cfg.num_elements = parse_number<int>(value, line_no, key);
        else if (key == "P_max")
            cfg.p_max = parse_number<double>(value, line_no, key);
        else if (key == "sigma2")
            cfg.noise_power = parse_number<double>(value, line_no, key);
        else if (key == "R")
            cfg.qos_threshold = parse_number<double>(value, line_no, key);
        else if (key == "beta")
            cfg.amp_inefficiency = parse_number<double>(value, line_no, key);
        else if (key == "P_U")
            cfg.p_user_static = parse_number<double>(value, line_no, key);
        else if (key == "P_B")
            cfg.p_bs_static = parse_number<double>(value, line_no, key);
        else if (key == "P_n_b")
            cfg.p_element_static = parse_number<double>(value, line_no, key);
        else if (key == "rng_seed")
            cfg.rng_seed = parse_number<std::uint64_t>(value, line_no, key);
        else if (key == "powered_surfaces")
            cfg.powered_surfaces = parse_number<int>(value, line_no, key);
        else if (key == "combining")
        {
            if (value == "coherent")
                cfg.combining = Combining::coherent;
            else if (value == "incoherent")
                cfg.combining = Combining::incoherent;
            else
                parse_fail(line_no, "combining must be 'coherent' or 'incoherent'");
        }
        else
            parse_fail(line_no, "unknown key '" + std::string(key) + "'");
    }
    return cfg;
}

SystemConfig load_config(const std::filesystem::path &path, SystemConfig base)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::io, "cannot open config file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try
    {
        return parse_config(buffer.str(), base);
    }
    catch (const Error &e)
    {
        throw e.with_context(path.string());
    }
}

std::string format_config(const SystemConfig &cfg)
{
    std::string out;
    auto put = [&out](const char *key, const std::string &value) { out += std::string(key) + " = " + value + "\n"; };
    put("M", std::to_string(cfg.num_antennas));
    put("K", std::to_string(cfg.num_users));
    put("N", std::to_string(cfg.num_elements));
    put("P_max", format_double(cfg.p_max));
    put("sigma2", format_double(cfg.noise_power));
    put("R", format_double(cfg.qos_threshold));
    put("beta", format_double(cfg.amp_inefficiency));
    put("P_U", format_double(cfg.p_user_static));
    put("P_B", format_double(cfg.p_bs_static));
    put("P_n_b", format_double(cfg.p_element_static));
    put("rng_seed", std::to_string(cfg.rng_seed));
    put("combining", cfg.combining == Combining::coherent ? "coherent" : "incoherent");
    put("powered_surfaces", std::to_string(cfg.powered_surfaces));
    return out;
}

} // namespace dualris
