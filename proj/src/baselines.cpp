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

#include "dualris/baselines.hpp"

#include <numbers>

namespace dualris
{

const char *to_string(BaselineKind kind)
{
    switch (kind)
    {
    case BaselineKind::fixed_phase:
        return "fixed";
    case BaselineKind::all_random:
        return "all-random";
    case BaselineKind::same_random:
        return "same-random";
    }
    return "unknown";
}

std::optional<BaselineKind> parse_baseline(std::string_view name)
{
    if (name == "fixed")
        return BaselineKind::fixed_phase;
    if (name == "all-random")
        return BaselineKind::all_random;
    if (name == "same-random")
        return BaselineKind::same_random;
    return std::nullopt;
}

PhasePair baseline_phases(BaselineKind kind, int num_elements, Rng &rng)
{
    switch (kind)
    {
    case BaselineKind::fixed_phase:
        return PhasePair::ones(num_elements);
    case BaselineKind::all_random:
        return PhasePair::random(num_elements, rng);
    case BaselineKind::same_random: {
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
        PhasePair ph;
        for (auto &s : ph.shifts)
            s = CVector::Constant(num_elements, std::polar(1.0, angle(rng)));
        return ph;
    }
    }
    throw Error(ErrorKind::config, "baseline_phases: unknown baseline");
}

OptimizeResult run_with_fixed_phases(const PhasePair &phases, const ChannelSet &ch, const SystemConfig &cfg,
                                     const AlternatingConfig &alt)
{
    AlternatingConfig fixed = alt;
    fixed.optimize_phases = false;
    fixed.restarts = 1;
    Initialization init;
    init.phases = phases;
    init.beams = matched_filter_beams(ch, phases, cfg);
    return optimize(ch, cfg, fixed, init);
}

OptimizeResult run_baseline(BaselineKind kind, const ChannelSet &ch, const SystemConfig &cfg,
                            const AlternatingConfig &alt, Rng &rng)
{
    return run_with_fixed_phases(baseline_phases(kind, cfg.num_elements, rng), ch, cfg, alt);
}

} // namespace dualris
