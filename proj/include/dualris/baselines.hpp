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

#ifndef DUALRIS_BASELINES_HPP
#define DUALRIS_BASELINES_HPP

#include <optional>
#include <string_view>

#include "dualris/optimizer.hpp"

// Reference phase strategies. The phases stay fixed while the beamformers are
// still optimized by the WMMSE stage, so the schemes differ only in how the
// surfaces are configured.

namespace dualris
{

enum class BaselineKind
{
    fixed_phase, // every element at zero phase
    all_random,  // independent uniform phase per element
    same_random  // one uniform phase per surface, shared by its elements
};

const char *to_string(BaselineKind kind);
std::optional<BaselineKind> parse_baseline(std::string_view name);

PhasePair baseline_phases(BaselineKind kind, int num_elements, Rng &rng);

/// Beamforming-only optimization with phases from baseline_phases.
OptimizeResult run_baseline(BaselineKind kind, const ChannelSet &ch, const SystemConfig &cfg,
                            const AlternatingConfig &alt, Rng &rng);

/// Same, with the phases supplied by the caller.
OptimizeResult run_with_fixed_phases(const PhasePair &phases, const ChannelSet &ch, const SystemConfig &cfg,
                                     const AlternatingConfig &alt);

} // namespace dualris

#endif
