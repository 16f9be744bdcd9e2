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

#ifndef DUALRIS_OPTIMIZER_HPP
#define DUALRIS_OPTIMIZER_HPP

#include <optional>
#include <vector>

#include "dualris/beamformer.hpp"
#include "dualris/phaseopt.hpp"

namespace dualris
{

/// Quantity tracked for convergence and best-iterate selection.
enum class Objective
{
    energy_efficiency, // sum rate / (transmit power + static power)
    sum_rate
};

struct AlternatingConfig
{
    int max_iterations = 200;
    double tolerance = 1e-5; // relative change of the tracked objective
    BeamformingOptions beamforming;
    PhaseOptions phase;
    Objective objective = Objective::energy_efficiency;
    bool optimize_phases = true;
    int restarts = 1; // restarts beyond the first start from random phases

    void validate() const;
    /// Applies the same coupling to both stages.
    void set_coupling(Coupling coupling);
};

struct IterationRecord
{
    int iteration = 0;
    double sum_rate = 0.0; // bits/s/Hz at the end of the iteration
    double ee = 0.0;
    double transmit_power = 0.0;
    double min_user_rate = 0.0;
    double objective = 0.0;      // tracked objective at the end of the iteration
    double best_objective = 0.0; // best tracked objective so far
    double best_sum_rate = 0.0;  // sum rate of the best iterate so far
    double best_ee = 0.0;        // EE of the best iterate so far
    int qos_violations = 0;      // users failing the WMMSE-surrogate QoS test after beamforming
    double qos_margin = 0.0;     // min_k (phase-surrogate QoS lhs - R) at the end of the iteration
    int beamforming_iterations = 0;
    int phase_iterations = 0;
    bool beamforming_cap_hit = false;
    bool phase_infeasible = false;
    double wall_ms = 0.0;
};

struct IterationTrace
{
    std::vector<IterationRecord> records;
};

struct Initialization
{
    BeamPair beams;
    PhasePair phases;
};

/// Matched-filter beamformers h_sk^H for the given phases, scaled to use the
/// full power budget.
BeamPair matched_filter_beams(const ChannelSet &ch, const PhasePair &ph, const SystemConfig &cfg);

/// All-ones phases with matched-filter beamformers.
Initialization default_init(const ChannelSet &ch, const SystemConfig &cfg);

struct OptimizeResult
{
    BeamPair beams; // best iterate
    PhasePair phases;
    double objective = 0.0;
    double sum_rate = 0.0;
    double ee = 0.0;
    int best_iteration = 0;
    IterationTrace trace; // trace of the restart that produced the best iterate
};

/// Alternates beamforming_stage and phase_stage until the tracked objective
/// changes by less than the relative tolerance, returning the best iterate seen.
OptimizeResult optimize(const ChannelSet &ch, const SystemConfig &cfg, const AlternatingConfig &alt,
                        const std::optional<Initialization> &init = std::nullopt);

} // namespace dualris

#endif
