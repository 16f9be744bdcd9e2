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

#ifndef DUALRIS_MODEL_HPP
#define DUALRIS_MODEL_HPP

#include <array>
#include <cstdint>

#include "dualris/numerics.hpp"
#include "dualris/random.hpp"

namespace dualris
{

/// Number of reflecting surfaces in the system.
inline constexpr int kSurfaces = 2;

/// How the two surface paths combine at a receiver when computing SINR.
enum class Combining
{
    coherent,  // |h1 v1 + h2 v2|^2
    incoherent // |h1 v1|^2 + |h2 v2|^2
};

/// Scalar system parameters. Powers are linear watts, noise is a variance.
struct SystemConfig
{
    int num_antennas = 8;           // BS antennas
    int num_users = 8;              // single-antenna users
    int num_elements = 16;          // reflecting elements per surface
    double p_max = 1e6;             // transmit power budget (60 dB)
    double noise_power = 1.0;       // receiver noise variance
    double qos_threshold = 6.6;     // per-user QoS threshold
    double amp_inefficiency = 1.25; // inverse power-amplifier efficiency, >= 1
    double p_user_static = 0.1;     // per-user hardware power
    double p_bs_static = 1.0;       // BS hardware power
    double p_element_static = 0.01; // per-element phase-shifter power
    std::uint64_t rng_seed = 1;

    Combining combining = Combining::coherent;
    int powered_surfaces = 2; // surfaces whose element power is counted

    /// Throws Error(config) describing the first violated invariant.
    void validate() const;

    /// Hardware power independent of the beamformers.
    double static_power() const;
};

/// Converts a decibel value to a linear ratio, 10^(db/10).
double from_db(double db);

/// Channel blocks of one realization. Index 0/1 selects the surface.
struct ChannelSet
{
    std::array<CMatrix, kSurfaces> bs_to_ris;    // N x M each
    std::array<CMatrix, kSurfaces> ris_to_users; // K x N each, row k feeds user k
};

/// Unit-modulus reflection coefficients of both surfaces.
struct PhasePair
{
    std::array<CVector, kSurfaces> shifts; // length N each

    static PhasePair ones(int num_elements);
    /// Independent uniform phases on [0, 2pi) for every element.
    static PhasePair random(int num_elements, Rng &rng);
    /// Largest ||phi_n| - 1| over both surfaces.
    double modulus_deviation() const;
};

/// Transmit beamformers feeding the two surfaces; column k serves user k.
struct BeamPair
{
    std::array<CMatrix, kSurfaces> beams; // M x K each

    static BeamPair zeros(int num_antennas, int num_users);
    /// ||V1||_F^2 + ||V2||_F^2
    double transmit_power() const;
};

/// Composite BS -> surface -> user rows; row k of `rows[s]` is g_sk diag(phi_s) H_s.
struct EffectiveChannels
{
    std::array<CMatrix, kSurfaces> rows; // K x M each
};

struct RateReport
{
    RVector signal;       // per user
    RVector interference; // per user
    RVector sinr;
    RVector rate; // log2(1 + sinr)
    double sum_rate = 0.0;
};

/// I.i.d. CN(0,1) channel entries from a stream keyed by (cfg.rng_seed, draw_index).
ChannelSet draw_channels(const SystemConfig &cfg, std::uint64_t draw_index);

EffectiveChannels effective_channels(const ChannelSet &ch, const PhasePair &ph);

/// K x K matrix whose (k, j) entry is h1k v1j + h2k v2j.
CMatrix link_gains(const EffectiveChannels &eff, const BeamPair &bp);

RateReport sinr_and_rate(const ChannelSet &ch, const PhasePair &ph, const BeamPair &bp, const SystemConfig &cfg);
RateReport sinr_and_rate(const EffectiveChannels &eff, const BeamPair &bp, const SystemConfig &cfg);

/// Amplifier-weighted transmit power plus all static consumption.
double total_power(const BeamPair &bp, const SystemConfig &cfg);

/// Sum rate over (transmit power + static power).
double ee_objective(const ChannelSet &ch, const PhasePair &ph, const BeamPair &bp, const SystemConfig &cfg);
double ee_objective(double sum_rate, const BeamPair &bp, const SystemConfig &cfg);

/// Checks that channel, phase and beam shapes agree with cfg.
void check_dimensions(const ChannelSet &ch, const SystemConfig &cfg);
void check_dimensions(const PhasePair &ph, const SystemConfig &cfg);
void check_dimensions(const BeamPair &bp, const SystemConfig &cfg);

} // namespace dualris

#endif
