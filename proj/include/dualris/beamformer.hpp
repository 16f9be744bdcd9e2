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

#ifndef DUALRIS_BEAMFORMER_HPP
#define DUALRIS_BEAMFORMER_HPP

#include <span>
#include <vector>

#include "dualris/model.hpp"

// Transmit-beamforming subproblem for fixed phases, solved by WMMSE block
// updates: MMSE decoders, MSE weights, and Lagrangian beamformers whose power
// multiplier is found by bisection on the eigen-expanded power equation.

namespace dualris
{

/// Which cross-surface terms the WMMSE quadratic keeps.
enum class Coupling
{
    /// Full weighted MSE of the coherent sum h1 v1 + h2 v2. The two beamformers
    /// are treated as one stacked 2M-antenna precoder.
    joint,
    /// Cross terms between the two surfaces dropped: one M x M quadratic per
    /// surface, sharing a single power multiplier.
    per_surface
};

struct WmmseState
{
    CVector decoder; // u_k, per user
    RVector weight;  // q_k > 0
    RVector mse;     // e_k in (0, 1]
    double dual = 0.0;

    /// sum_k ln q_k - q_k e_k
    double objective() const;
};

/// Mean square error of user k with receive coefficient `decoder`.
double mse(cdouble decoder, const EffectiveChannels &eff, const BeamPair &bp, int k, double noise_power);

/// MMSE receive coefficients u_k = s_k / J_k.
CVector update_decoder(const EffectiveChannels &eff, const BeamPair &bp, const SystemConfig &cfg);
CVector update_decoder(const ChannelSet &ch, const PhasePair &ph, const BeamPair &bp, const SystemConfig &cfg);

/// q_k = 1 / e_k. Throws Error(numerical) for e_k <= 0.
RVector update_weight(const RVector &mse);

/// Decoder, MSE and weight updates at the given beamformers; `dual` is left at 0.
WmmseState refresh_state(const EffectiveChannels &eff, const BeamPair &bp, const SystemConfig &cfg);

/// One block of the power equation: a Hermitian PSD quadratic and the
/// right-hand-side columns of (quad + mu I) x = rhs.
struct PowerBlock
{
    CMatrix quad;
    CMatrix rhs;
};

/// Eigen-expanded power f(mu) = sum_m w_m / (lambda_m + mu)^2 over all blocks.
class PowerSpectrum
{
  public:
    explicit PowerSpectrum(std::span<const PowerBlock> blocks);

    /// Power of the beamformers at multiplier mu. Directions with a numerically
    /// zero eigenvalue and zero weight are skipped at mu = 0 (pseudo-inverse).
    double operator()(double mu) const;

    /// sqrt(sum_m w_m / p_max); f(mu_max) <= p_max.
    double mu_max(double p_max) const;

    double weight_sum() const;

    const std::vector<HermitianEig> &eigs() const { return eigs_; }
    const std::vector<RVector> &weights() const { return weights_; }

    /// True when eigenvalue `lambda` shifted by `mu` is treated as zero.
    bool is_null(double lambda, double mu) const;

  private:
    std::vector<HermitianEig> eigs_;
    std::vector<RVector> weights_;
    double null_level_ = 0.0;
    double weight_floor_ = 0.0;
};

struct PowerDual
{
    double mu = 0.0;
    double mu_max = 0.0;
    double power = 0.0; // f(mu)
    int iterations = 0;
};

inline constexpr int kPowerDualMaxIterations = 200;
inline constexpr double kPowerDualTolerance = 1e-8; // relative to p_max

/// Smallest mu >= 0 meeting the power budget: 0 when f(0) <= p_max, otherwise
/// the root of f(mu) = p_max bracketed in (0, mu_max], located by bisection.
PowerDual solve_power_dual(std::span<const PowerBlock> blocks, double p_max);
PowerDual solve_power_dual(const CMatrix &quad1, const CMatrix &quad2, const CMatrix &rhs1, const CMatrix &rhs2,
                           double p_max);

/// Quadratic blocks of the beamformer subproblem at the current decoder/weights.
std::vector<PowerBlock> beamformer_blocks(const EffectiveChannels &eff, const WmmseState &state, Coupling coupling);

struct BeamUpdate
{
    BeamPair beams;
    PowerDual dual;
};

/// Closed-form beamformers (quad + mu I)^{-1} rhs with mu from solve_power_dual.
BeamUpdate update_beamformers(const EffectiveChannels &eff, const WmmseState &state, const SystemConfig &cfg,
                              Coupling coupling = Coupling::joint);
BeamUpdate update_beamformers(const ChannelSet &ch, const PhasePair &ph, const WmmseState &state,
                              const SystemConfig &cfg, Coupling coupling = Coupling::joint);

struct BeamformingOptions
{
    int max_iterations = 100;
    double tolerance = 1e-6; // relative change of sum_k ln q_k
    Coupling coupling = Coupling::joint;
};

struct BeamformingResult
{
    BeamPair beams;
    WmmseState state;              // decoder/weights refreshed at `beams`
    std::vector<double> objective; // sum_k (ln q_k - q_k e_k); entry 0 is the initial point
    int iterations = 0;
    bool cap_hit = false;
    int qos_violations = 0; // users with ln q_k - q_k e_k < R at the end
};

/// Repeats decoder, weight and beamformer updates from `init` until the
/// relative change of the WMMSE objective drops below the tolerance.
BeamformingResult beamforming_stage(const ChannelSet &ch, const PhasePair &ph, const BeamPair &init,
                                    const SystemConfig &cfg, const BeamformingOptions &opt = {});

} // namespace dualris

#endif
