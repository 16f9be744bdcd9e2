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

#include "dualris/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <string>

namespace dualris
{

namespace
{

// Stream tag for restart phases, kept apart from channel draw indices.
constexpr std::uint64_t kRestartStream = 0x7265737461727473ULL;

struct Evaluation
{
    RateReport rates;
    double ee = 0.0;
    double objective = 0.0;
};

Evaluation evaluate(const ChannelSet &ch, const PhasePair &ph, const BeamPair &bp, const SystemConfig &cfg,
                    Objective objective)
{
    Evaluation e;
    e.rates = sinr_and_rate(ch, ph, bp, cfg);
    e.ee = ee_objective(e.rates.sum_rate, bp, cfg);
    e.objective = objective == Objective::sum_rate ? e.rates.sum_rate : e.ee;
    return e;
}

double qos_margin(const ChannelSet &ch, const BeamPair &bp, const WmmseState &state, const PhasePair &ph,
                  const SystemConfig &cfg, Coupling coupling)
{
    const PhaseQuadratics pq = build_quadratics(ch, bp, state, coupling);
    const CVector phi = stack_phases(ph);
    double m = std::numeric_limits<double>::infinity();
    for (int k = 0; k < static_cast<int>(pq.user_quad.size()); ++k)
        m = std::min(m, pq.constraint_lhs(k, phi) - cfg.qos_threshold);
    return m;
}

OptimizeResult run_from(const ChannelSet &ch, const SystemConfig &cfg, const AlternatingConfig &alt,
                        const Initialization &init)
{
    using clock = std::chrono::steady_clock;

    OptimizeResult best;
    best.objective = -std::numeric_limits<double>::infinity();
    BeamPair bp = init.beams;
    PhasePair ph = init.phases;

    auto consider = [&](const BeamPair &b, const PhasePair &p, const Evaluation &e, int iteration) {
        if (e.objective > best.objective)
        {
            best.beams = b;
            best.phases = p;
            best.objective = e.objective;
            best.sum_rate = e.rates.sum_rate;
            best.ee = e.ee;
            best.best_iteration = iteration;
        }
    };

    double previous = std::numeric_limits<double>::quiet_NaN();
    for (int n = 1; n <= alt.max_iterations; ++n)
    {
        const auto start = clock::now();
        IterationRecord rec;
        rec.iteration = n;

        BeamformingResult bf;
        try
        {
            bf = beamforming_stage(ch, ph, bp, cfg, alt.beamforming);
        }
        catch (const Error &e)
        {
            throw e.with_context("outer iteration " + std::to_string(n) + ", beamforming stage");
        }
        bp = bf.beams;
        rec.beamforming_iterations = bf.iterations;
        rec.beamforming_cap_hit = bf.cap_hit;
        rec.qos_violations = bf.qos_violations;
        consider(bp, ph, evaluate(ch, ph, bp, cfg, alt.objective), n);

        if (alt.optimize_phases)
        {
            PhaseStageResult ps;
            try
            {
                ps = phase_stage(ch, bp, bf.state, ph, cfg, alt.phase);
            }
            catch (const Error &e)
            {
                throw e.with_context("outer iteration " + std::to_string(n) + ", phase stage");
            }
            ph = ps.phases;
            rec.phase_iterations = ps.iterations;
            rec.phase_infeasible = ps.infeasible;
        }

        const Evaluation now = evaluate(ch, ph, bp, cfg, alt.objective);
        consider(bp, ph, now, n);

        rec.sum_rate = now.rates.sum_rate;
        rec.ee = now.ee;
        rec.transmit_power = bp.transmit_power();
        rec.min_user_rate = now.rates.rate.minCoeff();
        rec.objective = now.objective;
        rec.best_objective = best.objective;
        rec.best_sum_rate = best.sum_rate;
        rec.best_ee = best.ee;
        rec.qos_margin = qos_margin(ch, bp, bf.state, ph, cfg, alt.phase.coupling);
        rec.wall_ms = std::chrono::duration<double, std::milli>(clock::now() - start).count();
        best.trace.records.push_back(rec);

        if (std::isfinite(previous) &&
            std::abs(now.objective - previous) <= alt.tolerance * std::max(std::abs(previous), 1e-300))
            break;
        previous = now.objective;
    }
    return best;
}

} // namespace

void AlternatingConfig::validate() const
{
    if (max_iterations < 1)
        throw Error(ErrorKind::config, "alternating optimizer: n_max must be >= 1");
    if (!(tolerance > 0.0))
        throw Error(ErrorKind::config, "alternating optimizer: eps must be positive");
    if (beamforming.max_iterations < 0 || !(beamforming.tolerance > 0.0))
        throw Error(ErrorKind::config, "alternating optimizer: invalid beamforming stage limits");
    if (phase.max_iterations < 0 || !(phase.tolerance > 0.0) || !(phase.bisection_eps > 0.0) ||
        phase.receiver_rounds < 1)
        throw Error(ErrorKind::config, "alternating optimizer: invalid phase stage limits");
    if (restarts < 1)
        throw Error(ErrorKind::config, "alternating optimizer: restarts must be >= 1");
}

void AlternatingConfig::set_coupling(Coupling coupling)
{
    beamforming.coupling = coupling;
    phase.coupling = coupling;
}

BeamPair matched_filter_beams(const ChannelSet &ch, const PhasePair &ph, const SystemConfig &cfg)
{
    const EffectiveChannels eff = effective_channels(ch, ph);
    BeamPair bp;
    for (int s = 0; s < kSurfaces; ++s)
        bp.beams[s] = eff.rows[s].adjoint();
    const double power = bp.transmit_power();
    if (power > 0.0)
    {
        const double scale = std::sqrt(cfg.p_max / power);
        for (auto &v : bp.beams)
            v *= scale;
    }
    return bp;
}

Initialization default_init(const ChannelSet &ch, const SystemConfig &cfg)
{
    Initialization init;
    init.phases = PhasePair::ones(cfg.num_elements);
    init.beams = matched_filter_beams(ch, init.phases, cfg);
    return init;
}

OptimizeResult optimize(const ChannelSet &ch, const SystemConfig &cfg, const AlternatingConfig &alt,
                        const std::optional<Initialization> &init)
{
    cfg.validate();
    alt.validate();
    check_dimensions(ch, cfg);

    OptimizeResult best = run_from(ch, cfg, alt, init ? *init : default_init(ch, cfg));
    for (int r = 1; r < alt.restarts; ++r)
    {
        Rng rng = make_rng(cfg.rng_seed, {kRestartStream, static_cast<std::uint64_t>(r)});
        Initialization start;
        start.phases = PhasePair::random(cfg.num_elements, rng);
        start.beams = matched_filter_beams(ch, start.phases, cfg);
        OptimizeResult candidate = run_from(ch, cfg, alt, start);
        if (candidate.objective > best.objective)
            best = std::move(candidate);
    }
    return best;
}

} // namespace dualris
