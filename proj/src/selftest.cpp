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

#include <cmath>
#include <numbers>
#include <sstream>

#include "dualris/campaign.hpp"
#include "dualris/cli.hpp"
#include "dualris/format.hpp"

namespace dualris
{

namespace
{

SystemConfig small_config(std::uint64_t seed)
{
    SystemConfig cfg;
    cfg.num_antennas = 4;
    cfg.num_users = 2;
    cfg.num_elements = 8;
    cfg.p_max = from_db(20.0);
    cfg.rng_seed = seed;
    return cfg;
}

struct Instance
{
    SystemConfig cfg;
    ChannelSet ch;
    PhasePair ph;
    BeamPair bp;
};

Instance instance(std::uint64_t seed)
{
    Instance in;
    in.cfg = small_config(seed);
    in.ch = draw_channels(in.cfg, 0);
    Rng rng = make_rng(seed, {0x7e57});
    in.ph = PhasePair::random(in.cfg.num_elements, rng);
    in.bp = matched_filter_beams(in.ch, in.ph, in.cfg);
    return in;
}

template <class F>
CheckResult check(const char *name, F &&body)
{
    CheckResult r;
    r.name = name;
    try
    {
        double worst = 0.0;
        r.passed = body(worst);
        r.detail = "worst " + format_double(worst);
    }
    catch (const std::exception &e)
    {
        r.passed = false;
        r.detail = e.what();
    }
    return r;
}

} // namespace

std::vector<CheckResult> self_test()
{
    std::vector<CheckResult> out;

    out.push_back(check("hermitian eigendecomposition reconstructs its input", [](double &worst) {
        Rng rng = make_rng(11, {});
        std::normal_distribution<double> n(0.0, 1.0);
        for (int trial = 0; trial < 10; ++trial)
        {
            CMatrix a(8, 8);
            for (Eigen::Index i = 0; i < a.size(); ++i)
                a(i) = cdouble(n(rng), n(rng));
            a = hermitian_part(a);
            const HermitianEig e = hermitian_eig(a);
            const CMatrix back = e.eigenvectors * e.eigenvalues.cast<cdouble>().asDiagonal() * e.eigenvectors.adjoint();
            worst = std::max(worst, (back - a).cwiseAbs().maxCoeff());
        }
        return worst < tolerance::eig_reconstruction;
    }));

    out.push_back(check("rate equals sum of log weights", [](double &worst) {
        for (std::uint64_t s = 0; s < 10; ++s)
        {
            const Instance in = instance(s);
            const EffectiveChannels eff = effective_channels(in.ch, in.ph);
            const WmmseState st = refresh_state(eff, in.bp, in.cfg);
            const double via_weights = st.weight.array().log().sum() / std::numbers::ln2;
            const double rate = sinr_and_rate(eff, in.bp, in.cfg).sum_rate;
            worst = std::max(worst, std::abs(via_weights - rate));
        }
        return worst <= 1e-8;
    }));

    out.push_back(check("power dual meets a binding budget", [](double &worst) {
        for (std::uint64_t s = 0; s < 10; ++s)
        {
            const Instance in = instance(s);
            const EffectiveChannels eff = effective_channels(in.ch, in.ph);
            const WmmseState st = refresh_state(eff, in.bp, in.cfg);
            const auto blocks = beamformer_blocks(eff, st, Coupling::joint);
            const double budget = 1e-3;
            const PowerDual d = solve_power_dual(blocks, budget);
            worst = std::max(worst, std::abs(d.power - budget) / budget);
        }
        return worst <= 1e-8;
    }));

    out.push_back(check("MM surrogate touches and majorizes f", [](double &worst) {
        bool ok = true;
        for (std::uint64_t s = 0; s < 5; ++s)
        {
            const Instance in = instance(s);
            const WmmseState st = refresh_state(effective_channels(in.ch, in.ph), in.bp, in.cfg);
            const PhaseQuadratics pq = build_quadratics(in.ch, in.bp, st);
            const CVector phi_n = stack_phases(in.ph);
            const MmLinearization lin = mm_linearize(pq, phi_n);
            const double f_n = pq.objective(phi_n);
            worst = std::max(worst, std::abs(surrogate_value(pq, lin, phi_n) - f_n) / std::max(1.0, std::abs(f_n)));
            Rng rng = make_rng(s, {0x33});
            for (int i = 0; i < 20; ++i)
            {
                const CVector phi = stack_phases(PhasePair::random(in.cfg.num_elements, rng));
                const double f = pq.objective(phi);
                ok = ok && surrogate_value(pq, lin, phi) >= f - 1e-9 * std::max(1.0, std::abs(f));
            }
        }
        return ok && worst <= 1e-8;
    }));

    out.push_back(check("same-random matches fixed phases", [](double &worst) {
        for (std::uint64_t s = 0; s < 3; ++s)
        {
            const SystemConfig cfg = small_config(s);
            const ChannelSet ch = draw_channels(cfg, 0);
            AlternatingConfig alt;
            Rng rng = make_rng(s, {0x5a});
            const double same = run_baseline(BaselineKind::same_random, ch, cfg, alt, rng).sum_rate;
            const double fixed = run_baseline(BaselineKind::fixed_phase, ch, cfg, alt, rng).sum_rate;
            worst = std::max(worst, std::abs(same - fixed));
        }
        return worst <= 1e-6;
    }));

    out.push_back(check("campaign rows are reproducible", [](double &worst) {
        Campaign c = figure_campaign(3, Scale::desk);
        c.grid = {4};
        c.draws = 2;
        c.alt.max_iterations = 5;
        c.master_seed = 3;
        const std::string a = rows_csv(c, campaign_rows(c));
        c.threads = 1;
        const std::string b = rows_csv(c, campaign_rows(c));
        worst = a == b ? 0.0 : 1.0;
        return a == b;
    }));

    return out;
}

} // namespace dualris
