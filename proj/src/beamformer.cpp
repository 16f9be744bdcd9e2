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

#include "dualris/beamformer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dualris
{

namespace
{

// Relative size below which an eigenvalue counts as zero when mu = 0.
constexpr double kNullEigenvalue = 1e-12;
// Relative size below which the power weight of a null direction is rounding noise.
constexpr double kNullWeight = 1e-20;

PowerDual solve_power_dual(const PowerSpectrum &f, double p_max)
{
    if (!(p_max > 0.0))
        throw Error(ErrorKind::config, "solve_power_dual: power budget must be positive");

    PowerDual out;
    out.mu_max = f.mu_max(p_max);
    const double f0 = f(0.0);
    if (f0 <= p_max)
    {
        out.mu = 0.0;
        out.power = f0;
        return out;
    }

    double lo = 0.0;
    double hi = out.mu_max;
    double f_hi = f(hi);
    if (f_hi > p_max * (1.0 + 1e-12))
        throw Error(ErrorKind::numerical, "solve_power_dual: power at the upper bracket exceeds the budget", f_hi);

    const double tol = kPowerDualTolerance * p_max;
    for (int it = 0; it <= kPowerDualMaxIterations; ++it)
    {
        if (p_max - f_hi <= tol)
        {
            out.mu = hi;
            out.power = f_hi;
            out.iterations = it;
            return out;
        }
        if (it == kPowerDualMaxIterations)
            break;
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi)
            break;
        const double f_mid = f(mid);
        if (f_mid > p_max)
            lo = mid;
        else
        {
            hi = mid;
            f_hi = f_mid;
        }
    }
    throw Error(ErrorKind::convergence,
                "solve_power_dual: bisection did not reach the power budget (residual " +
                    std::to_string((p_max - f_hi) / p_max) + ")",
                hi);
}

} // namespace

double WmmseState::objective() const
{
    double sum = 0.0;
    for (Eigen::Index k = 0; k < weight.size(); ++k)
        sum += std::log(weight(k)) - weight(k) * mse(k);
    return sum;
}

double mse(cdouble decoder, const EffectiveChannels &eff, const BeamPair &bp, int k, double noise_power)
{
    const CMatrix gains = link_gains(eff, bp);
    if (k < 0 || k >= gains.rows())
        throw Error(ErrorKind::dimension, "mse: user index out of range");
    double leakage = noise_power;
    for (Eigen::Index j = 0; j < gains.cols(); ++j)
        if (j != k)
            leakage += std::norm(gains(k, j));
    return std::norm(std::conj(decoder) * gains(k, k) - 1.0) + std::norm(decoder) * leakage;
}

CVector update_decoder(const EffectiveChannels &eff, const BeamPair &bp, const SystemConfig &cfg)
{
    const CMatrix gains = link_gains(eff, bp);
    const Eigen::Index K = gains.rows();
    CVector u(K);
    for (Eigen::Index k = 0; k < K; ++k)
    {
        const double received = gains.row(k).squaredNorm() + cfg.noise_power;
        u(k) = gains(k, k) / received;
    }
    return u;
}

CVector update_decoder(const ChannelSet &ch, const PhasePair &ph, const BeamPair &bp, const SystemConfig &cfg)
{
    return update_decoder(effective_channels(ch, ph), bp, cfg);
}

RVector update_weight(const RVector &mse)
{
    RVector q(mse.size());
    for (Eigen::Index k = 0; k < mse.size(); ++k)
    {
        if (!(mse(k) > 0.0))
            throw Error(ErrorKind::numerical, "update_weight: non-positive MSE for user " + std::to_string(k), mse(k));
        q(k) = 1.0 / mse(k);
    }
    return q;
}

WmmseState refresh_state(const EffectiveChannels &eff, const BeamPair &bp, const SystemConfig &cfg)
{
    const CMatrix gains = link_gains(eff, bp);
    const Eigen::Index K = gains.rows();
    WmmseState st;
    st.decoder.resize(K);
    st.mse.resize(K);
    for (Eigen::Index k = 0; k < K; ++k)
    {
        const double received = gains.row(k).squaredNorm() + cfg.noise_power;
        st.decoder(k) = gains(k, k) / received;
        // Closed form of the MSE at the MMSE decoder: 1 - |s_k|^2 / J_k.
        st.mse(k) = (received - std::norm(gains(k, k))) / received;
    }
    st.weight = update_weight(st.mse);
    return st;
}

PowerSpectrum::PowerSpectrum(std::span<const PowerBlock> blocks)
{
    double top = 0.0;
    double total = 0.0;
    for (const auto &b : blocks)
    {
        require_square(b.quad, "power block");
        if (b.rhs.rows() != b.quad.rows())
            throw Error(ErrorKind::dimension, "power block: rhs rows do not match the quadratic");
        auto eig = hermitian_eig(b.quad);
        if (eig.eigenvalues.size() > 0)
        {
            const double lmax = eig.eigenvalues.maxCoeff();
            const double lmin = eig.eigenvalues.minCoeff();
            if (lmin < -tolerance::psd_floor * std::max(1.0, lmax))
                throw Error(ErrorKind::numerical, "power block: quadratic is not positive semidefinite", lmin);
            eig.eigenvalues = eig.eigenvalues.cwiseMax(0.0);
            top = std::max(top, lmax);
        }
        RVector w = (eig.eigenvectors.adjoint() * b.rhs).cwiseAbs2().rowwise().sum();
        total += w.sum();
        eigs_.push_back(std::move(eig));
        weights_.push_back(std::move(w));
    }
    null_level_ = kNullEigenvalue * top;
    weight_floor_ = kNullWeight * total;
}

bool PowerSpectrum::is_null(double lambda, double mu) const
{
    return lambda + mu <= null_level_;
}

double PowerSpectrum::operator()(double mu) const
{
    double sum = 0.0;
    for (std::size_t b = 0; b < eigs_.size(); ++b)
    {
        const RVector &lambda = eigs_[b].eigenvalues;
        const RVector &w = weights_[b];
        for (Eigen::Index m = 0; m < lambda.size(); ++m)
        {
            if (is_null(lambda(m), mu))
            {
                if (w(m) <= weight_floor_)
                    continue;
                return std::numeric_limits<double>::infinity();
            }
            const double d = lambda(m) + mu;
            sum += w(m) / (d * d);
        }
    }
    return sum;
}

double PowerSpectrum::weight_sum() const
{
    double total = 0.0;
    for (const auto &w : weights_)
        total += w.sum();
    return total;
}

double PowerSpectrum::mu_max(double p_max) const
{
    return std::sqrt(weight_sum() / p_max);
}

PowerDual solve_power_dual(std::span<const PowerBlock> blocks, double p_max)
{
    return solve_power_dual(PowerSpectrum(blocks), p_max);
}

PowerDual solve_power_dual(const CMatrix &quad1, const CMatrix &quad2, const CMatrix &rhs1, const CMatrix &rhs2,
                           double p_max)
{
    const PowerBlock blocks[] = {{quad1, rhs1}, {quad2, rhs2}};
    return solve_power_dual(std::span<const PowerBlock>(blocks), p_max);
}

std::vector<PowerBlock> beamformer_blocks(const EffectiveChannels &eff, const WmmseState &state, Coupling coupling)
{
    const Eigen::Index K = eff.rows[0].rows();
    const Eigen::Index M = eff.rows[0].cols();
    if (state.decoder.size() != K || state.weight.size() != K)
        throw Error(ErrorKind::dimension, "beamformer_blocks: WMMSE state does not match the user count");

    // q_k |u_k|^2 weights the quadratic, u_k q_k scales the matched-filter term.
    const RVector quad_weight = state.weight.cwiseProduct(state.decoder.cwiseAbs2());
    const CVector rhs_weight = state.decoder.cwiseProduct(state.weight.cast<cdouble>());

    auto make_block = [&](const CMatrix &rows) {
        PowerBlock b;
        b.quad = hermitian_part(rows.adjoint() * quad_weight.cast<cdouble>().asDiagonal() * rows);
        b.rhs = rows.adjoint() * rhs_weight.asDiagonal();
        return b;
    };

    std::vector<PowerBlock> blocks;
    if (coupling == Coupling::joint)
    {
        CMatrix stacked(K, 2 * M);
        stacked << eff.rows[0], eff.rows[1];
        blocks.push_back(make_block(stacked));
    }
    else
    {
        blocks.push_back(make_block(eff.rows[0]));
        blocks.push_back(make_block(eff.rows[1]));
    }
    return blocks;
}

BeamUpdate update_beamformers(const EffectiveChannels &eff, const WmmseState &state, const SystemConfig &cfg,
                              Coupling coupling)
{
    const auto blocks = beamformer_blocks(eff, state, coupling);
    const PowerSpectrum spectrum(blocks);

    BeamUpdate out;
    out.dual = solve_power_dual(spectrum, cfg.p_max);
    const double mu = out.dual.mu;

    std::vector<CMatrix> solved;
    for (std::size_t b = 0; b < blocks.size(); ++b)
    {
        const HermitianEig &eig = spectrum.eigs()[b];
        RVector inv(eig.eigenvalues.size());
        for (Eigen::Index m = 0; m < inv.size(); ++m)
            inv(m) = spectrum.is_null(eig.eigenvalues(m), mu) ? 0.0 : 1.0 / (eig.eigenvalues(m) + mu);
        solved.push_back(eig.eigenvectors * inv.cast<cdouble>().asDiagonal() *
                         (eig.eigenvectors.adjoint() * blocks[b].rhs));
    }

    const Eigen::Index M = eff.rows[0].cols();
    if (coupling == Coupling::joint)
    {
        out.beams.beams[0] = solved[0].topRows(M);
        out.beams.beams[1] = solved[0].bottomRows(M);
    }
    else
    {
        out.beams.beams[0] = std::move(solved[0]);
        out.beams.beams[1] = std::move(solved[1]);
    }

    // The multiplier keeps f(mu) <= p_max; rounding in the back-substitution
    // may still overshoot by a few ulps.
    const double power = out.beams.transmit_power();
    if (power > cfg.p_max)
    {
        const double scale = std::sqrt(cfg.p_max / power);
        for (auto &v : out.beams.beams)
            v *= scale;
    }
    return out;
}

BeamUpdate update_beamformers(const ChannelSet &ch, const PhasePair &ph, const WmmseState &state,
                              const SystemConfig &cfg, Coupling coupling)
{
    return update_beamformers(effective_channels(ch, ph), state, cfg, coupling);
}

BeamformingResult beamforming_stage(const ChannelSet &ch, const PhasePair &ph, const BeamPair &init,
                                    const SystemConfig &cfg, const BeamformingOptions &opt)
{
    check_dimensions(ch, cfg);
    check_dimensions(ph, cfg);
    check_dimensions(init, cfg);
    if (init.transmit_power() > cfg.p_max * (1.0 + 1e-9))
        throw Error(ErrorKind::infeasible, "beamforming_stage: initial beamformers exceed the power budget",
                    init.transmit_power());

    const EffectiveChannels eff = effective_channels(ch, ph);
    BeamformingResult out;
    out.beams = init;
    out.state = refresh_state(eff, out.beams, cfg);
    out.objective.push_back(out.state.objective());

    // Relative change is measured on sum_k ln q_k (the objective plus K), which
    // equals the sum rate in nats and stays away from zero.
    const double offset = static_cast<double>(cfg.num_users);
    for (int it = 1; it <= opt.max_iterations; ++it)
    {
        BeamUpdate upd = update_beamformers(eff, out.state, cfg, opt.coupling);
        out.beams = std::move(upd.beams);
        out.state = refresh_state(eff, out.beams, cfg);
        out.state.dual = upd.dual.mu;
        out.iterations = it;

        const double prev = out.objective.back() + offset;
        const double curr = out.state.objective() + offset;
        out.objective.push_back(out.state.objective());
        if (std::abs(curr - prev) <= opt.tolerance * std::max(std::abs(prev), 1e-300))
            break;
        if (it == opt.max_iterations)
            out.cap_hit = true;
    }

    for (Eigen::Index k = 0; k < out.state.weight.size(); ++k)
        if (std::log(out.state.weight(k)) - out.state.weight(k) * out.state.mse(k) < cfg.qos_threshold)
            ++out.qos_violations;
    return out;
}

} // namespace dualris
