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

#include "dualris/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dualris/random.hpp"

namespace dualris
{

namespace
{

void config_fail(const std::string &message)
{
    throw Error(ErrorKind::config, "invalid system configuration: " + message);
}

void fill_gaussian(CMatrix &m, Rng &rng)
{
    // CN(0,1): real and imaginary parts each carry variance 1/2.
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
        {
            const double re = normal(rng);
            const double im = normal(rng);
            m(r, c) = cdouble(re, im);
        }
}

void dimension_fail(const std::string &message)
{
    throw Error(ErrorKind::dimension, message);
}

} // namespace

void SystemConfig::validate() const
{
    if (num_antennas < 1)
        config_fail("M must be >= 1");
    if (num_users < 1)
        config_fail("K must be >= 1");
    if (num_elements < 1)
        config_fail("N must be >= 1");
    if (!(p_max > 0.0) || !std::isfinite(p_max))
        config_fail("P_max must be positive and finite");
    if (!(noise_power > 0.0) || !std::isfinite(noise_power))
        config_fail("sigma2 must be positive and finite");
    if (!(qos_threshold >= 0.0) || !std::isfinite(qos_threshold))
        config_fail("R must be >= 0");
    if (!(amp_inefficiency >= 1.0) || !std::isfinite(amp_inefficiency))
        config_fail("beta must be >= 1");
    if (!(p_user_static >= 0.0) || !(p_bs_static >= 0.0) || !(p_element_static >= 0.0))
        config_fail("static powers must be >= 0");
    if (powered_surfaces < 0 || powered_surfaces > kSurfaces)
        config_fail("powered surface count must be 0, 1 or 2");
}

double SystemConfig::static_power() const
{
    return num_users * p_user_static + p_bs_static + powered_surfaces * num_elements * p_element_static;
}

double from_db(double db)
{
    return std::pow(10.0, db / 10.0);
}

PhasePair PhasePair::ones(int num_elements)
{
    PhasePair ph;
    for (auto &s : ph.shifts)
        s = CVector::Ones(num_elements);
    return ph;
}

PhasePair PhasePair::random(int num_elements, Rng &rng)
{
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    PhasePair ph;
    for (auto &s : ph.shifts)
    {
        s.resize(num_elements);
        for (int n = 0; n < num_elements; ++n)
            s(n) = std::polar(1.0, angle(rng));
    }
    return ph;
}

double PhasePair::modulus_deviation() const
{
    double worst = 0.0;
    for (const auto &s : shifts)
        for (Eigen::Index n = 0; n < s.size(); ++n)
            worst = std::max(worst, std::abs(std::abs(s(n)) - 1.0));
    return worst;
}

BeamPair BeamPair::zeros(int num_antennas, int num_users)
{
    BeamPair bp;
    for (auto &b : bp.beams)
        b = CMatrix::Zero(num_antennas, num_users);
    return bp;
}

double BeamPair::transmit_power() const
{
    return beams[0].squaredNorm() + beams[1].squaredNorm();
}

ChannelSet draw_channels(const SystemConfig &cfg, std::uint64_t draw_index)
{
    cfg.validate();
    const int M = cfg.num_antennas, K = cfg.num_users, N = cfg.num_elements;
    Rng rng = make_rng(cfg.rng_seed, {draw_index});

    ChannelSet ch;
    for (int s = 0; s < kSurfaces; ++s)
    {
        ch.bs_to_ris[s].resize(N, M);
        fill_gaussian(ch.bs_to_ris[s], rng);
    }
    for (int s = 0; s < kSurfaces; ++s)
    {
        ch.ris_to_users[s].resize(K, N);
        fill_gaussian(ch.ris_to_users[s], rng);
    }
    return ch;
}

EffectiveChannels effective_channels(const ChannelSet &ch, const PhasePair &ph)
{
    EffectiveChannels eff;
    for (int s = 0; s < kSurfaces; ++s)
    {
        const CMatrix &g = ch.ris_to_users[s];
        const CMatrix &h = ch.bs_to_ris[s];
        const CVector &phi = ph.shifts[s];
        if (g.cols() != phi.size() || h.rows() != phi.size())
            dimension_fail("effective_channels: surface " + std::to_string(s) + " has " +
                           std::to_string(phi.size()) + " phases but channels expect " + std::to_string(g.cols()) +
                           "/" + std::to_string(h.rows()));
        // g diag(phi) H: scale the columns of g by phi.
        eff.rows[s] = (g * phi.asDiagonal()) * h;
    }
    if (eff.rows[0].rows() != eff.rows[1].rows() || eff.rows[0].cols() != eff.rows[1].cols())
        dimension_fail("effective_channels: surfaces disagree on user or antenna count");
    return eff;
}

CMatrix link_gains(const EffectiveChannels &eff, const BeamPair &bp)
{
    for (int s = 0; s < kSurfaces; ++s)
        if (eff.rows[s].cols() != bp.beams[s].rows() || eff.rows[s].rows() != bp.beams[s].cols())
            dimension_fail("link_gains: beamformer shape does not match effective channel");
    return eff.rows[0] * bp.beams[0] + eff.rows[1] * bp.beams[1];
}

RateReport sinr_and_rate(const EffectiveChannels &eff, const BeamPair &bp, const SystemConfig &cfg)
{
    const Eigen::Index K = eff.rows[0].rows();
    RateReport out;
    out.signal.resize(K);
    out.interference.resize(K);
    out.sinr.resize(K);
    out.rate.resize(K);

    if (cfg.combining == Combining::coherent)
    {
        const CMatrix gains = link_gains(eff, bp);
        const Eigen::MatrixXd power = gains.cwiseAbs2();
        for (Eigen::Index k = 0; k < K; ++k)
        {
            out.signal(k) = power(k, k);
            out.interference(k) = power.row(k).sum() - power(k, k);
        }
    }
    else
    {
        link_gains(eff, bp); // shape check
        const Eigen::MatrixXd p1 = (eff.rows[0] * bp.beams[0]).cwiseAbs2();
        const Eigen::MatrixXd p2 = (eff.rows[1] * bp.beams[1]).cwiseAbs2();
        for (Eigen::Index k = 0; k < K; ++k)
        {
            out.signal(k) = p1(k, k) + p2(k, k);
            out.interference(k) = p1.row(k).sum() + p2.row(k).sum() - out.signal(k);
        }
    }

    out.sum_rate = 0.0;
    for (Eigen::Index k = 0; k < K; ++k)
    {
        out.sinr(k) = out.signal(k) / (out.interference(k) + cfg.noise_power);
        out.rate(k) = std::log2(1.0 + out.sinr(k));
        out.sum_rate += out.rate(k);
    }
    return out;
}

RateReport sinr_and_rate(const ChannelSet &ch, const PhasePair &ph, const BeamPair &bp, const SystemConfig &cfg)
{
    return sinr_and_rate(effective_channels(ch, ph), bp, cfg);
}

double total_power(const BeamPair &bp, const SystemConfig &cfg)
{
    return cfg.amp_inefficiency * bp.transmit_power() + cfg.static_power();
}

double ee_objective(double sum_rate, const BeamPair &bp, const SystemConfig &cfg)
{
    return sum_rate / (bp.transmit_power() + cfg.static_power());
}

double ee_objective(const ChannelSet &ch, const PhasePair &ph, const BeamPair &bp, const SystemConfig &cfg)
{
    return ee_objective(sinr_and_rate(ch, ph, bp, cfg).sum_rate, bp, cfg);
}

void check_dimensions(const ChannelSet &ch, const SystemConfig &cfg)
{
    for (int s = 0; s < kSurfaces; ++s)
    {
        if (ch.bs_to_ris[s].rows() != cfg.num_elements || ch.bs_to_ris[s].cols() != cfg.num_antennas)
            dimension_fail("channel BS->surface " + std::to_string(s) + " must be N x M");
        if (ch.ris_to_users[s].rows() != cfg.num_users || ch.ris_to_users[s].cols() != cfg.num_elements)
            dimension_fail("channel surface " + std::to_string(s) + "->users must be K x N");
        require_finite(ch.bs_to_ris[s], "channel");
        require_finite(ch.ris_to_users[s], "channel");
    }
}

void check_dimensions(const PhasePair &ph, const SystemConfig &cfg)
{
    for (int s = 0; s < kSurfaces; ++s)
        if (ph.shifts[s].size() != cfg.num_elements)
            dimension_fail("phase vector " + std::to_string(s) + " must have N entries");
}

void check_dimensions(const BeamPair &bp, const SystemConfig &cfg)
{
    for (int s = 0; s < kSurfaces; ++s)
        if (bp.beams[s].rows() != cfg.num_antennas || bp.beams[s].cols() != cfg.num_users)
            dimension_fail("beamformer " + std::to_string(s) + " must be M x K");
}

} // namespace dualris
