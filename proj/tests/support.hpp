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

#ifndef DUALRIS_TEST_SUPPORT_HPP
#define DUALRIS_TEST_SUPPORT_HPP

#include <cmath>
#include <numbers>

#include "dualris/baselines.hpp"

namespace dualris::test
{

inline CMatrix gaussian(Eigen::Index rows, Eigen::Index cols, Rng &rng)
{
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    CMatrix a(rows, cols);
    for (Eigen::Index i = 0; i < a.size(); ++i)
        a(i) = cdouble(g(rng), g(rng));
    return a;
}

inline CMatrix random_psd(Eigen::Index n, Rng &rng)
{
    const CMatrix r = gaussian(n, n, rng);
    return r.adjoint() * r;
}

inline CVector unit_modulus(Eigen::Index n, Rng &rng)
{
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    CVector v(n);
    for (Eigen::Index i = 0; i < n; ++i)
        v(i) = std::polar(1.0, angle(rng));
    return v;
}

inline SystemConfig small_config(int m, int k, int n, double p_db = 20.0, std::uint64_t seed = 1)
{
    SystemConfig cfg;
    cfg.num_antennas = m;
    cfg.num_users = k;
    cfg.num_elements = n;
    cfg.p_max = from_db(p_db);
    cfg.noise_power = 1.0;
    cfg.rng_seed = seed;
    return cfg;
}

/// Gaussian beamformers scaled to the full budget.
inline BeamPair random_beams(const SystemConfig &cfg, Rng &rng)
{
    BeamPair bp;
    for (auto &v : bp.beams)
        v = gaussian(cfg.num_antennas, cfg.num_users, rng);
    const double scale = std::sqrt(cfg.p_max / bp.transmit_power());
    for (auto &v : bp.beams)
        v *= scale;
    return bp;
}

/// Channels, random phases and random full-power beams for one seed.
struct Instance
{
    SystemConfig cfg;
    ChannelSet ch;
    PhasePair ph;
    BeamPair bp;
};

inline Instance make_instance(const SystemConfig &base, std::uint64_t seed)
{
    Instance in;
    in.cfg = base;
    in.cfg.rng_seed = seed;
    in.ch = draw_channels(in.cfg, 0);
    Rng rng = make_rng(seed, {0xabc});
    in.ph = PhasePair::random(in.cfg.num_elements, rng);
    in.bp = random_beams(in.cfg, rng);
    return in;
}

/// Received amplitude of stream j at user k by explicit summation.
inline cdouble received(const ChannelSet &ch, const PhasePair &ph, const BeamPair &bp, Eigen::Index k, Eigen::Index j)
{
    cdouble y = 0.0;
    for (int s = 0; s < kSurfaces; ++s)
        for (Eigen::Index n = 0; n < ch.ris_to_users[s].cols(); ++n)
            for (Eigen::Index m = 0; m < ch.bs_to_ris[s].cols(); ++m)
                y += ch.ris_to_users[s](k, n) * ph.shifts[s](n) * ch.bs_to_ris[s](n, m) * bp.beams[s](m, j);
    return y;
}

inline double scalar_sum_rate(const ChannelSet &ch, const PhasePair &ph, const BeamPair &bp, double noise)
{
    const Eigen::Index K = ch.ris_to_users[0].rows();
    double total = 0.0;
    for (Eigen::Index k = 0; k < K; ++k)
    {
        double s = 0.0, i = 0.0;
        for (Eigen::Index j = 0; j < K; ++j)
            (j == k ? s : i) += std::norm(received(ch, ph, bp, k, j));
        total += std::log2(1.0 + s / (i + noise));
    }
    return total;
}

} // namespace dualris::test

#endif
