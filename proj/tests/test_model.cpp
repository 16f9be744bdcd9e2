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

#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "dualris/config_file.hpp"
#include "support.hpp"

using namespace dualris;
using test::small_config;

TEST(Channels, SameSeedAndIndexAreBitIdentical)
{
    const SystemConfig cfg = small_config(4, 3, 5, 20.0, 42);
    const ChannelSet a = draw_channels(cfg, 7);
    const ChannelSet b = draw_channels(cfg, 7);
    for (int s = 0; s < kSurfaces; ++s)
    {
        EXPECT_EQ(a.bs_to_ris[s], b.bs_to_ris[s]);
        EXPECT_EQ(a.ris_to_users[s], b.ris_to_users[s]);
    }
    const ChannelSet c = draw_channels(cfg, 8);
    EXPECT_NE(a.bs_to_ris[0], c.bs_to_ris[0]);
}

TEST(Channels, StandardComplexGaussianMoments)
{
    const SystemConfig cfg = small_config(50, 50, 50, 20.0, 3);
    cdouble sum = 0.0;
    double sum_sq = 0.0;
    std::size_t n = 0;
    for (std::uint64_t d = 0; n < 100000; ++d)
    {
        const ChannelSet ch = draw_channels(cfg, d);
        for (int s = 0; s < kSurfaces; ++s)
            for (const CMatrix *m : {&ch.bs_to_ris[s], &ch.ris_to_users[s]})
                for (Eigen::Index i = 0; i < m->size(); ++i)
                {
                    sum += (*m)(i);
                    sum_sq += std::norm((*m)(i));
                    ++n;
                }
    }
    const cdouble mean = sum / static_cast<double>(n);
    const double variance = sum_sq / static_cast<double>(n) - std::norm(mean);
    EXPECT_LT(std::abs(mean), 0.02);
    EXPECT_GT(variance, 0.98);
    EXPECT_LT(variance, 1.02);
}

TEST(Channels, ShapesFollowConfig)
{
    const ChannelSet ch = draw_channels(small_config(3, 2, 5), 0);
    for (int s = 0; s < kSurfaces; ++s)
    {
        EXPECT_EQ(ch.bs_to_ris[s].rows(), 5);
        EXPECT_EQ(ch.bs_to_ris[s].cols(), 3);
        EXPECT_EQ(ch.ris_to_users[s].rows(), 2);
        EXPECT_EQ(ch.ris_to_users[s].cols(), 5);
    }
}

TEST(EffectiveChannel, AllOnesPhasesGiveCascade)
{
    const SystemConfig cfg = small_config(3, 2, 4);
    const ChannelSet ch = draw_channels(cfg, 0);
    const EffectiveChannels eff = effective_channels(ch, PhasePair::ones(4));
    for (int s = 0; s < kSurfaces; ++s)
        EXPECT_LT((eff.rows[s] - ch.ris_to_users[s] * ch.bs_to_ris[s]).norm(), 1e-13);
}

TEST(EffectiveChannel, ScalarProduct)
{
    ChannelSet ch;
    for (int s = 0; s < kSurfaces; ++s)
    {
        ch.bs_to_ris[s] = CMatrix::Constant(1, 1, 3.0);
        ch.ris_to_users[s] = CMatrix::Constant(1, 1, 2.0);
    }
    PhasePair ph = PhasePair::ones(1);
    ph.shifts[0](0) = std::polar(1.0, std::numbers::pi / 2);
    const EffectiveChannels eff = effective_channels(ch, ph);
    EXPECT_LT(std::abs(eff.rows[0](0, 0) - cdouble(0.0, 6.0)), 1e-14);
    EXPECT_LT(std::abs(eff.rows[1](0, 0) - cdouble(6.0, 0.0)), 1e-14);
}

TEST(EffectiveChannel, MatchesTripleLoop)
{
    const test::Instance in = test::make_instance(small_config(4, 3, 6), 9);
    const EffectiveChannels eff = effective_channels(in.ch, in.ph);
    double worst = 0.0;
    for (int s = 0; s < kSurfaces; ++s)
        for (int k = 0; k < 3; ++k)
            for (int m = 0; m < 4; ++m)
            {
                cdouble acc = 0.0;
                for (int n = 0; n < 6; ++n)
                    acc += in.ch.ris_to_users[s](k, n) * in.ph.shifts[s](n) * in.ch.bs_to_ris[s](n, m);
                worst = std::max(worst, std::abs(acc - eff.rows[s](k, m)));
            }
    EXPECT_LT(worst, 1e-12);
}

TEST(EffectiveChannel, LinearInEachPhaseEntry)
{
    const test::Instance in = test::make_instance(small_config(3, 2, 4), 10);
    const EffectiveChannels base = effective_channels(in.ch, in.ph);
    PhasePair turned = in.ph;
    const cdouble c = std::polar(1.0, 0.7);
    turned.shifts[0](2) *= c;
    const EffectiveChannels rot = effective_channels(in.ch, turned);
    // Only the n = 2 rank-one term of surface 0 rotates.
    const CMatrix term = in.ph.shifts[0](2) * in.ch.ris_to_users[0].col(2) * in.ch.bs_to_ris[0].row(2);
    EXPECT_LT((rot.rows[0] - (base.rows[0] + (c - 1.0) * term)).norm(), 1e-12);
    EXPECT_EQ(rot.rows[1], base.rows[1]);
}

TEST(Rates, SingleUserHasNoInterference)
{
    const test::Instance in = test::make_instance(small_config(3, 1, 4), 11);
    const RateReport r = sinr_and_rate(in.ch, in.ph, in.bp, in.cfg);
    EXPECT_EQ(r.interference(0), 0.0);
    EXPECT_DOUBLE_EQ(r.sinr(0), r.signal(0) / in.cfg.noise_power);
}

TEST(Rates, ZeroBeamsGiveZeroRate)
{
    const SystemConfig cfg = small_config(3, 2, 4);
    const ChannelSet ch = draw_channels(cfg, 0);
    const RateReport r = sinr_and_rate(ch, PhasePair::ones(4), BeamPair::zeros(3, 2), cfg);
    EXPECT_EQ(r.sum_rate, 0.0);
    EXPECT_EQ(r.sinr.maxCoeff(), 0.0);
}

TEST(Rates, MatchScalarExpansion)
{
    for (std::uint64_t s = 0; s < 10; ++s)
    {
        const test::Instance in = test::make_instance(small_config(2, 2, 2), s);
        const double expected = test::scalar_sum_rate(in.ch, in.ph, in.bp, in.cfg.noise_power);
        EXPECT_NEAR(sinr_and_rate(in.ch, in.ph, in.bp, in.cfg).sum_rate, expected, 1e-10);
    }
}

TEST(Rates, IncoherentCombiningAddsPathPowers)
{
    test::Instance in = test::make_instance(small_config(2, 2, 3), 12);
    in.cfg.combining = Combining::incoherent;
    const RateReport r = sinr_and_rate(in.ch, in.ph, in.bp, in.cfg);
    const EffectiveChannels eff = effective_channels(in.ch, in.ph);
    const double s0 = std::norm((eff.rows[0].row(0) * in.bp.beams[0].col(0))(0, 0)) +
                      std::norm((eff.rows[1].row(0) * in.bp.beams[1].col(0))(0, 0));
    EXPECT_NEAR(r.signal(0), s0, 1e-9 * s0);
}

TEST(Rates, CommonColumnRotationIsInvariant)
{
    const test::Instance in = test::make_instance(small_config(3, 2, 4), 13);
    BeamPair rotated = in.bp;
    const cdouble c = std::polar(1.0, 1.1);
    rotated.beams[0].col(1) *= c;
    rotated.beams[1].col(1) *= c;
    EXPECT_NEAR(sinr_and_rate(in.ch, in.ph, rotated, in.cfg).sum_rate,
                sinr_and_rate(in.ch, in.ph, in.bp, in.cfg).sum_rate, 1e-12);
}

TEST(Rates, SingleUserMrtRateGrowsWithPower)
{
    SystemConfig cfg = small_config(3, 1, 4);
    const ChannelSet ch = draw_channels(cfg, 0);
    const PhasePair ph = PhasePair::ones(4);
    const EffectiveChannels eff = effective_channels(ch, ph);
    double previous = 0.0;
    for (double p_db : {-10.0, 0.0, 10.0, 20.0, 30.0})
    {
        cfg.p_max = from_db(p_db);
        BeamPair bp;
        for (int s = 0; s < kSurfaces; ++s)
            bp.beams[s] = eff.rows[s].adjoint();
        const double scale = std::sqrt(cfg.p_max / bp.transmit_power());
        for (auto &v : bp.beams)
            v *= scale;
        const double rate = sinr_and_rate(eff, bp, cfg).sum_rate;
        EXPECT_GE(rate, previous);
        previous = rate;
    }
}

TEST(Power, HandExamples)
{
    SystemConfig cfg = small_config(2, 2, 4);
    cfg.p_user_static = cfg.p_bs_static = cfg.p_element_static = 0.0;
    EXPECT_EQ(total_power(BeamPair::zeros(2, 2), cfg), 0.0);

    cfg.amp_inefficiency = 1.0;
    BeamPair one = BeamPair::zeros(2, 2);
    one.beams[0](0, 0) = std::sqrt(2.0);
    EXPECT_NEAR(total_power(one, cfg), 2.0, 1e-15);

    cfg.amp_inefficiency = 1.25;
    cfg.p_user_static = 0.1;
    cfg.p_bs_static = 1.0;
    cfg.p_element_static = 0.01;
    BeamPair four = BeamPair::zeros(2, 2);
    four.beams[0](0, 0) = 1.0;
    four.beams[0](1, 1) = 1.0;
    four.beams[1](0, 1) = cdouble(0.0, 1.0);
    four.beams[1](1, 0) = -1.0;
    EXPECT_NEAR(total_power(four, cfg), 6.28, 1e-12);
}

TEST(EnergyEfficiency, Examples)
{
    const test::Instance in = test::make_instance(small_config(3, 2, 4), 14);
    EXPECT_EQ(ee_objective(in.ch, in.ph, BeamPair::zeros(3, 2), in.cfg), 0.0);
    EXPECT_NEAR(ee_objective(2.0 * 3.5, in.bp, in.cfg), 2.0 * ee_objective(3.5, in.bp, in.cfg), 1e-15);

    const double rate = test::scalar_sum_rate(in.ch, in.ph, in.bp, in.cfg.noise_power);
    double denom = in.cfg.num_users * in.cfg.p_user_static + in.cfg.p_bs_static +
                   2.0 * in.cfg.num_elements * in.cfg.p_element_static;
    for (const auto &v : in.bp.beams)
        denom += v.squaredNorm();
    EXPECT_NEAR(ee_objective(in.ch, in.ph, in.bp, in.cfg), rate / denom, 1e-12);

    // Shared static term.
    const double from_total = total_power(in.bp, in.cfg) - in.cfg.amp_inefficiency * in.bp.transmit_power();
    const double from_ee = rate / ee_objective(rate, in.bp, in.cfg) - in.bp.transmit_power();
    EXPECT_NEAR(from_total, from_ee, 1e-12);
}

TEST(Config, ValidationRejectsBadValues)
{
    auto expect_config_error = [](SystemConfig cfg) {
        try
        {
            cfg.validate();
            FAIL() << "accepted";
        }
        catch (const Error &e)
        {
            EXPECT_EQ(e.kind(), ErrorKind::config);
        }
    };
    SystemConfig cfg;
    cfg.validate();
    cfg.num_antennas = 0;
    expect_config_error(cfg);
    cfg = SystemConfig{};
    cfg.noise_power = 0.0;
    expect_config_error(cfg);
    cfg = SystemConfig{};
    cfg.amp_inefficiency = 0.5;
    expect_config_error(cfg);
    cfg = SystemConfig{};
    cfg.p_max = std::numeric_limits<double>::infinity();
    expect_config_error(cfg);
}

TEST(Config, DimensionChecks)
{
    const SystemConfig cfg = small_config(3, 2, 4);
    EXPECT_THROW(check_dimensions(PhasePair::ones(5), cfg), Error);
    EXPECT_THROW(check_dimensions(BeamPair::zeros(2, 2), cfg), Error);
    EXPECT_NO_THROW(check_dimensions(draw_channels(cfg, 0), cfg));
}

TEST(ConfigFile, ParsesKnownKeys)
{
    const SystemConfig cfg = parse_config("# comment\nM = 3\nK=5\nN = 7 # trailing\nP_max = 100\n"
                                          "sigma2 = 0.5\nR = 1.5\nbeta = 2\nrng_seed = 99\ncombining = incoherent\n");
    EXPECT_EQ(cfg.num_antennas, 3);
    EXPECT_EQ(cfg.num_users, 5);
    EXPECT_EQ(cfg.num_elements, 7);
    EXPECT_EQ(cfg.p_max, 100.0);
    EXPECT_EQ(cfg.noise_power, 0.5);
    EXPECT_EQ(cfg.qos_threshold, 1.5);
    EXPECT_EQ(cfg.amp_inefficiency, 2.0);
    EXPECT_EQ(cfg.rng_seed, 99u);
    EXPECT_EQ(cfg.combining, Combining::incoherent);
}

TEST(ConfigFile, RoundTrip)
{
    SystemConfig cfg = small_config(5, 3, 9, 13.0, 1234);
    cfg.qos_threshold = 0.1;
    const SystemConfig back = parse_config(format_config(cfg));
    EXPECT_EQ(back.num_antennas, cfg.num_antennas);
    EXPECT_EQ(back.num_users, cfg.num_users);
    EXPECT_EQ(back.p_max, cfg.p_max);
    EXPECT_EQ(back.qos_threshold, cfg.qos_threshold);
    EXPECT_EQ(back.rng_seed, cfg.rng_seed);
}

TEST(ConfigFile, Errors)
{
    try
    {
        parse_config("M = 3\nbogus = 1\n");
        FAIL();
    }
    catch (const Error &e)
    {
        EXPECT_EQ(e.kind(), ErrorKind::config);
        EXPECT_NE(std::string(e.what()).find('2'), std::string::npos);
    }
    EXPECT_THROW(parse_config("M = three\n"), Error);
    try
    {
        load_config("/nonexistent/dir/file.cfg");
        FAIL();
    }
    catch (const Error &e)
    {
        EXPECT_EQ(e.kind(), ErrorKind::io);
    }
}
