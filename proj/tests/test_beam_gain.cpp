// SPDX-License-Identifier: Apache-2.0
//
// starbeam - wideband beamforming simulator for STAR-RIS assisted THz links
// Copyright (C) 2026 starbeam developers
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

#include <doctest.h>

#include <cmath>

#include "starbeam/beam_gain.hpp"

using namespace starbeam;

namespace {

GainAngles random_angles(Rng &rng)
{
    GainAngles a;
    a.u_in = rng.uniform(-kPi / 2, kPi / 2);
    a.v_in = rng.uniform(0.2, kPi - 0.2);
    a.u_out = rng.uniform(-kPi / 2, kPi / 2);
    a.v_out = rng.uniform(0.2, kPi - 0.2);
    return a;
}

} // namespace

TEST_CASE("xi kernel values")
{
    CHECK(xi_kernel(4, 0.0) == doctest::Approx(4.0));
    CHECK(xi_kernel(128, 0.0) == doctest::Approx(128.0));
    // Xi_4(0.5) = sin(pi) / sin(pi/4) = 0.
    CHECK(xi_kernel(4, 0.5) == doctest::Approx(0.0).epsilon(1e-12));
    Rng rng(2);
    for (int t = 0; t < 200; ++t) {
        const int n = 1 + int(rng.uniform() * 16);
        const double x = rng.uniform(-4.0, 4.0);
        CHECK(std::abs(xi_kernel(n, x)) <= double(n) + 1e-9);
    }
}

TEST_CASE("xi kernel is continuous across the removable singularities")
{
    for (int n : {3, 4, 7, 16}) {
        for (double center : {0.0, 2.0, -2.0, 4.0}) {
            const double at = xi_kernel(n, center);
            const double near = xi_kernel(n, center + 3e-9);
            CHECK(std::abs(at - near) < 1e-6 * double(n));
            CHECK(std::abs(at) == doctest::Approx(double(n)).epsilon(1e-12));
        }
    }
}

TEST_CASE("conventional gain: direct sum vs closed form")
{
    const double fc = 100e9;
    Rng rng(11);
    for (int t = 0; t < 30; ++t) {
        const GainAngles a = random_angles(rng);
        const RVec phases = design_conventional_phases(a.u_in, a.v_in, a.u_out, a.v_out, 8, 8);
        const SubcarrierGrid grid = subcarrier_frequencies(fc, 10e9, 32);
        for (double f : grid.frequency_hz) {
            const double direct = gain_conventional(f, fc, 8, 8, a, phases);
            const double closed = gain_conventional_closed(f, fc, 8, 8, a);
            CHECK(std::abs(direct - closed) <= 1e-10 * std::max(1.0, closed));
        }
    }
}

TEST_CASE("conventional gain is one at the centre frequency")
{
    Rng rng(4);
    for (int t = 0; t < 10; ++t) {
        const GainAngles a = random_angles(rng);
        const RVec phases = design_conventional_phases(a.u_in, a.v_in, a.u_out, a.v_out, 16, 16);
        CHECK(gain_conventional(100e9, 100e9, 16, 16, a, phases) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("edge-subcarrier loss grows with bandwidth")
{
    // Strictly inside the kernel main lobe the edge gain decreases with the
    // bandwidth: B = 20 > 10 > 5 > 1 GHz gives strictly increasing loss.
    const double fc = 100e9;
    Rng rng(9);
    for (int t = 0; t < 20; ++t) {
        GainAngles a;
        a.u_in = rng.uniform(-kPi / 6, kPi / 6);
        a.v_in = rng.uniform(kPi / 3, 2 * kPi / 3);
        a.u_out = rng.uniform(-kPi / 6, kPi / 6);
        a.v_out = rng.uniform(kPi / 3, 2 * kPi / 3);
        double prev = -1.0;
        for (double bw : {20e9, 10e9, 5e9, 1e9}) {
            const SubcarrierGrid grid = subcarrier_frequencies(fc, bw, 128);
            const double edge = gain_conventional_closed(grid.frequency_hz.back(), fc, 16, 16, a);
            CHECK(edge > prev);
            prev = edge;
        }
    }
}

TEST_CASE("fully-connected designed gain is flat at one")
{
    const double fc = 100e9;
    Rng rng(21);
    for (int t = 0; t < 20; ++t) {
        const GainAngles a = random_angles(rng);
        const RVec delays =
            design_fully_connected_delays(a.u_in, a.v_in, a.u_out, a.v_out, fc, 16, 16);
        const RVec phases = RVec::Zero(256);
        const SubcarrierGrid grid = subcarrier_frequencies(fc, 10e9, 32);
        for (double f : grid.frequency_hz)
            CHECK(gain_fully(f, fc, 16, 16, a, phases, delays) ==
                  doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("fully-connected with zero delays reduces to the conventional gain")
{
    const double fc = 100e9;
    Rng rng(31);
    const GainAngles a = random_angles(rng);
    const RVec phases = design_conventional_phases(a.u_in, a.v_in, a.u_out, a.v_out, 8, 8);
    const RVec zeros = RVec::Zero(64);
    for (double f : {95e9, 99e9, 104e9})
        CHECK(gain_fully(f, fc, 8, 8, a, phases, zeros) ==
              doctest::Approx(gain_conventional(f, fc, 8, 8, a, phases)).epsilon(1e-13));
}

TEST_CASE("random delays never beat the normalized bound")
{
    const double fc = 100e9;
    Rng rng(41);
    const GainAngles a = random_angles(rng);
    for (int t = 0; t < 20; ++t) {
        RVec delays(64);
        for (int i = 0; i < 64; ++i)
            delays[i] = rng.uniform(-20e-12, 20e-12);
        const double g = gain_fully(103e9, fc, 8, 8, a, RVec::Zero(64), delays);
        CHECK(g <= 1.0 + 1e-9);
        CHECK(g >= 0.0);
    }
}

TEST_CASE("sub-connected gain: direct composition vs closed form")
{
    const double fc = 100e9;
    Rng rng(51);
    for (int t = 0; t < 30; ++t) {
        const GainAngles a = random_angles(rng);
        const SubConnectedDesign d =
            design_sub_connected(a.u_in, a.v_in, a.u_out, a.v_out, fc, 16, 16, 4, 4);
        const SubcarrierGrid grid = subcarrier_frequencies(fc, 10e9, 16);
        for (double f : grid.frequency_hz) {
            const double direct = gain_sub(f, fc, 16, 16, 4, 4, a, d);
            const double closed = gain_sub_closed(f, fc, 16, 16, 4, 4, a);
            CHECK(std::abs(direct - closed) <= 1e-10 * std::max(1.0, closed));
        }
    }
}

TEST_CASE("sub-connected gain at the centre frequency is one")
{
    Rng rng(61);
    for (int t = 0; t < 10; ++t) {
        const GainAngles a = random_angles(rng);
        const SubConnectedDesign d =
            design_sub_connected(a.u_in, a.v_in, a.u_out, a.v_out, 100e9, 8, 8, 2, 2);
        CHECK(gain_sub(100e9, 100e9, 8, 8, 2, 2, a, d) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("one sub-surface leaves only the kernel envelope")
{
    // S = 1: a single shared delay cannot steer, so the curve is the product
    // of the four L-sized kernels (the closed form with S1 = S2 = 1).
    const double fc = 100e9;
    Rng rng(71);
    const GainAngles a = random_angles(rng);
    const SubConnectedDesign d = design_sub_connected(a.u_in, a.v_in, a.u_out, a.v_out, fc, 4, 4, 1, 1);
    for (double f : {95e9, 101e9, 105e9})
        CHECK(gain_sub(f, fc, 4, 4, 1, 1, a, d) ==
              doctest::Approx(gain_sub_closed(f, fc, 4, 4, 1, 1, a)).epsilon(1e-10));
}

TEST_CASE("structure ordering at every subcarrier")
{
    // Fully-connected dominates sub-connected, which dominates conventional,
    // pointwise over the band for designed states.
    const double fc = 100e9;
    Rng rng(81);
    for (int t = 0; t < 10; ++t) {
        const GainAngles a = random_angles(rng);
        const SubcarrierGrid grid = subcarrier_frequencies(fc, 10e9, 32);
        for (double f : grid.frequency_hz) {
            const double g_full =
                designed_gain(RisStructure::FullyConnected, f, fc, 16, 16, 4, 4, a);
            const double g_sub_v =
                designed_gain(RisStructure::SubConnected, f, fc, 16, 16, 4, 4, a);
            const double g_conv =
                designed_gain(RisStructure::Conventional, f, fc, 16, 16, 4, 4, a);
            CHECK(g_full >= g_sub_v - 1e-9);
            CHECK(g_sub_v >= g_conv - 1e-9);
            CHECK(g_full <= 1.0 + 1e-9);
            CHECK(g_conv >= -1e-12);
        }
    }
}

TEST_CASE("gains are invariant under a global sign flip of the sines")
{
    const double fc = 100e9;
    Rng rng(91);
    for (int t = 0; t < 10; ++t) {
        const GainAngles a = random_angles(rng);
        GainAngles flipped;
        flipped.u_in = -a.u_in;
        flipped.v_in = kPi - a.v_in; // flips cos(v) too
        flipped.u_out = -a.u_out;
        flipped.v_out = kPi - a.v_out;
        for (double f : {96e9, 103e9}) {
            CHECK(gain_conventional_closed(f, fc, 8, 8, a) ==
                  doctest::Approx(gain_conventional_closed(f, fc, 8, 8, flipped)).epsilon(1e-12));
            CHECK(gain_sub_closed(f, fc, 8, 8, 2, 2, a) ==
                  doctest::Approx(gain_sub_closed(f, fc, 8, 8, 2, 2, flipped)).epsilon(1e-12));
        }
    }
}

TEST_CASE("sweep respects the zero-bandwidth degenerate case")
{
    ScenarioConfig cfg;
    cfg.ris_rows = 8;
    cfg.ris_cols = 8;
    cfg.sub_rows = 2;
    cfg.sub_cols = 2;
    cfg.num_subcarriers = 16;
    const auto points = sweep_gain(cfg, RisStructure::Conventional, {0.0});
    REQUIRE(!points.empty());
    for (const GainPoint &p : points)
        CHECK(p.gain == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sweep covers both sides and all bandwidths")
{
    ScenarioConfig cfg;
    cfg.ris_rows = 8;
    cfg.ris_cols = 8;
    cfg.sub_rows = 2;
    cfg.sub_cols = 2;
    cfg.num_subcarriers = 8;
    const auto points = sweep_gain(cfg, RisStructure::SubConnected, {5e9, 10e9});
    CHECK(points.size() == 2 * 2 * 8);
    const std::string csv = gain_csv(points);
    CHECK(csv.rfind("structure,side,bandwidth_hz,m,f_hz,gain\n", 0) == 0);
    for (const GainPoint &p : points) {
        CHECK(p.gain >= 0.0);
        CHECK(p.gain <= 1.0 + 1e-9);
    }
}
