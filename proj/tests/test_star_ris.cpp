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
#include "starbeam/star_ris.hpp"

using namespace starbeam;

namespace {

// Angles with sin(u_out)sin(v_out) + sin(u_in)sin(v_in) = 1 and
// cos(v_out) + cos(v_in) = 0.
GainAngles unit_s_zero_e()
{
    GainAngles a;
    a.u_in = kPi / 6;
    a.v_in = kPi / 2;
    a.u_out = kPi / 6;
    a.v_out = kPi / 2;
    return a;
}

} // namespace

TEST_CASE("conventional phase design")
{
    // s_sum = 1, e_sum = 0, N1 = N2 = 2 -> phases {0, 0, -pi, -pi} in
    // flattened order.
    const GainAngles a = unit_s_zero_e();
    const RVec phases = design_conventional_phases(a.u_in, a.v_in, a.u_out, a.v_out, 2, 2);
    CHECK(phases[0] == doctest::Approx(0.0));
    CHECK(phases[1] == doctest::Approx(0.0));
    CHECK(phases[2] == doctest::Approx(-kPi));
    CHECK(phases[3] == doctest::Approx(-kPi));

    // Broadside in and out: v = pi/2 kills the row term, and opposite u signs
    // cancel nothing here since e depends on v only; all-zero angles give a
    // constant pattern.
    const RVec flat = design_conventional_phases(0.0, kPi / 2, 0.0, kPi / 2, 4, 4);
    CHECK(flat.cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("fully-connected delay design")
{
    const GainAngles a = unit_s_zero_e();
    const RVec tau = design_fully_connected_delays(a.u_in, a.v_in, a.u_out, a.v_out, 100e9, 2, 2);
    CHECK(tau[0] == 0.0); // reference element
    // n1 = 1, n2 = 0, s_sum = 1: tau = 1 / (2 fc) = 5 ps.
    CHECK(tau[2] == doctest::Approx(5e-12).epsilon(1e-12));
}

TEST_CASE("sub-connected design properties")
{
    const double fc = 100e9;
    Rng rng(3);
    for (int t = 0; t < 10; ++t) {
        const double u_in = rng.uniform(-1.0, 1.0), v_in = rng.uniform(0.5, kPi - 0.5);
        const double u_out = rng.uniform(-1.0, 1.0), v_out = rng.uniform(0.5, kPi - 0.5);
        const SubConnectedDesign d =
            design_sub_connected(u_in, v_in, u_out, v_out, fc, 8, 8, 4, 4);
        // First layer only depends on the incident side, so it matches any
        // other departure direction.
        const SubConnectedDesign d2 =
            design_sub_connected(u_in, v_in, -u_out, kPi - v_out, fc, 8, 8, 4, 4);
        CHECK((d.phi1 - d2.phi1).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("sub-connected with one element per sub-surface equals fully-connected")
{
    // L = 1: the per-sub-surface delay plus the two phase layers reproduce
    // the fully-connected per-element response at every frequency.
    const double fc = 100e9;
    const GainAngles a{0.5, 1.2, -0.8, 1.9};
    const SubConnectedDesign d = design_sub_connected(a.u_in, a.v_in, a.u_out, a.v_out, fc, 4, 4, 4, 4);
    for (double f : {95e9, 100e9, 105e9}) {
        const double g_sub = gain_sub(f, fc, 4, 4, 4, 4, a, d);
        CHECK(g_sub == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("composed matrix: identity, unit modulus, broadcast")
{
    ScenarioConfig cfg;
    cfg.ris_rows = 4;
    cfg.ris_cols = 4;
    cfg.sub_rows = 2;
    cfg.sub_cols = 2;
    cfg.num_bs_antennas = 16;
    cfg.num_tds_per_chain = 4;
    cfg.structure = RisStructure::SubConnected;
    const Geometry geo = build_geometry(cfg);
    const Allocation alloc = allocate_users(geo, cfg.num_ris, cfg.num_users);
    RisState state = design_ris_state(cfg, geo, alloc);

    // All phases and delays zero -> identity diagonal.
    RisState zeroed = state;
    for (int r = 0; r < 2; ++r)
        for (Side s : kBothSides) {
            zeroed.side(r, s).phi1.setZero();
            zeroed.side(r, s).phi2.setZero();
            zeroed.side(r, s).tau_s.setZero();
        }
    const CVec ident = compose_phase_matrix(zeroed, 0, Side::Reflection, 103e9);
    for (int n = 0; n < 16; ++n)
        CHECK(std::abs(ident[n] - cxd(1.0, 0.0)) < 1e-15);

    // Unit modulus and per-sub-surface delay broadcast.
    const double f = 104.3e9;
    const CVec diag = compose_phase_matrix(state, 1, Side::Transmission, f);
    const RisSideState &side = state.side(1, Side::Transmission);
    for (int n1 = 0; n1 < 4; ++n1)
        for (int n2 = 0; n2 < 4; ++n2) {
            const int n = n1 * 4 + n2;
            CHECK(std::abs(std::abs(diag[n]) - 1.0) < 1e-14);
            const int s = (n1 / 2) * 2 + (n2 / 2);
            const double expected =
                side.phi2[n] + side.phi1[n] - 2.0 * kPi * f * side.tau_s[s];
            CHECK(std::abs(std::remainder(std::arg(diag[n]) - expected, 2 * kPi)) < 1e-12);
        }
}

TEST_CASE("delay vector length must match the structure")
{
    ScenarioConfig cfg;
    cfg.ris_rows = 4;
    cfg.ris_cols = 4;
    cfg.sub_rows = 2;
    cfg.sub_cols = 2;
    cfg.num_bs_antennas = 16;
    cfg.num_tds_per_chain = 4;
    cfg.structure = RisStructure::FullyConnected;
    const Geometry geo = build_geometry(cfg);
    const Allocation alloc = allocate_users(geo, cfg.num_ris, cfg.num_users);
    RisState state = design_ris_state(cfg, geo, alloc);
    // Sub-surface-sized delays under the fully-connected structure.
    state.side(0, Side::Reflection).tau_s = RVec::Zero(4);
    CHECK_THROWS_AS(compose_phase_matrix(state, 0, Side::Reflection, 100e9), std::logic_error);
}

TEST_CASE("sub-connected composition at fc equals the conventional diagonal up to a global phase")
{
    ScenarioConfig cfg;
    cfg.ris_rows = 8;
    cfg.ris_cols = 8;
    cfg.sub_rows = 2;
    cfg.sub_cols = 2;
    cfg.num_bs_antennas = 16;
    cfg.num_tds_per_chain = 4;
    const Geometry geo = build_geometry(cfg);
    const Allocation alloc = allocate_users(geo, cfg.num_ris, cfg.num_users);

    ScenarioConfig sub_cfg = cfg;
    sub_cfg.structure = RisStructure::SubConnected;
    ScenarioConfig conv_cfg = cfg;
    conv_cfg.structure = RisStructure::Conventional;
    const RisState sub_state = design_ris_state(sub_cfg, geo, alloc);
    const RisState conv_state = design_ris_state(conv_cfg, geo, alloc);

    for (int r = 0; r < 2; ++r)
        for (Side s : kBothSides) {
            const CVec a = compose_phase_matrix(sub_state, r, s, cfg.fc_hz);
            const CVec b = compose_phase_matrix(conv_state, r, s, cfg.fc_hz);
            const cxd ratio0 = a[0] / b[0];
            for (int n = 0; n < 64; ++n)
                CHECK(std::abs(a[n] / b[n] - ratio0) < 1e-12);
        }
}

TEST_CASE("energy validation")
{
    ScenarioConfig cfg;
    cfg.ris_rows = 4;
    cfg.ris_cols = 4;
    cfg.sub_rows = 2;
    cfg.sub_cols = 2;
    cfg.num_bs_antennas = 16;
    cfg.num_tds_per_chain = 4;
    const Geometry geo = build_geometry(cfg);
    const Allocation alloc = allocate_users(geo, cfg.num_ris, cfg.num_users);
    RisState state = design_ris_state(cfg, geo, alloc);

    // 1/sqrt(2) split on both sides sums exactly to one.
    CHECK(validate_energy(state).empty());

    state.side(1, Side::Reflection).amplitude[5] = 1.0;
    state.side(1, Side::Transmission).amplitude[5] = 0.1;
    const auto violations = validate_energy(state);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].ris == 1);
    CHECK(violations[0].element == 5);
    CHECK(violations[0].total == doctest::Approx(1.01));

    for (int r = 0; r < 2; ++r)
        for (Side s : kBothSides)
            state.side(r, s).amplitude.setZero();
    CHECK(validate_energy(state).empty());
}

TEST_CASE("state csv row count")
{
    ScenarioConfig cfg;
    cfg.ris_rows = 4;
    cfg.ris_cols = 4;
    cfg.sub_rows = 2;
    cfg.sub_cols = 2;
    cfg.num_bs_antennas = 16;
    cfg.num_tds_per_chain = 4;
    const Geometry geo = build_geometry(cfg);
    const Allocation alloc = allocate_users(geo, cfg.num_ris, cfg.num_users);
    const RisState state = design_ris_state(cfg, geo, alloc);
    const std::string csv = ris_state_csv(state);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 2 * 2 * 16);
}
