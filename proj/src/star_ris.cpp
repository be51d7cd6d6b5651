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

#include "starbeam/star_ris.hpp"

#include <cmath>
#include <sstream>

namespace starbeam {

namespace {

// Spatial frequencies of the planar surface: s along the row axis,
// e along the column axis.
inline double spatial_s(double u, double v) { return std::sin(u) * std::sin(v); }
inline double spatial_e(double /*u*/, double v) { return std::cos(v); }

} // namespace

RVec RisState::stacked_amplitude(Side s) const
{
    const int n = elements();
    RVec out(num_ris() * n);
    for (int r = 0; r < num_ris(); ++r)
        out.segment(r * n, n) = side(r, s).amplitude;
    return out;
}

void RisState::set_stacked_amplitude(Side s, const RVec &beta)
{
    const int n = elements();
    if (beta.size() != Eigen::Index(num_ris() * n))
        throw std::logic_error("stacked amplitude size mismatch");
    for (int r = 0; r < num_ris(); ++r)
        side(r, s).amplitude = beta.segment(r * n, n);
}

RVec design_conventional_phases(double u_in, double v_in, double u_out, double v_out, int n1_count,
                                int n2_count)
{
    const double s_sum = spatial_s(u_out, v_out) + spatial_s(u_in, v_in);
    const double e_sum = spatial_e(u_out, v_out) + spatial_e(u_in, v_in);
    RVec phases(n1_count * n2_count);
    for (int n1 = 0; n1 < n1_count; ++n1)
        for (int n2 = 0; n2 < n2_count; ++n2)
            phases[n1 * n2_count + n2] = -kPi * (double(n1) * s_sum + double(n2) * e_sum);
    return phases;
}

RVec design_fully_connected_delays(double u_in, double v_in, double u_out, double v_out,
                                   double fc_hz, int n1_count, int n2_count)
{
    const double s_sum = spatial_s(u_out, v_out) + spatial_s(u_in, v_in);
    const double e_sum = spatial_e(u_out, v_out) + spatial_e(u_in, v_in);
    RVec delays(n1_count * n2_count);
    for (int n1 = 0; n1 < n1_count; ++n1)
        for (int n2 = 0; n2 < n2_count; ++n2)
            delays[n1 * n2_count + n2] =
                (double(n1) * s_sum + double(n2) * e_sum) / (2.0 * fc_hz);
    return delays;
}

SubConnectedDesign design_sub_connected(double u_in, double v_in, double u_out, double v_out,
                                        double fc_hz, int n1_count, int n2_count, int s1_count,
                                        int s2_count)
{
    if (n1_count % s1_count != 0 || n2_count % s2_count != 0)
        throw ConfigError("RIS grid not divisible into sub-surfaces");
    const int l1_count = n1_count / s1_count;
    const int l2_count = n2_count / s2_count;
    const double s_in = spatial_s(u_in, v_in), e_in = spatial_e(u_in, v_in);
    const double s_out = spatial_s(u_out, v_out), e_out = spatial_e(u_out, v_out);

    SubConnectedDesign d;
    d.phi1.resize(n1_count * n2_count);
    d.phi2.resize(n1_count * n2_count);
    for (int n1 = 0; n1 < n1_count; ++n1)
        for (int n2 = 0; n2 < n2_count; ++n2) {
            const int l1 = n1 % l1_count, l2 = n2 % l2_count;
            const int n = n1 * n2_count + n2;
            d.phi1[n] = -kPi * (double(l1) * s_in + double(l2) * e_in);
            d.phi2[n] = -kPi * (double(l1) * s_out + double(l2) * e_out);
        }

    const double s_sum = s_in + s_out, e_sum = e_in + e_out;
    d.tau_s.resize(s1_count * s2_count);
    for (int sr = 0; sr < s1_count; ++sr)
        for (int sc = 0; sc < s2_count; ++sc) {
            const double row_term = (double(sr) * l1_count - (double(l1_count) - 1.0) / 2.0) * s_sum;
            const double col_term = (double(sc) * l2_count - (double(l2_count) - 1.0) / 2.0) * e_sum;
            d.tau_s[sr * s2_count + sc] = (row_term + col_term) / (2.0 * fc_hz);
        }
    return d;
}

RisState design_ris_state(const ScenarioConfig &cfg, const Geometry &geo, const Allocation &alloc)
{
    RisState state;
    state.structure = cfg.structure;
    state.n1 = cfg.ris_rows;
    state.n2 = cfg.ris_cols;
    state.s1 = cfg.sub_rows;
    state.s2 = cfg.sub_cols;
    state.ris.resize(std::size_t(cfg.num_ris));

    const int n = cfg.ris_elements();
    for (int r = 0; r < cfg.num_ris; ++r) {
        const RisLink &in = geo.bs_to_ris[std::size_t(r)];
        for (Side s : kBothSides) {
            const int k = alloc.user_for(r, s);
            const UserLink &out = geo.ris_to_user[std::size_t(r)][std::size_t(k)];
            RisSideState &side = state.side(r, s);
            side.amplitude = RVec::Constant(n, 1.0 / std::sqrt(2.0));
            switch (cfg.structure) {
            case RisStructure::Conventional:
                side.phi1 = design_conventional_phases(in.u_rad, in.v_rad, out.u_rad, out.v_rad,
                                                       cfg.ris_rows, cfg.ris_cols);
                side.phi2 = RVec::Zero(n);
                side.tau_s.resize(0);
                break;
            case RisStructure::FullyConnected:
                side.phi1 = RVec::Zero(n);
                side.phi2 = RVec::Zero(n);
                side.tau_s = design_fully_connected_delays(in.u_rad, in.v_rad, out.u_rad,
                                                           out.v_rad, cfg.fc_hz, cfg.ris_rows,
                                                           cfg.ris_cols);
                if (!cfg.ris_td)
                    side.tau_s.setZero();
                break;
            case RisStructure::SubConnected: {
                SubConnectedDesign d =
                    design_sub_connected(in.u_rad, in.v_rad, out.u_rad, out.v_rad, cfg.fc_hz,
                                         cfg.ris_rows, cfg.ris_cols, cfg.sub_rows, cfg.sub_cols);
                side.phi1 = std::move(d.phi1);
                side.phi2 = std::move(d.phi2);
                side.tau_s = std::move(d.tau_s);
                if (!cfg.ris_td)
                    side.tau_s.setZero();
                break;
            }
            }
        }
    }
    return state;
}

CVec compose_phase_matrix(const RisState &state, int r, Side s, double f_hz)
{
    const RisSideState &side = state.side(r, s);
    const int n = state.elements();
    if (side.phi1.size() != n || side.phi2.size() != n)
        throw std::logic_error("phase layers not populated");
    const int expected_delays = state.structure == RisStructure::Conventional ? 0
                                : state.structure == RisStructure::FullyConnected
                                    ? n
                                    : state.s1 * state.s2;
    if (side.tau_s.size() != expected_delays)
        throw std::logic_error("delay vector length does not match the RIS structure");

    const int l1_count = state.n1 / state.s1;
    const int l2_count = state.n2 / state.s2;
    CVec diag(n);
    for (int n1 = 0; n1 < state.n1; ++n1)
        for (int n2 = 0; n2 < state.n2; ++n2) {
            const int idx = n1 * state.n2 + n2;
            double tau = 0.0;
            if (state.structure == RisStructure::FullyConnected)
                tau = side.tau_s[idx];
            else if (state.structure == RisStructure::SubConnected)
                tau = side.tau_s[(n1 / l1_count) * state.s2 + (n2 / l2_count)];
            const double phase = side.phi2[idx] + side.phi1[idx] - 2.0 * kPi * f_hz * tau;
            diag[idx] = std::polar(1.0, phase);
        }
    return diag;
}

CVec stacked_phase_matrix(const RisState &state, Side s, double f_hz)
{
    const int n = state.elements();
    CVec out(state.num_ris() * n);
    for (int r = 0; r < state.num_ris(); ++r)
        out.segment(r * n, n) = compose_phase_matrix(state, r, s, f_hz);
    return out;
}

std::vector<EnergyViolation> validate_energy(const RisState &state)
{
    std::vector<EnergyViolation> out;
    for (int r = 0; r < state.num_ris(); ++r) {
        const RVec &br = state.side(r, Side::Reflection).amplitude;
        const RVec &bt = state.side(r, Side::Transmission).amplitude;
        for (int n = 0; n < state.elements(); ++n) {
            const double total = br[n] * br[n] + bt[n] * bt[n];
            if (total > 1.0 + 1e-9)
                out.push_back(EnergyViolation{r, n, total});
        }
    }
    return out;
}

std::string ris_state_csv(const RisState &state)
{
    std::ostringstream out;
    out << "ris,side,element,phi1_rad,phi2_rad,tau_s,amplitude\n";
    char buf[160];
    const int l1_count = state.n1 / state.s1;
    const int l2_count = state.n2 / state.s2;
    for (int r = 0; r < state.num_ris(); ++r)
        for (Side s : kBothSides) {
            const RisSideState &side = state.side(r, s);
            for (int n1 = 0; n1 < state.n1; ++n1)
                for (int n2 = 0; n2 < state.n2; ++n2) {
                    const int idx = n1 * state.n2 + n2;
                    double tau = 0.0;
                    if (state.structure == RisStructure::FullyConnected)
                        tau = side.tau_s[idx];
                    else if (state.structure == RisStructure::SubConnected)
                        tau = side.tau_s[(n1 / l1_count) * state.s2 + (n2 / l2_count)];
                    std::snprintf(buf, sizeof buf, "%d,%s,%d,%.17g,%.17g,%.17g,%.17g\n", r,
                                  to_string(s).c_str(), idx, side.phi1[idx], side.phi2[idx], tau,
                                  side.amplitude[idx]);
                    out << buf;
                }
        }
    return out.str();
}

} // namespace starbeam
