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

#include "starbeam/beam_gain.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace starbeam {

namespace {

inline double spatial_s(double u, double v) { return std::sin(u) * std::sin(v); }
inline double spatial_e(double /*u*/, double v) { return std::cos(v); }

} // namespace

double xi_kernel(int n, double x)
{
    const double den = std::sin(kPi * x / 2.0);
    // Near even-integer x both sine terms vanish; the continuous limit
    // N * cos(N pi x / 2) / cos(pi x / 2) is exact at the singular points and
    // accurate to O(x_offset^2) beside them.
    if (std::abs(den) < 1e-8)
        return double(n) * std::cos(double(n) * kPi * x / 2.0) / std::cos(kPi * x / 2.0);
    return std::sin(double(n) * kPi * x / 2.0) / den;
}

double gain_conventional(double f_hz, double fc_hz, int n1_count, int n2_count,
                         const GainAngles &angles, const RVec &phases)
{
    const double xi = f_hz / fc_hz;
    const double s_sum = spatial_s(angles.u_out, angles.v_out) + spatial_s(angles.u_in, angles.v_in);
    const double e_sum = spatial_e(angles.u_out, angles.v_out) + spatial_e(angles.u_in, angles.v_in);
    cxd sum = 0.0;
    for (int n1 = 0; n1 < n1_count; ++n1)
        for (int n2 = 0; n2 < n2_count; ++n2) {
            const double geo_phase = kPi * xi * (double(n1) * s_sum + double(n2) * e_sum);
            sum += std::polar(1.0, geo_phase + phases[n1 * n2_count + n2]);
        }
    return std::abs(sum) / double(n1_count * n2_count);
}

double gain_conventional_closed(double f_hz, double fc_hz, int n1_count, int n2_count,
                                const GainAngles &angles)
{
    const double xi = f_hz / fc_hz;
    const double s_sum = spatial_s(angles.u_out, angles.v_out) + spatial_s(angles.u_in, angles.v_in);
    const double e_sum = spatial_e(angles.u_out, angles.v_out) + spatial_e(angles.u_in, angles.v_in);
    return std::abs(xi_kernel(n1_count, (xi - 1.0) * s_sum) *
                    xi_kernel(n2_count, (xi - 1.0) * e_sum)) /
           double(n1_count * n2_count);
}

double gain_fully(double f_hz, double fc_hz, int n1_count, int n2_count, const GainAngles &angles,
                  const RVec &phases, const RVec &delays_s)
{
    const double xi = f_hz / fc_hz;
    const double s_sum = spatial_s(angles.u_out, angles.v_out) + spatial_s(angles.u_in, angles.v_in);
    const double e_sum = spatial_e(angles.u_out, angles.v_out) + spatial_e(angles.u_in, angles.v_in);
    cxd sum = 0.0;
    for (int n1 = 0; n1 < n1_count; ++n1)
        for (int n2 = 0; n2 < n2_count; ++n2) {
            const int n = n1 * n2_count + n2;
            const double geo_phase = kPi * xi * (double(n1) * s_sum + double(n2) * e_sum);
            sum += std::polar(1.0, geo_phase + phases[n] - 2.0 * kPi * f_hz * delays_s[n]);
        }
    return std::abs(sum) / double(n1_count * n2_count);
}

double gain_sub(double f_hz, double fc_hz, int n1_count, int n2_count, int s1_count, int s2_count,
                const GainAngles &angles, const SubConnectedDesign &design)
{
    const double xi = f_hz / fc_hz;
    const int l1_count = n1_count / s1_count;
    const int l2_count = n2_count / s2_count;
    const double s_in = spatial_s(angles.u_in, angles.v_in);
    const double e_in = spatial_e(angles.u_in, angles.v_in);
    const double s_out = spatial_s(angles.u_out, angles.v_out);
    const double e_out = spatial_e(angles.u_out, angles.v_out);

    cxd total = 0.0;
    for (int sr = 0; sr < s1_count; ++sr)
        for (int sc = 0; sc < s2_count; ++sc) {
            cxd incident = 0.0, outgoing = 0.0;
            for (int l1 = 0; l1 < l1_count; ++l1)
                for (int l2 = 0; l2 < l2_count; ++l2) {
                    const int n1 = sr * l1_count + l1, n2 = sc * l2_count + l2;
                    const int n = n1 * n2_count + n2;
                    incident += std::polar(
                        1.0, kPi * xi * (double(n1) * s_in + double(n2) * e_in) + design.phi1[n]);
                    outgoing += std::polar(
                        1.0, kPi * xi * (double(n1) * s_out + double(n2) * e_out) + design.phi2[n]);
                }
            const double delay_phase = -2.0 * kPi * f_hz * design.tau_s[sr * s2_count + sc];
            total += incident * std::polar(1.0, delay_phase) * outgoing;
        }
    return std::abs(total) / double(n1_count * n2_count * l1_count * l2_count);
}

double gain_sub_closed(double f_hz, double fc_hz, int n1_count, int n2_count, int s1_count,
                       int s2_count, const GainAngles &angles)
{
    const double xi = f_hz / fc_hz;
    const int l1_count = n1_count / s1_count;
    const int l2_count = n2_count / s2_count;
    const double s_in = spatial_s(angles.u_in, angles.v_in);
    const double e_in = spatial_e(angles.u_in, angles.v_in);
    const double s_out = spatial_s(angles.u_out, angles.v_out);
    const double e_out = spatial_e(angles.u_out, angles.v_out);
    const double x = xi - 1.0;
    const double prod = xi_kernel(l1_count, x * s_in) * xi_kernel(l2_count, x * e_in) *
                        xi_kernel(l1_count, x * s_out) * xi_kernel(l2_count, x * e_out);
    return std::abs(prod) / double(l1_count * l1_count * l2_count * l2_count);
}

double designed_gain(RisStructure structure, double f_hz, double fc_hz, int n1_count, int n2_count,
                     int s1_count, int s2_count, const GainAngles &angles)
{
    switch (structure) {
    case RisStructure::Conventional: {
        const RVec phases = design_conventional_phases(angles.u_in, angles.v_in, angles.u_out,
                                                       angles.v_out, n1_count, n2_count);
        return gain_conventional(f_hz, fc_hz, n1_count, n2_count, angles, phases);
    }
    case RisStructure::FullyConnected: {
        const RVec delays = design_fully_connected_delays(angles.u_in, angles.v_in, angles.u_out,
                                                          angles.v_out, fc_hz, n1_count, n2_count);
        return gain_fully(f_hz, fc_hz, n1_count, n2_count, angles, RVec::Zero(n1_count * n2_count),
                          delays);
    }
    case RisStructure::SubConnected: {
        const SubConnectedDesign d =
            design_sub_connected(angles.u_in, angles.v_in, angles.u_out, angles.v_out, fc_hz,
                                 n1_count, n2_count, s1_count, s2_count);
        return gain_sub(f_hz, fc_hz, n1_count, n2_count, s1_count, s2_count, angles, d);
    }
    }
    return 0.0;
}

std::vector<GainPoint> sweep_gain(const ScenarioConfig &cfg, RisStructure structure,
                                  const std::vector<double> &bandwidths_hz)
{
    const Geometry geo = build_geometry(cfg);
    const Allocation alloc = allocate_users(geo, cfg.num_ris, cfg.num_users);
    const RisLink &in = geo.bs_to_ris.front();

    std::vector<GainPoint> points;
    for (double bw : bandwidths_hz) {
        const SubcarrierGrid grid = subcarrier_frequencies(cfg.fc_hz, bw, cfg.num_subcarriers);
        for (Side side : kBothSides) {
            const int k = alloc.user_for(0, side);
            const UserLink &out = geo.ris_to_user.front()[std::size_t(k)];
            GainAngles angles{in.u_rad, in.v_rad, out.u_rad, out.v_rad};
            for (int m = 0; m < grid.size(); ++m) {
                GainPoint p;
                p.structure = to_string(structure);
                p.side = to_string(side);
                p.bandwidth_hz = bw;
                p.m = m + 1;
                p.f_hz = grid.frequency_hz[std::size_t(m)];
                p.gain = designed_gain(structure, p.f_hz, cfg.fc_hz, cfg.ris_rows, cfg.ris_cols,
                                       cfg.sub_rows, cfg.sub_cols, angles);
                points.push_back(p);
            }
        }
    }
    return points;
}

std::string gain_csv(const std::vector<GainPoint> &points)
{
    std::ostringstream out;
    out << "structure,side,bandwidth_hz,m,f_hz,gain\n";
    char buf[160];
    for (const GainPoint &p : points) {
        std::snprintf(buf, sizeof buf, "%s,%s,%.17g,%d,%.17g,%.17g\n", p.structure.c_str(),
                      p.side.c_str(), p.bandwidth_hz, p.m, p.f_hz, p.gain);
        out << buf;
    }
    return out.str();
}

} // namespace starbeam
