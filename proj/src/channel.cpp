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

#include "starbeam/channel.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace starbeam {

CVec ris_steering_vector(double f_hz, double fc_hz, double u_rad, double v_rad, int n1_count,
                         int n2_count)
{
    const double xi = f_hz / fc_hz;
    const double s = std::sin(u_rad) * std::sin(v_rad);
    const double e = std::cos(v_rad);
    const int n = n1_count * n2_count;
    const double scale = 1.0 / std::sqrt(double(n));
    CVec out(n);
    for (int n1 = 0; n1 < n1_count; ++n1)
        for (int n2 = 0; n2 < n2_count; ++n2)
            out[n1 * n2_count + n2] =
                scale * std::polar(1.0, kPi * xi * (double(n1) * s + double(n2) * e));
    return out;
}

CVec bs_steering_vector(double f_hz, double fc_hz, double theta_rad, int num_antennas)
{
    const double xi = f_hz / fc_hz;
    const double s = std::sin(theta_rad);
    const double scale = 1.0 / std::sqrt(double(num_antennas));
    CVec out(num_antennas);
    for (int n = 0; n < num_antennas; ++n)
        out[n] = scale * std::polar(1.0, kPi * xi * double(n) * s);
    return out;
}

double path_gain(double f_hz, double distance_m, double absorption_per_m)
{
    if (distance_m <= 0.0)
        throw ConfigError("path distance must be > 0");
    if (f_hz <= 0.0)
        throw ConfigError("frequency must be > 0");
    return kSpeedOfLight / (4.0 * kPi * f_hz * distance_m) *
           std::exp(-0.5 * absorption_per_m * distance_m);
}

CMat ChannelSet::stacked_bs_to_ris(int m) const
{
    CMat out(num_ris * ris_elements, bs_antennas);
    for (int r = 0; r < num_ris; ++r)
        out.middleRows(r * ris_elements, ris_elements) = bs_to_ris[std::size_t(r)][std::size_t(m)];
    return out;
}

CRow ChannelSet::stacked_ris_to_user(int m, int k) const
{
    CRow out(num_ris * ris_elements);
    for (int r = 0; r < num_ris; ++r)
        out.segment(r * ris_elements, ris_elements) =
            ris_to_user[std::size_t(r)][std::size_t(m)][std::size_t(k)];
    return out;
}

ChannelSet build_channel_set(const ScenarioConfig &cfg, const Geometry &geo,
                             const SubcarrierGrid &grid)
{
    ChannelSet set;
    set.num_ris = cfg.num_ris;
    set.num_subcarriers = grid.size();
    set.num_users = cfg.num_users;
    set.ris_elements = cfg.ris_elements();
    set.bs_antennas = cfg.num_bs_antennas;
    set.frequency_hz = grid.frequency_hz;
    set.bs_to_ris.assign(std::size_t(set.num_ris), std::vector<CMat>(std::size_t(set.num_subcarriers)));
    set.ris_to_user.assign(
        std::size_t(set.num_ris),
        std::vector<std::vector<CRow>>(std::size_t(set.num_subcarriers),
                                       std::vector<CRow>(std::size_t(set.num_users))));

    // The per-antenna/per-element link gain is alpha; the array aggregation
    // factors sqrt(Nt) and sqrt(N_RIS) restore the physical responses on top
    // of the unit-norm steering vectors, so every matrix entry has modulus
    // alpha and coherent combining yields the full array gains.
    const double bs_factor = std::sqrt(double(cfg.num_bs_antennas));
    const double ris_factor = std::sqrt(double(cfg.ris_elements()));

    // Per-subcarrier construction is independent; fan out over m.
    parallel_for(std::size_t(set.num_subcarriers), [&](std::size_t mi) {
        const double f = grid.frequency_hz[mi];
        for (int r = 0; r < set.num_ris; ++r) {
            const RisLink &link = geo.bs_to_ris[std::size_t(r)];
            const double alpha = path_gain(f, link.distance_m, cfg.absorption_per_m);
            const cxd rotation =
                std::polar(alpha * ris_factor * bs_factor, -2.0 * kPi * link.delay_s * f);
            const CVec b = ris_steering_vector(f, cfg.fc_hz, link.u_rad, link.v_rad, cfg.ris_rows,
                                               cfg.ris_cols);
            const CVec a = bs_steering_vector(f, cfg.fc_hz, link.aod_bs_rad, cfg.num_bs_antennas);
            set.bs_to_ris[std::size_t(r)][mi] = rotation * (b * a.adjoint());
            for (int k = 0; k < set.num_users; ++k) {
                const UserLink &ul = geo.ris_to_user[std::size_t(r)][std::size_t(k)];
                const double alpha_u = path_gain(f, ul.distance_m, cfg.absorption_per_m);
                const cxd rot_u =
                    std::polar(alpha_u * ris_factor, -2.0 * kPi * ul.delay_s * f);
                const CVec bu =
                    ris_steering_vector(f, cfg.fc_hz, ul.u_rad, ul.v_rad, cfg.ris_rows, cfg.ris_cols);
                set.ris_to_user[std::size_t(r)][mi][std::size_t(k)] = rot_u * bu.transpose();
            }
        }
    });
    return set;
}

ChannelSet apply_csi_error(const ChannelSet &channels, double delta, Rng &rng)
{
    ChannelSet out = channels;
    if (delta == 0.0)
        return out;
    for (int r = 0; r < channels.num_ris; ++r)
        for (int m = 0; m < channels.num_subcarriers; ++m)
            out.bs_to_ris[std::size_t(r)][std::size_t(m)] =
                apply_csi_error(channels.bs_to_ris[std::size_t(r)][std::size_t(m)], delta, rng);
    for (int r = 0; r < channels.num_ris; ++r)
        for (int m = 0; m < channels.num_subcarriers; ++m)
            for (int k = 0; k < channels.num_users; ++k) {
                const CVec noisy = apply_csi_error(
                    CVec(channels.ris_to_user[std::size_t(r)][std::size_t(m)][std::size_t(k)]
                             .transpose()),
                    delta, rng);
                out.ris_to_user[std::size_t(r)][std::size_t(m)][std::size_t(k)] = noisy.transpose();
            }
    return out;
}

CRow equivalent_channel(const ChannelSet &channels, const RisState &ris, int m, int k, Side side)
{
    if (ris.num_ris() != channels.num_ris || ris.elements() != channels.ris_elements)
        throw std::logic_error("RIS state does not match the channel set");
    const double f = channels.frequency_hz[std::size_t(m)];
    CRow acc = CRow::Zero(channels.bs_antennas);
    for (int r = 0; r < channels.num_ris; ++r) {
        const CRow &h = channels.ris_to_user[std::size_t(r)][std::size_t(m)][std::size_t(k)];
        const CVec diag = compose_phase_matrix(ris, r, side, f);
        const RVec &amp = ris.side(r, side).amplitude;
        // All middle factors are diagonal: weight the row, then one GEMV.
        const CRow weighted =
            h.cwiseProduct(diag.transpose()).cwiseProduct(amp.transpose().cast<cxd>());
        acc.noalias() += weighted * channels.bs_to_ris[std::size_t(r)][std::size_t(m)];
    }
    return acc;
}

std::string channel_csv(const ChannelSet &channels)
{
    std::ostringstream out;
    out << "link,ris,m,user,element,re,im\n";
    char buf[160];
    for (int r = 0; r < channels.num_ris; ++r)
        for (int m = 0; m < channels.num_subcarriers; ++m) {
            const CMat &g = channels.bs_to_ris[std::size_t(r)][std::size_t(m)];
            for (Eigen::Index i = 0; i < g.size(); ++i) {
                std::snprintf(buf, sizeof buf, "bs_ris,%d,%d,-1,%lld,%.17g,%.17g\n", r, m,
                              (long long)i, g(i).real(), g(i).imag());
                out << buf;
            }
            for (int k = 0; k < channels.num_users; ++k) {
                const CRow &h = channels.ris_to_user[std::size_t(r)][std::size_t(m)][std::size_t(k)];
                for (Eigen::Index i = 0; i < h.size(); ++i) {
                    std::snprintf(buf, sizeof buf, "ris_user,%d,%d,%d,%lld,%.17g,%.17g\n", r, m, k,
                                  (long long)i, h[i].real(), h[i].imag());
                    out << buf;
                }
            }
        }
    return out.str();
}

} // namespace starbeam
