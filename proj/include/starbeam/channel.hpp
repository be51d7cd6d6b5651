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

#pragma once

#include "starbeam/common.hpp"
#include "starbeam/scenario.hpp"
#include "starbeam/star_ris.hpp"

namespace starbeam {

/// Unit-norm UPA response of an N1 x N2 surface at relative frequency
/// xi = f/fc. Element (n1, n2) maps to flat index n = N2*n1 + n2 and carries
/// the phase pi * xi * (n1 * sin(u) sin(v) + n2 * cos(v)).
CVec ris_steering_vector(double f_hz, double fc_hz, double u_rad, double v_rad, int n1_count,
                         int n2_count);

/// Unit-norm ULA response of the BS array, phase pi * xi * n * sin(theta).
CVec bs_steering_vector(double f_hz, double fc_hz, double theta_rad, int num_antennas);

/// Free-space gain c / (4 pi f d) with exponential medium absorption.
double path_gain(double f_hz, double distance_m, double absorption_per_m);

/// Line-of-sight channels for every (RIS, subcarrier, user) tuple. Entries
/// carry the per-element link gain alpha; rank-one aggregation over the
/// arrays provides the physical beamforming gains.
struct ChannelSet {
    // bs_to_ris[r][m]: N_RIS x Nt, rank one by construction.
    std::vector<std::vector<CMat>> bs_to_ris;
    // ris_to_user[r][m][k]: 1 x N_RIS.
    std::vector<std::vector<std::vector<CRow>>> ris_to_user;

    int num_ris = 0;
    int num_subcarriers = 0;
    int num_users = 0;
    int ris_elements = 0;
    int bs_antennas = 0;
    std::vector<double> frequency_hz; // grid the set was built on

    /// Row-stacked BS->RIS matrix (R*N_RIS x Nt) at subcarrier m.
    CMat stacked_bs_to_ris(int m) const;
    /// Row-stacked RIS->user vector (1 x R*N_RIS) at subcarrier m for user k.
    CRow stacked_ris_to_user(int m, int k) const;
};

ChannelSet build_channel_set(const ScenarioConfig &cfg, const Geometry &geo,
                             const SubcarrierGrid &grid);

/// Entrywise CSI error on every matrix/vector of the set; the draw order is
/// fixed (BS->RIS by r then m, RIS->user by r, m, k) for determinism.
ChannelSet apply_csi_error(const ChannelSet &channels, double delta, Rng &rng);

/// Cascaded BS -> RIS -> user channel at subcarrier m for user k:
/// stacked RIS->user row, amplitude and composed phase diagonals of the
/// user's side, then the stacked BS->RIS matrix.
CRow equivalent_channel(const ChannelSet &channels, const RisState &ris, int m, int k, Side side);

/// Channel dump for cross-implementation diffing: one row per
/// (link, r, m, k, element) with real/imag columns.
std::string channel_csv(const ChannelSet &channels);

} // namespace starbeam
