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

#include <array>
#include <string>
#include <vector>

#include "starbeam/common.hpp"
#include "starbeam/scenario.hpp"

namespace starbeam {

/// One side (reflection or transmission) of one STAR-RIS.
struct RisSideState {
    RVec phi1;      // first-layer phases (rad), length N_RIS
    RVec phi2;      // second-layer phases (rad), length N_RIS
    RVec tau_s;     // delays (s): length N_RIS (fully), S (sub-connected), 0 (conventional)
    RVec amplitude; // beta in [0, 1], length N_RIS
};

/// State of all STAR-RISs: per-RIS, per-side phases, delays and amplitudes.
struct RisState {
    RisStructure structure = RisStructure::SubConnected;
    int n1 = 0, n2 = 0; // element grid
    int s1 = 1, s2 = 1; // sub-surface grid (sub-connected only)
    std::vector<std::array<RisSideState, 2>> ris; // [R][side]

    int num_ris() const { return int(ris.size()); }
    int elements() const { return n1 * n2; }

    const RisSideState &side(int r, Side s) const { return ris[std::size_t(r)][std::size_t(side_index(s))]; }
    RisSideState &side(int r, Side s) { return ris[std::size_t(r)][std::size_t(side_index(s))]; }

    /// Stacked amplitude diagonal (length R * N_RIS) of one side.
    RVec stacked_amplitude(Side s) const;
    void set_stacked_amplitude(Side s, const RVec &beta);
};

/// Phase-shifter design for the conventional structure, aligned at the
/// central frequency: phi_n = -pi * [n1 (s_out + s_in) + n2 (e_out + e_in)]
/// with s = sin(u) sin(v) and e = cos(v).
RVec design_conventional_phases(double u_in, double v_in, double u_out, double v_out, int n1_count,
                                int n2_count);

/// Per-element delays of the fully-connected structure; the companion
/// phase shifters are fixed to zero. Negative values are kept as signed
/// delays (only the resulting phase matters).
RVec design_fully_connected_delays(double u_in, double v_in, double u_out, double v_out,
                                   double fc_hz, int n1_count, int n2_count);

struct SubConnectedDesign {
    RVec phi1;  // length N_RIS, depends on the incident direction only
    RVec phi2;  // length N_RIS, depends on the departure direction
    RVec tau_s; // length S1*S2, one delay per sub-surface
};

/// Double-layer phases and sub-surface delays of the sub-connected structure.
SubConnectedDesign design_sub_connected(double u_in, double v_in, double u_out, double v_out,
                                        double fc_hz, int n1_count, int n2_count, int s1_count,
                                        int s2_count);

/// Design every RIS for its allocated users. Initial amplitudes are
/// 1/sqrt(2) on both sides (energy-tight). With cfg.ris_td = false the
/// delays of TD-equipped structures are zeroed, keeping the phase designs.
RisState design_ris_state(const ScenarioConfig &cfg, const Geometry &geo, const Allocation &alloc);

/// Diagonal of the composed per-subcarrier response of RIS r at frequency f:
/// entries exp(j(phi2 + phi1 - 2 pi f tau)), sub-surface delays broadcast
/// over their L1*L2 elements. Amplitudes are not included.
CVec compose_phase_matrix(const RisState &state, int r, Side side, double f_hz);

/// Stacked composed diagonal over all RISs (length R * N_RIS).
CVec stacked_phase_matrix(const RisState &state, Side side, double f_hz);

struct EnergyViolation {
    int ris = 0;
    int element = 0;
    double total = 0.0; // beta_R^2 + beta_T^2
};

/// Elements with beta_R^2 + beta_T^2 > 1 + 1e-9.
std::vector<EnergyViolation> validate_energy(const RisState &state);

/// Per-element phases/delays/amplitudes as CSV for inspection.
std::string ris_state_csv(const RisState &state);

} // namespace starbeam
