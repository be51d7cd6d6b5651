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

#include <vector>

#include "starbeam/common.hpp"
#include "starbeam/scenario.hpp"

namespace starbeam {

/// Hybrid BS frontend: a fixed phase-shifter network (one block of Kt
/// columns per RF chain, P = Nt/Kt antennas per column) cascaded with one
/// true-time-delay line per (chain, segment). With delays enabled, every
/// segment carries the same P-element pattern and the inter-segment
/// progression comes entirely from the delays, which makes the combined
/// steering exact at the central frequency and frequency-robust elsewhere.
/// With delays disabled the phase network holds the full centre-frequency
/// steering vector (conventional hybrid beamformer).
struct BsFrontend {
    CMat analog;                      // F_A: Nt x (Kt * Nrf), block-diagonal per chain
    std::vector<RVec> delays;         // z_l (seconds), length Kt per RF chain
    std::vector<CMat> per_subcarrier; // F_m = F_A * F_td(f_m): Nt x Nrf
    std::vector<double> frequency_hz;
    int num_antennas = 0;
    int num_chains = 0;
    int tds_per_chain = 0;

    const CMat &at(int m) const { return per_subcarrier[std::size_t(m)]; }
};

/// Phase-shifter matrix. serve_theta_rad holds one pointing direction per RF
/// chain. identical_segments = true is the delay-compensated layout; false
/// stores contiguous slices of the full centre-frequency steering vector
/// (used when delays are off). Nonzero entries have modulus 1/sqrt(Nt).
CMat analog_beamformer(const std::vector<double> &serve_theta_rad, int num_antennas,
                       int tds_per_chain, bool identical_segments);

/// Delay line of one chain: z_l = [0, b T_c, ..., b T_c (Kt-1)] with
/// b = -P sin(theta) / 2 and T_c = 1/fc. Negative values are signed delays;
/// nonnegative = true adds a constant per-chain offset (same gains, global
/// phase only).
RVec td_delays(double theta_rad, int tds_per_chain, int phase_shifters_per_td, double fc_hz,
               bool nonnegative = false);

/// Block-diagonal time-delay matrix (Kt*Nrf x Nrf) at frequency f:
/// chain l's block is the column vector exp(-j 2 pi f z_l).
CMat td_phase_matrix(const std::vector<RVec> &delays, double f_hz);

/// F_m = F_A * F_td(f_m).
CMat combined_frontend(const CMat &analog, const CMat &td_matrix);

/// Build the whole frontend for a scenario: RF chains point at the STAR-RIS
/// directions in contiguous blocks (chains [l0, l0 + Nrf/R) serve RIS r).
BsFrontend build_bs_frontend(const ScenarioConfig &cfg, const Geometry &geo,
                             const SubcarrierGrid &grid);

/// |a(f, theta)^H f_l(f)|: residual beamforming gain of chain l toward its
/// own pointing direction.
double bs_combined_gain(const BsFrontend &frontend, int m, int chain, double theta_rad,
                        double fc_hz);

} // namespace starbeam
