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

#include <string>
#include <vector>

#include "starbeam/common.hpp"
#include "starbeam/scenario.hpp"
#include "starbeam/star_ris.hpp"

namespace starbeam {

/// Dirichlet-kernel-style ratio sin(N pi x / 2) / sin(pi x / 2). The
/// removable singularities at even-integer x evaluate to +-N via the
/// continuous limit; |result| <= N everywhere.
double xi_kernel(int n, double x);

/// Incident (BS side) and departure (user side) directions at one surface.
struct GainAngles {
    double u_in = 0.0, v_in = kPi / 2;
    double u_out = 0.0, v_out = kPi / 2;
};

/// Normalized array gain of the conventional structure by direct summation
/// over all elements with the given per-element phases.
double gain_conventional(double f_hz, double fc_hz, int n1_count, int n2_count,
                         const GainAngles &angles, const RVec &phases);

/// Closed form of the conventional gain for the centre-frequency design.
double gain_conventional_closed(double f_hz, double fc_hz, int n1_count, int n2_count,
                                const GainAngles &angles);

/// Fully-connected structure: direct summation with per-element phases and
/// delays. The designed delays give gain 1 at every frequency.
double gain_fully(double f_hz, double fc_hz, int n1_count, int n2_count, const GainAngles &angles,
                  const RVec &phases, const RVec &delays_s);

/// Sub-connected structure: per sub-surface, first-layer phases combine the
/// incident field into the shared delay line, whose output is re-radiated
/// through the second-layer phases. Normalized so the designed state reaches
/// gain 1 at the centre frequency.
double gain_sub(double f_hz, double fc_hz, int n1_count, int n2_count, int s1_count, int s2_count,
                const GainAngles &angles, const SubConnectedDesign &design);

/// Closed form of the sub-connected gain for the designed state.
double gain_sub_closed(double f_hz, double fc_hz, int n1_count, int n2_count, int s1_count,
                       int s2_count, const GainAngles &angles);

/// Gain of a designed structure at one frequency (dispatch helper used by
/// sweeps and tests).
double designed_gain(RisStructure structure, double f_hz, double fc_hz, int n1_count, int n2_count,
                     int s1_count, int s2_count, const GainAngles &angles);

struct GainPoint {
    std::string structure;
    std::string side;
    double bandwidth_hz = 0.0;
    int m = 0;
    double f_hz = 0.0;
    double gain = 0.0;
};

/// Per-subcarrier designed-gain curves of one structure for each requested
/// bandwidth, both sides, using the scenario's first RIS and its allocated
/// users. Deterministic.
std::vector<GainPoint> sweep_gain(const ScenarioConfig &cfg, RisStructure structure,
                                  const std::vector<double> &bandwidths_hz);

/// CSV with columns structure,side,bandwidth_hz,m,f_hz,gain.
std::string gain_csv(const std::vector<GainPoint> &points);

} // namespace starbeam
