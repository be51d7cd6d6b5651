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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "starbeam/common.hpp"

namespace starbeam {

/// Side of a STAR-RIS surface. Each element splits incident energy into a
/// reflected and a transmitted component with independent phases/amplitudes.
enum class Side { Reflection, Transmission };

constexpr int side_index(Side s) { return s == Side::Reflection ? 0 : 1; }
constexpr std::array<Side, 2> kBothSides = {Side::Reflection, Side::Transmission};

/// RIS hardware structure.
///  - Conventional: one phase shifter per element, no time delays.
///  - FullyConnected: one phase shifter and one time delayer per element.
///  - SubConnected: double-layer phase shifters per element, one shared time
///    delayer per sub-surface of L1 x L2 elements.
enum class RisStructure { Conventional, FullyConnected, SubConnected };

std::string to_string(RisStructure s);
std::string to_string(Side s);

struct SolverKnobs {
    double fp_tol = 1e-4;        // relative surrogate-objective change for convergence
    int fp_max_iters = 50;       // outer iteration cap
    double qcqp_power_tol = 1e-8; // relative power mismatch at the bisection exit
    double admm_penalty = 1.0;
    double admm_tol = 1e-6;      // primal/dual residual threshold
    int admm_max_iters = 500;
};

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

/// Full scenario description: physical parameters, array/RIS dimensions,
/// deployment geometry and solver knobs. All values in SI units.
struct ScenarioConfig {
    double fc_hz = 100e9;     // central frequency
    double bandwidth_hz = 10e9;
    int num_subcarriers = 8;  // M
    int num_bs_antennas = 128; // Nt
    int num_rf_chains = 4;    // Nrf
    int num_tds_per_chain = 16; // Kt; P = Nt/Kt phase shifters per TD
    int num_ris = 2;          // R
    int ris_rows = 8;         // N1
    int ris_cols = 8;         // N2
    int sub_rows = 2;         // S1 (sub-surfaces per row axis)
    int sub_cols = 2;         // S2
    int num_users = 4;        // K, must equal 2R
    double max_power_w = 15.0;
    double noise_dbm = -85.0;
    double absorption_per_m = 0.0; // medium absorption factor kappa_abs
    double csi_delta = 0.0;        // CSI error level
    RisStructure structure = RisStructure::SubConnected;
    bool bs_td = true;              // false: zero BS delay compensation (no-TD baseline)
    bool ris_td = true;             // false: zero RIS delays (no-TD baseline)
    bool nonnegative_delays = false; // shift BS delay vectors into [0, inf)
    std::uint64_t seed = 1;
    SolverKnobs solver;

    // Geometry, position mode. Empty vectors select the default deployment:
    // BS at the origin, RIS line at y = 10 m, users on half-circles of
    // radius 1 m around (0, 10, 0).
    Vec3 bs_position{0.0, 0.0, 0.0};
    std::vector<Vec3> ris_positions;
    std::vector<Vec3> user_positions;
    std::vector<Side> user_sides;
    bool randomize_users = false; // redraw user azimuths from the seed

    // Geometry, explicit-angle mode (overrides positions when set).
    bool use_explicit_angles = false;
    std::vector<double> bs_ris_aod_rad;      // theta_{b,r}, R values
    std::vector<double> bs_ris_u_rad;        // u_{b,r}
    std::vector<double> bs_ris_v_rad;        // v_{b,r}
    std::vector<double> bs_ris_distance_m;   // d_{b,r}
    std::vector<double> ris_user_u_rad;      // u_{r,k}, R*K values row-major in r
    std::vector<double> ris_user_v_rad;
    std::vector<double> ris_user_distance_m;
    std::vector<double> bs_ris_delay_s;      // optional; default distance / c
    std::vector<double> ris_user_delay_s;    // optional

    std::vector<double> noise_dbm_per_user;  // optional per-user override

    int phase_shifters_per_td() const { return num_bs_antennas / num_tds_per_chain; }
    int ris_elements() const { return ris_rows * ris_cols; }
    int sub_surfaces() const { return sub_rows * sub_cols; }
    int elements_per_sub_row() const { return ris_rows / sub_rows; } // L1
    int elements_per_sub_col() const { return ris_cols / sub_cols; } // L2

    /// Throws ConfigError on violated invariants (divisibility, K = 2R, ...).
    void validate() const;
};

/// OFDM subcarrier grid, symmetric about the central frequency.
struct SubcarrierGrid {
    std::vector<double> frequency_hz; // f_m, length M
    std::vector<double> relative;     // xi_m = f_m / fc

    int size() const { return int(frequency_hz.size()); }
};

/// f_m = fc + (B/M) * (m - 1 - (M-1)/2), m = 1..M.
SubcarrierGrid subcarrier_frequencies(double fc_hz, double bandwidth_hz, int num_subcarriers);

/// dBm -> watts.
double noise_power_watts(double noise_dbm);

/// Line-of-sight link BS -> RIS.
struct RisLink {
    double aod_bs_rad = 0.0; // departure angle at the BS array
    double u_rad = 0.0;      // azimuth of arrival at the RIS
    double v_rad = kPi / 2;  // elevation of arrival at the RIS
    double distance_m = 1.0;
    double delay_s = 0.0;
};

/// Line-of-sight link RIS -> user.
struct UserLink {
    double u_rad = 0.0;
    double v_rad = kPi / 2;
    double distance_m = 1.0;
    double delay_s = 0.0;
};

/// Angles, distances and path delays for every link in the scenario,
/// either derived from 3-D positions or specified directly.
struct Geometry {
    std::vector<RisLink> bs_to_ris;                // [R]
    std::vector<std::vector<UserLink>> ris_to_user; // [R][K]
    std::vector<Side> user_sides;                   // [K]

    int num_ris() const { return int(bs_to_ris.size()); }
    int num_users() const { return int(user_sides.size()); }

    /// Angle between the (u, v) departure direction and the surface
    /// boresight; used for user allocation.
    static double boresight_angle(double u_rad, double v_rad);
};

/// Build geometry from the config (positions or explicit angles). When rng
/// is given and cfg.randomize_users is set, user azimuths on the half-circles
/// are redrawn from it.
Geometry build_geometry(const ScenarioConfig &cfg, Rng *rng = nullptr);

/// RIS -> (reflection user, transmission user) matching.
struct Allocation {
    std::vector<int> reflection_user; // [R]
    std::vector<int> transmission_user; // [R]

    int user_for(int r, Side side) const
    {
        return side == Side::Reflection ? reflection_user[r] : transmission_user[r];
    }
};

/// Greedy nearest-boresight matching, RIS order, lowest user index wins ties.
Allocation allocate_users(const Geometry &geo, int num_ris, int num_users);

/// h + e with e zero-mean circular complex Gaussian, per-entry variance
/// delta * |h_n|^2. Deterministic for a given rng state.
CVec apply_csi_error(const CVec &h, double delta, Rng &rng);
CMat apply_csi_error(const CMat &h, double delta, Rng &rng);

// --- Config file handling -------------------------------------------------
//
// Flat key = value lines, optional [section] headers (scenario, geometry,
// solver, experiment), '#' comments. Unknown keys are a hard error.

struct ConfigLine {
    std::string section;
    std::string key;
    std::string value;
    int line = 0;
};

/// Parse file content into lines; no semantic validation yet.
std::vector<ConfigLine> parse_key_value_text(const std::string &text);

/// Parse + validate a scenario config from file content. Keys from the
/// [experiment] section are collected into experiment_keys (validated by the
/// experiment runner) so that scenario parsing can stay strict.
ScenarioConfig config_from_text(const std::string &text,
                                std::map<std::string, std::string> *experiment_keys = nullptr);

ScenarioConfig load_config(const std::string &path,
                           std::map<std::string, std::string> *experiment_keys = nullptr);

/// Apply a single "key=value" override (same keys as the config file).
void apply_override(ScenarioConfig &cfg, const std::string &key, const std::string &value);

/// Render the fully-resolved config as config-file text (manifest, validate).
std::string resolved_text(const ScenarioConfig &cfg);

} // namespace starbeam
