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

#include <map>
#include <string>
#include <vector>

#include "starbeam/fp_optimizer.hpp"
#include "starbeam/scenario.hpp"

namespace starbeam {

/// Beamforming scheme: RIS structure plus whether the BS delay lines are
/// active. "conventional" keeps the BS delays (only the RIS lacks them);
/// "no_td" zeroes the delay compensation everywhere.
enum class Scheme { FullyConnected, SubConnected, Conventional, NoTd };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string &name);

/// Apply the scheme to a config (structure, bs_td, ris_td).
ScenarioConfig with_scheme(ScenarioConfig cfg, Scheme scheme);

/// One full system optimization: geometry (optionally seed-randomized user
/// placement), channels, closed-form frontend and RIS designs, then the
/// alternating optimizer. With csi_delta > 0 the optimizer sees channels
/// with entrywise estimation error while the reported rate is evaluated on
/// the true ones.
struct SystemResult {
    FpState state;
    double sum_rate_bits = 0.0; // on the true channels
    int iterations = 0;
    bool converged = false;
};

/// csi_stream selects the error realization independently of the placement
/// seed, so Monte-Carlo draws share one scenario.
SystemResult run_system(const ScenarioConfig &cfg, std::uint64_t seed,
                        std::uint64_t csi_stream = 0);

/// Surface configuration computed from estimated channels: the user-side
/// phase layer aligns to the per-element estimate at the subcarrier nearest
/// the design frequency, so it carries that estimate's phase error
/// one-for-one. Delay values and the BS-side layer keep their design values
/// (their estimates average over many observations and the residual is
/// second order).
RisState deploy_from_estimate(const ScenarioConfig &cfg, const Allocation &alloc,
                              const RisState &designed, const ChannelSet &channels,
                              const ChannelSet &estimated);

/// Mix a stream index into a base seed (stable across platforms).
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

enum class ExperimentKind {
    GainBandwidth, // per-subcarrier gain curves for several bandwidths
    GainStructure, // per-subcarrier gain curves for the three structures
    Convergence,   // per-iteration objective and rate per scheme
    TdSweep,       // sum rate vs number of sub-surfaces
    BandwidthSweep,
    PowerSweep,
    CsiSweep,      // mean/std sum rate vs CSI error level
};

ExperimentKind experiment_kind_from_string(const std::string &name);
std::string to_string(ExperimentKind kind);

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::GainStructure;
    ScenarioConfig config;
    std::string out_dir;
    std::uint64_t seed = 1;
    int repetitions = 1;
    // Sweep lists; defaults depend on the kind.
    std::vector<Scheme> schemes = {Scheme::FullyConnected, Scheme::SubConnected,
                                   Scheme::Conventional, Scheme::NoTd};
    std::vector<double> bandwidths_hz = {1e9, 5e9, 10e9, 20e9};
    std::vector<int> td_counts = {1, 4, 16, 64};
    std::vector<double> powers_w = {5.0, 10.0, 15.0, 20.0, 25.0};
    std::vector<double> deltas = {0.0, 0.1, 0.2};
    int csi_draws = 50;

    /// Parse [experiment] keys (schemes, sweep lists, csi_draws,
    /// repetitions); unknown keys are a hard error.
    void apply_experiment_keys(const std::map<std::string, std::string> &keys);
};

struct ExperimentResult {
    std::string csv_path;
    std::string manifest_path;
    std::string summary_path;
    std::string csv;     // file content, also returned for in-process checks
    std::string summary;
};

/// Run one experiment: writes <kind>.csv, manifest.txt and summary.txt under
/// spec.out_dir. Identical spec => byte-identical artifacts.
ExperimentResult run_experiment(const ExperimentSpec &spec);

/// Schema check + divisibility + geometry sanity; returns the resolved
/// config text. Throws ConfigError with diagnostics on failure.
std::string validate_config_file(const std::string &path);

/// SHA-256 hex digest (content hash for run manifests).
std::string sha256_hex(const std::string &data);

} // namespace starbeam
