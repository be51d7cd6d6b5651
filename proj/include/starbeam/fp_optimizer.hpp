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

#include "starbeam/bs_frontend.hpp"
#include "starbeam/channel.hpp"
#include "starbeam/common.hpp"
#include "starbeam/scenario.hpp"
#include "starbeam/solvers.hpp"
#include "starbeam/star_ris.hpp"

namespace starbeam {

/// Everything the alternating optimizer needs, precomputed once: the analog
/// frontend and RIS phases are fixed in closed form before the loop, so the
/// per-user channel rows and the RIS->BS cascades never change; only the
/// digital beamformers and the amplitude vectors move.
struct FpProblem {
    int num_subcarriers = 0; // M
    int num_users = 0;       // K
    int num_chains = 0;      // Nrf
    int stacked_elements = 0; // R * N_RIS
    double p_max = 0.0;
    RMat noise_w;                            // M x K noise power (watts)
    std::vector<Side> user_side;             // K
    std::vector<std::vector<CRow>> user_row; // [M][K]: RIS->user row * composed phases
    std::vector<CMat> cascade;               // [M]: stacked BS->RIS times F_m
    std::vector<CMat> chain_gram;            // [M]: F_m^H F_m
    SolverKnobs knobs;
};

FpProblem make_fp_problem(const ScenarioConfig &cfg, const Geometry &geo,
                          const ChannelSet &channels, const BsFrontend &frontend,
                          const RisState &ris);

/// Per-iteration trace row (written to the trace CSV).
struct FpTraceRow {
    int iteration = 0;
    double ldr_objective = 0.0;
    double sum_rate_bits = 0.0;
    double power_used = 0.0;
    double max_energy_violation = 0.0;
};

/// Optimizer state: digital beamformers, auxiliaries, amplitudes, trace.
struct FpState {
    std::vector<std::vector<CVec>> d; // [M][K], length Nrf each
    RMat rho;                         // M x K, SINR-valued auxiliary
    CMat varpi;                       // M x K quadratic-transform auxiliary
    CMat eps;                         // M x K amplitude-stage auxiliary
    RVec beta_r, beta_t;              // stacked amplitudes, R*N_RIS each
    std::vector<FpTraceRow> trace;
    std::vector<double> block_objectives; // surrogate value after every block update
    std::vector<std::string> warnings;
    int iterations = 0;
    bool converged = false;
};

/// Effective per-user channels hhat[m][k] (1 x Nrf) under the given amplitudes.
std::vector<std::vector<CRow>> effective_channels(const FpProblem &p, const RVec &beta_r,
                                                  const RVec &beta_t);

double sinr(const std::vector<std::vector<CRow>> &hhat, const std::vector<std::vector<CVec>> &d,
            const RMat &noise_w, int m, int k);

/// Sum over users and subcarriers of log2(1 + SINR).
double sum_rate(const FpProblem &p, const std::vector<std::vector<CRow>> &hhat,
                const std::vector<std::vector<CVec>> &d);

/// Fractional surrogate of the sum rate (natural log): for each (m, k),
/// ln(1 + rho) - rho + (1 + rho) f, where f's denominator keeps the j = k term.
double ldr_objective(const FpProblem &p, const std::vector<std::vector<CRow>> &hhat,
                     const std::vector<std::vector<CVec>> &d, const RMat &rho);

/// Closed-form maximizer of the surrogate over rho: the current SINR.
RMat update_rho(const FpProblem &p, const std::vector<std::vector<CRow>> &hhat,
                const std::vector<std::vector<CVec>> &d);

/// Closed-form quadratic-transform auxiliary (complex valued).
CMat update_varpi(const FpProblem &p, const std::vector<std::vector<CRow>> &hhat,
                  const std::vector<std::vector<CVec>> &d, const RMat &rho);

/// Quadratic-transform surrogate of the beamforming stage.
double g1_value(const FpProblem &p, const std::vector<std::vector<CRow>> &hhat,
                const std::vector<std::vector<CVec>> &d, const RMat &rho, const CMat &varpi);

/// Stacked QCQP for the digital beamformers (block-diagonal E and C).
QcqpProblem assemble_qcqp(const FpProblem &p, const std::vector<std::vector<CRow>> &hhat,
                          const RMat &rho, const CMat &varpi);

/// Split a stacked QCQP solution back into per-(m, k) beamformers.
std::vector<std::vector<CVec>> unstack_beamformers(const FpProblem &p, const CVec &d);

/// Cascade scalar for user k, stream j at subcarrier m under candidate
/// amplitudes: (user_row o beta_side(k)) * cascade * d_j.
cxd psi(const FpProblem &p, const RVec &beta_r, const RVec &beta_t,
        const std::vector<std::vector<CVec>> &d, int m, int k, int j);

/// Closed-form amplitude-stage auxiliary (complex valued).
CMat update_epsilon(const FpProblem &p, const std::vector<std::vector<CRow>> &hhat,
                    const std::vector<std::vector<CVec>> &d, const RMat &rho);

/// Amplitude-stage surrogate evaluated at candidate amplitudes.
double g4_value(const FpProblem &p, const RVec &beta_r, const RVec &beta_t,
                const std::vector<std::vector<CVec>> &d, const RMat &rho, const CMat &eps);

struct AmplitudeAssembly {
    AmplitudeProblem problem; // real parts, exact for real amplitudes
    double omega = 0.0;       // constant noise term
};

AmplitudeAssembly assemble_amplitude_problem(const FpProblem &p,
                                             const std::vector<std::vector<CVec>> &d,
                                             const RMat &rho, const CMat &eps);

/// Total transmit power sum_{m,k} ||F_m d_{m,k}||^2.
double transmit_power(const FpProblem &p, const std::vector<std::vector<CVec>> &d);

/// Matched-filter beamformers scaled to the full power budget, split equally
/// over the (m, k) streams; amplitudes 1/sqrt(2) on both sides.
FpState initialize(const FpProblem &p);

/// Alternating optimization: rho -> varpi -> digital QCQP -> epsilon ->
/// amplitude ADMM, until the relative surrogate change drops below
/// knobs.fp_tol or the iteration cap. The surrogate must not decrease at any
/// block update (beyond numerical slack); a decrease aborts.
FpState run_algorithm1(const FpProblem &p);

/// Trace CSV: iteration,ldr_objective,sum_rate_bits,power_used,max_energy_violation.
std::string trace_csv(const FpState &state);

} // namespace starbeam
