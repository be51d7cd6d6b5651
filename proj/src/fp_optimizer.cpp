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

#include "starbeam/fp_optimizer.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace starbeam {

FpProblem make_fp_problem(const ScenarioConfig &cfg, const Geometry &geo,
                          const ChannelSet &channels, const BsFrontend &frontend,
                          const RisState &ris)
{
    FpProblem p;
    p.num_subcarriers = channels.num_subcarriers;
    p.num_users = channels.num_users;
    p.num_chains = frontend.num_chains;
    p.stacked_elements = channels.num_ris * channels.ris_elements;
    p.p_max = cfg.max_power_w;
    p.knobs = cfg.solver;

    p.noise_w.resize(p.num_subcarriers, p.num_users);
    for (int k = 0; k < p.num_users; ++k) {
        const double dbm =
            cfg.noise_dbm_per_user.empty() ? cfg.noise_dbm : cfg.noise_dbm_per_user[std::size_t(k)];
        p.noise_w.col(k).setConstant(noise_power_watts(dbm));
    }

    p.user_side = geo.user_sides;

    p.user_row.assign(std::size_t(p.num_subcarriers), std::vector<CRow>(std::size_t(p.num_users)));
    p.cascade.resize(std::size_t(p.num_subcarriers));
    p.chain_gram.resize(std::size_t(p.num_subcarriers));
    for (int m = 0; m < p.num_subcarriers; ++m) {
        const double f = channels.frequency_hz[std::size_t(m)];
        const CMat g = channels.stacked_bs_to_ris(m);
        const CMat &front = frontend.at(m);
        p.cascade[std::size_t(m)] = g * front;
        p.chain_gram[std::size_t(m)] = front.adjoint() * front;
        std::array<CVec, 2> phases = {stacked_phase_matrix(ris, Side::Reflection, f),
                                      stacked_phase_matrix(ris, Side::Transmission, f)};
        for (int k = 0; k < p.num_users; ++k) {
            const CVec &phase = phases[std::size_t(side_index(p.user_side[std::size_t(k)]))];
            p.user_row[std::size_t(m)][std::size_t(k)] =
                channels.stacked_ris_to_user(m, k).cwiseProduct(phase.transpose());
        }
    }
    return p;
}

std::vector<std::vector<CRow>> effective_channels(const FpProblem &p, const RVec &beta_r,
                                                  const RVec &beta_t)
{
    std::vector<std::vector<CRow>> hhat(std::size_t(p.num_subcarriers),
                                        std::vector<CRow>(std::size_t(p.num_users)));
    for (int m = 0; m < p.num_subcarriers; ++m)
        for (int k = 0; k < p.num_users; ++k) {
            const RVec &beta =
                p.user_side[std::size_t(k)] == Side::Reflection ? beta_r : beta_t;
            const CRow weighted = p.user_row[std::size_t(m)][std::size_t(k)].cwiseProduct(
                beta.transpose().cast<cxd>());
            hhat[std::size_t(m)][std::size_t(k)] = weighted * p.cascade[std::size_t(m)];
        }
    return hhat;
}

namespace {

// |hhat_{m,k} d_{m,j}|^2 for all j, plus the noise floor.
double denominator_full(const std::vector<std::vector<CRow>> &hhat,
                        const std::vector<std::vector<CVec>> &d, const RMat &noise_w, int m, int k)
{
    double acc = noise_w(m, k);
    const CRow &h = hhat[std::size_t(m)][std::size_t(k)];
    for (std::size_t j = 0; j < d[std::size_t(m)].size(); ++j)
        acc += std::norm((h * d[std::size_t(m)][j])(0));
    return acc;
}

} // namespace

double sinr(const std::vector<std::vector<CRow>> &hhat, const std::vector<std::vector<CVec>> &d,
            const RMat &noise_w, int m, int k)
{
    if (noise_w(m, k) <= 0.0)
        throw ConfigError("noise power must be > 0");
    const CRow &h = hhat[std::size_t(m)][std::size_t(k)];
    const double signal = std::norm((h * d[std::size_t(m)][std::size_t(k)])(0));
    double interference = 0.0;
    for (int j = 0; j < int(d[std::size_t(m)].size()); ++j)
        if (j != k)
            interference += std::norm((h * d[std::size_t(m)][std::size_t(j)])(0));
    return signal / (interference + noise_w(m, k));
}

double sum_rate(const FpProblem &p, const std::vector<std::vector<CRow>> &hhat,
                const std::vector<std::vector<CVec>> &d)
{
    double rate = 0.0;
    for (int m = 0; m < p.num_subcarriers; ++m)
        for (int k = 0; k < p.num_users; ++k)
            rate += std::log2(1.0 + sinr(hhat, d, p.noise_w, m, k));
    return rate;
}

double ldr_objective(const FpProblem &p, const std::vector<std::vector<CRow>> &hhat,
                     const std::vector<std::vector<CVec>> &d, const RMat &rho)
{
    double obj = 0.0;
    for (int m = 0; m < p.num_subcarriers; ++m)
        for (int k = 0; k < p.num_users; ++k) {
            const double num =
                std::norm((hhat[std::size_t(m)][std::size_t(k)] * d[std::size_t(m)][std::size_t(k)])(0));
            const double fraction = num / denominator_full(hhat, d, p.noise_w, m, k);
            obj += std::log(1.0 + rho(m, k)) - rho(m, k) + (1.0 + rho(m, k)) * fraction;
        }
    return obj;
}

RMat update_rho(const FpProblem &p, const std::vector<std::vector<CRow>> &hhat,
                const std::vector<std::vector<CVec>> &d)
{
    RMat rho(p.num_subcarriers, p.num_users);
    for (int m = 0; m < p.num_subcarriers; ++m)
        for (int k = 0; k < p.num_users; ++k)
            rho(m, k) = sinr(hhat, d, p.noise_w, m, k);
    return rho;
}

CMat update_varpi(const FpProblem &p, const std::vector<std::vector<CRow>> &hhat,
                  const std::vector<std::vector<CVec>> &d, const RMat &rho)
{
    CMat varpi(p.num_subcarriers, p.num_users);
    for (int m = 0; m < p.num_subcarriers; ++m)
        for (int k = 0; k < p.num_users; ++k) {
            const cxd direct =
                (hhat[std::size_t(m)][std::size_t(k)] * d[std::size_t(m)][std::size_t(k)])(0);
            varpi(m, k) = std::sqrt(1.0 + rho(m, k)) * direct /
                          denominator_full(hhat, d, p.noise_w, m, k);
        }
    return varpi;
}

double g1_value(const FpProblem &p, const std::vector<std::vector<CRow>> &hhat,
                const std::vector<std::vector<CVec>> &d, const RMat &rho, const CMat &varpi)
{
    double g = 0.0;
    for (int m = 0; m < p.num_subcarriers; ++m)
        for (int k = 0; k < p.num_users; ++k) {
            const cxd direct =
                (hhat[std::size_t(m)][std::size_t(k)] * d[std::size_t(m)][std::size_t(k)])(0);
            g += 2.0 * std::sqrt(1.0 + rho(m, k)) * std::real(std::conj(varpi(m, k)) * direct);
            g -= std::norm(varpi(m, k)) * denominator_full(hhat, d, p.noise_w, m, k);
        }
    return g;
}

QcqpProblem assemble_qcqp(const FpProblem &p, const std::vector<std::vector<CRow>> &hhat,
                          const RMat &rho, const CMat &varpi)
{
    const int nrf = p.num_chains;
    const int dim = p.num_subcarriers * p.num_users * nrf;
    QcqpProblem q;
    q.quadratic = CMat::Zero(dim, dim);
    q.constraint = CMat::Zero(dim, dim);
    q.linear = CVec::Zero(dim);
    q.p_max = p.p_max;

    for (int m = 0; m < p.num_subcarriers; ++m) {
        CMat quad_block = CMat::Zero(nrf, nrf);
        for (int k = 0; k < p.num_users; ++k) {
            const CRow &h = hhat[std::size_t(m)][std::size_t(k)];
            quad_block.noalias() += std::norm(varpi(m, k)) * (h.adjoint() * h);
        }
        // Hermitian symmetrization absorbs accumulation round-off.
        quad_block = 0.5 * (quad_block + quad_block.adjoint()).eval();
        for (int k = 0; k < p.num_users; ++k) {
            const int off = (m * p.num_users + k) * nrf;
            q.quadratic.block(off, off, nrf, nrf) = quad_block;
            q.constraint.block(off, off, nrf, nrf) = p.chain_gram[std::size_t(m)];
            q.linear.segment(off, nrf) = std::sqrt(1.0 + rho(m, k)) *
                                         hhat[std::size_t(m)][std::size_t(k)].adjoint() *
                                         varpi(m, k);
        }
    }
    return q;
}

std::vector<std::vector<CVec>> unstack_beamformers(const FpProblem &p, const CVec &d)
{
    std::vector<std::vector<CVec>> out(std::size_t(p.num_subcarriers),
                                       std::vector<CVec>(std::size_t(p.num_users)));
    for (int m = 0; m < p.num_subcarriers; ++m)
        for (int k = 0; k < p.num_users; ++k)
            out[std::size_t(m)][std::size_t(k)] =
                d.segment((m * p.num_users + k) * p.num_chains, p.num_chains);
    return out;
}

cxd psi(const FpProblem &p, const RVec &beta_r, const RVec &beta_t,
        const std::vector<std::vector<CVec>> &d, int m, int k, int j)
{
    const RVec &beta = p.user_side[std::size_t(k)] == Side::Reflection ? beta_r : beta_t;
    const CRow weighted =
        p.user_row[std::size_t(m)][std::size_t(k)].cwiseProduct(beta.transpose().cast<cxd>());
    return (weighted * (p.cascade[std::size_t(m)] * d[std::size_t(m)][std::size_t(j)]))(0);
}

CMat update_epsilon(const FpProblem &p, const std::vector<std::vector<CRow>> &hhat,
                    const std::vector<std::vector<CVec>> &d, const RMat &rho)
{
    // Same stationarity form as the beamforming auxiliary; the cascade
    // scalars under the current amplitudes coincide with hhat * d.
    return update_varpi(p, hhat, d, rho);
}

double g4_value(const FpProblem &p, const RVec &beta_r, const RVec &beta_t,
                const std::vector<std::vector<CVec>> &d, const RMat &rho, const CMat &eps)
{
    double g = 0.0;
    for (int m = 0; m < p.num_subcarriers; ++m)
        for (int k = 0; k < p.num_users; ++k) {
            const cxd direct = psi(p, beta_r, beta_t, d, m, k, k);
            g += 2.0 * std::sqrt(1.0 + rho(m, k)) * std::real(std::conj(eps(m, k)) * direct);
            double den = p.noise_w(m, k);
            for (int j = 0; j < p.num_users; ++j)
                den += std::norm(psi(p, beta_r, beta_t, d, m, k, j));
            g -= std::norm(eps(m, k)) * den;
        }
    return g;
}

AmplitudeAssembly assemble_amplitude_problem(const FpProblem &p,
                                             const std::vector<std::vector<CVec>> &d,
                                             const RMat &rho, const CMat &eps)
{
    const int n = p.stacked_elements;
    std::array<CMat, 2> delta = {CMat::Zero(n, n), CMat::Zero(n, n)};
    std::array<CVec, 2> upsilon = {CVec::Zero(n), CVec::Zero(n)};
    double omega = 0.0;

    for (int m = 0; m < p.num_subcarriers; ++m) {
        // w_{m,j} = cascade * d_{m,j}, shared across users.
        std::vector<CVec> w(std::size_t(p.num_users));
        for (int j = 0; j < p.num_users; ++j)
            w[std::size_t(j)] = p.cascade[std::size_t(m)] * d[std::size_t(m)][std::size_t(j)];
        for (int k = 0; k < p.num_users; ++k) {
            const int side = side_index(p.user_side[std::size_t(k)]);
            const CVec row = p.user_row[std::size_t(m)][std::size_t(k)].transpose();
            omega += std::norm(eps(m, k)) * p.noise_w(m, k);
            for (int j = 0; j < p.num_users; ++j) {
                const CVec q = std::conj(eps(m, k)) * row.cwiseProduct(w[std::size_t(j)]);
                delta[std::size_t(side)].noalias() += q * q.adjoint();
                if (j == k)
                    upsilon[std::size_t(side)] += std::sqrt(1.0 + rho(m, k)) * q;
            }
        }
    }

    AmplitudeAssembly out;
    out.problem.delta_r = delta[0].real();
    out.problem.delta_t = delta[1].real();
    out.problem.upsilon_r = upsilon[0].real();
    out.problem.upsilon_t = upsilon[1].real();
    // Symmetrize against round-off.
    out.problem.delta_r = 0.5 * (out.problem.delta_r + out.problem.delta_r.transpose()).eval();
    out.problem.delta_t = 0.5 * (out.problem.delta_t + out.problem.delta_t.transpose()).eval();
    out.omega = omega;
    return out;
}

double transmit_power(const FpProblem &p, const std::vector<std::vector<CVec>> &d)
{
    double power = 0.0;
    for (int m = 0; m < p.num_subcarriers; ++m)
        for (int k = 0; k < p.num_users; ++k) {
            const CVec &dk = d[std::size_t(m)][std::size_t(k)];
            power += (dk.adjoint() * p.chain_gram[std::size_t(m)] * dk)(0).real();
        }
    return power;
}

FpState initialize(const FpProblem &p)
{
    FpState state;
    state.beta_r = RVec::Constant(p.stacked_elements, 1.0 / std::sqrt(2.0));
    state.beta_t = RVec::Constant(p.stacked_elements, 1.0 / std::sqrt(2.0));
    state.rho = RMat::Zero(p.num_subcarriers, p.num_users);
    state.varpi = CMat::Zero(p.num_subcarriers, p.num_users);
    state.eps = CMat::Zero(p.num_subcarriers, p.num_users);

    const auto hhat = effective_channels(p, state.beta_r, state.beta_t);
    const double per_stream = p.p_max / double(p.num_subcarriers * p.num_users);
    state.d.assign(std::size_t(p.num_subcarriers), std::vector<CVec>(std::size_t(p.num_users)));
    for (int m = 0; m < p.num_subcarriers; ++m)
        for (int k = 0; k < p.num_users; ++k) {
            CVec mf = hhat[std::size_t(m)][std::size_t(k)].adjoint();
            const double power =
                (mf.adjoint() * p.chain_gram[std::size_t(m)] * mf)(0).real();
            state.d[std::size_t(m)][std::size_t(k)] =
                power > 0.0 ? CVec(std::sqrt(per_stream / power) * mf) : CVec::Zero(p.num_chains);
        }
    // Exact budget even if some streams came out empty.
    const double total = transmit_power(p, state.d);
    if (total > 0.0) {
        const double scale = std::sqrt(p.p_max / total);
        for (auto &per_m : state.d)
            for (auto &dk : per_m)
                dk *= scale;
    }
    return state;
}

namespace {

double max_energy_violation(const RVec &beta_r, const RVec &beta_t)
{
    double worst = 0.0;
    for (Eigen::Index i = 0; i < beta_r.size(); ++i)
        worst = std::max(worst, beta_r[i] * beta_r[i] + beta_t[i] * beta_t[i] - 1.0);
    return worst;
}

} // namespace

FpState run_algorithm1(const FpProblem &p)
{
    FpState state = initialize(p);
    auto hhat = effective_channels(p, state.beta_r, state.beta_t);

    auto surrogate = [&]() { return ldr_objective(p, hhat, state.d, state.rho); };
    auto record_block = [&](const char *block, int iteration) {
        const double value = surrogate();
        if (!state.block_objectives.empty()) {
            const double prev = state.block_objectives.back();
            if (value < prev - 1e-8 * std::max(1.0, std::abs(prev)))
                throw std::logic_error("surrogate objective decreased at block '" +
                                       std::string(block) + "' of iteration " +
                                       std::to_string(iteration) + ": " + std::to_string(prev) +
                                       " -> " + std::to_string(value));
        }
        state.block_objectives.push_back(value);
        return value;
    };

    double prev_objective = 0.0;
    for (int it = 1; it <= p.knobs.fp_max_iters; ++it) {
        try {
            state.rho = update_rho(p, hhat, state.d);
            record_block("rho", it);

            state.varpi = update_varpi(p, hhat, state.d, state.rho);
            record_block("varpi", it);

            const QcqpProblem qp = assemble_qcqp(p, hhat, state.rho, state.varpi);
            QcqpKnobs qk;
            qk.power_tol = p.knobs.qcqp_power_tol;
            const QcqpResult qr = solve_qcqp(qp, qk);
            state.d = unstack_beamformers(p, qr.d);
            record_block("digital", it);

            state.eps = update_epsilon(p, hhat, state.d, state.rho);
            record_block("epsilon", it);

            const AmplitudeAssembly amp = assemble_amplitude_problem(p, state.d, state.rho, state.eps);
            AdmmKnobs ak;
            ak.penalty = p.knobs.admm_penalty;
            ak.tol = p.knobs.admm_tol;
            ak.max_iters = p.knobs.admm_max_iters;
            const AdmmResult ar =
                solve_amplitudes_admm(amp.problem, ak, &state.beta_r, &state.beta_t);
            if (ar.warning)
                state.warnings.push_back("iteration " + std::to_string(it) +
                                         ": amplitude ADMM stopped at residuals " +
                                         std::to_string(ar.primal_residual) + "/" +
                                         std::to_string(ar.dual_residual));
            state.beta_r = ar.beta_r;
            state.beta_t = ar.beta_t;
            hhat = effective_channels(p, state.beta_r, state.beta_t);
            const double objective = record_block("amplitude", it);

            FpTraceRow row;
            row.iteration = it;
            row.ldr_objective = objective;
            row.sum_rate_bits = sum_rate(p, hhat, state.d);
            row.power_used = transmit_power(p, state.d);
            row.max_energy_violation = max_energy_violation(state.beta_r, state.beta_t);
            state.trace.push_back(row);
            state.iterations = it;

            if (it > 1) {
                const double rel = std::abs(objective - prev_objective) /
                                   std::max(1.0, std::abs(prev_objective));
                if (rel < p.knobs.fp_tol) {
                    state.converged = true;
                    break;
                }
            }
            prev_objective = objective;
        } catch (const SolverError &err) {
            throw SolverError("iteration " + std::to_string(it) + ": " + err.what());
        }
    }
    return state;
}

std::string trace_csv(const FpState &state)
{
    std::ostringstream out;
    out << "iteration,ldr_objective,sum_rate_bits,power_used,max_energy_violation\n";
    char buf[200];
    for (const FpTraceRow &row : state.trace) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g\n", row.iteration,
                      row.ldr_objective, row.sum_rate_bits, row.power_used,
                      row.max_energy_violation);
        out << buf;
    }
    return out.str();
}

} // namespace starbeam
