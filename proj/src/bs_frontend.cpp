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

#include "starbeam/bs_frontend.hpp"

#include "starbeam/channel.hpp"

#include <cmath>

namespace starbeam {

CMat analog_beamformer(const std::vector<double> &serve_theta_rad, int num_antennas,
                       int tds_per_chain, bool identical_segments)
{
    const int num_chains = int(serve_theta_rad.size());
    if (num_antennas % tds_per_chain != 0)
        throw ConfigError("num_bs_antennas must be divisible by num_tds_per_chain");
    const int p = num_antennas / tds_per_chain;
    const double scale = 1.0 / std::sqrt(double(num_antennas));
    CMat analog = CMat::Zero(num_antennas, tds_per_chain * num_chains);
    for (int l = 0; l < num_chains; ++l) {
        const double s = std::sin(serve_theta_rad[std::size_t(l)]);
        for (int kt = 0; kt < tds_per_chain; ++kt)
            for (int i = 0; i < p; ++i) {
                const int row = kt * p + i;
                const int n = identical_segments ? i : row;
                analog(row, l * tds_per_chain + kt) = scale * std::polar(1.0, kPi * double(n) * s);
            }
    }
    return analog;
}

RVec td_delays(double theta_rad, int tds_per_chain, int phase_shifters_per_td, double fc_hz,
               bool nonnegative)
{
    const double period = 1.0 / fc_hz;
    const double b = -double(phase_shifters_per_td) * std::sin(theta_rad) / 2.0;
    RVec z(tds_per_chain);
    for (int kt = 0; kt < tds_per_chain; ++kt)
        z[kt] = b * period * double(kt);
    if (nonnegative && tds_per_chain > 0) {
        const double offset = -z.minCoeff();
        if (offset > 0.0)
            z.array() += offset;
    }
    return z;
}

CMat td_phase_matrix(const std::vector<RVec> &delays, double f_hz)
{
    const int num_chains = int(delays.size());
    const int kt = num_chains ? int(delays.front().size()) : 0;
    CMat td = CMat::Zero(kt * num_chains, num_chains);
    for (int l = 0; l < num_chains; ++l)
        for (int i = 0; i < kt; ++i)
            td(l * kt + i, l) = std::polar(1.0, -2.0 * kPi * f_hz * delays[std::size_t(l)][i]);
    return td;
}

CMat combined_frontend(const CMat &analog, const CMat &td_matrix)
{
    if (analog.cols() != td_matrix.rows())
        throw std::logic_error("frontend dimension mismatch");
    return analog * td_matrix;
}

BsFrontend build_bs_frontend(const ScenarioConfig &cfg, const Geometry &geo,
                             const SubcarrierGrid &grid)
{
    BsFrontend fe;
    fe.num_antennas = cfg.num_bs_antennas;
    fe.num_chains = cfg.num_rf_chains;
    fe.tds_per_chain = cfg.num_tds_per_chain;
    fe.frequency_hz = grid.frequency_hz;

    const int chains_per_ris = cfg.num_rf_chains / cfg.num_ris;
    std::vector<double> serve(std::size_t(cfg.num_rf_chains));
    for (int l = 0; l < cfg.num_rf_chains; ++l)
        serve[std::size_t(l)] = geo.bs_to_ris[std::size_t(l / chains_per_ris)].aod_bs_rad;

    fe.analog = analog_beamformer(serve, cfg.num_bs_antennas, cfg.num_tds_per_chain, cfg.bs_td);
    fe.delays.resize(std::size_t(cfg.num_rf_chains));
    for (int l = 0; l < cfg.num_rf_chains; ++l) {
        if (cfg.bs_td)
            fe.delays[std::size_t(l)] =
                td_delays(serve[std::size_t(l)], cfg.num_tds_per_chain,
                          cfg.phase_shifters_per_td(), cfg.fc_hz, cfg.nonnegative_delays);
        else
            fe.delays[std::size_t(l)] = RVec::Zero(cfg.num_tds_per_chain);
    }

    fe.per_subcarrier.resize(std::size_t(grid.size()));
    for (int m = 0; m < grid.size(); ++m)
        fe.per_subcarrier[std::size_t(m)] =
            combined_frontend(fe.analog, td_phase_matrix(fe.delays, grid.frequency_hz[std::size_t(m)]));
    return fe;
}

double bs_combined_gain(const BsFrontend &frontend, int m, int chain, double theta_rad,
                        double fc_hz)
{
    const CVec a = bs_steering_vector(frontend.frequency_hz[std::size_t(m)], fc_hz, theta_rad,
                                      frontend.num_antennas);
    return std::abs((a.adjoint() * frontend.at(m).col(chain))(0));
}

} // namespace starbeam
