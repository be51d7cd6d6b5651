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

#include "starbeam/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace starbeam {

std::string to_string(RisStructure s)
{
    switch (s) {
    case RisStructure::Conventional:
        return "conventional";
    case RisStructure::FullyConnected:
        return "fully_connected";
    case RisStructure::SubConnected:
        return "sub_connected";
    }
    return "?";
}

std::string to_string(Side s)
{
    return s == Side::Reflection ? "R" : "T";
}

void ScenarioConfig::validate() const
{
    if (num_subcarriers < 1)
        throw ConfigError("num_subcarriers must be >= 1");
    if (bandwidth_hz < 0.0)
        throw ConfigError("bandwidth_hz must be >= 0");
    if (fc_hz <= 0.0)
        throw ConfigError("fc_hz must be > 0");
    if (max_power_w <= 0.0)
        throw ConfigError("max_power_w must be > 0");
    if (num_bs_antennas < 1 || num_tds_per_chain < 1)
        throw ConfigError("antenna and TD counts must be >= 1");
    if (num_bs_antennas % num_tds_per_chain != 0)
        throw ConfigError("num_bs_antennas (" + std::to_string(num_bs_antennas) +
                          ") must be divisible by num_tds_per_chain (" +
                          std::to_string(num_tds_per_chain) + ")");
    if (ris_rows < 1 || ris_cols < 1 || sub_rows < 1 || sub_cols < 1)
        throw ConfigError("RIS dimensions must be >= 1");
    if (ris_rows % sub_rows != 0)
        throw ConfigError("ris_rows must be divisible by sub_rows");
    if (ris_cols % sub_cols != 0)
        throw ConfigError("ris_cols must be divisible by sub_cols");
    if (num_ris < 1)
        throw ConfigError("num_star_ris must be >= 1");
    if (num_users != 2 * num_ris)
        throw ConfigError("num_users (" + std::to_string(num_users) +
                          ") must equal 2 * num_star_ris (each STAR-RIS serves one "
                          "reflection and one transmission user)");
    if (num_rf_chains < 1)
        throw ConfigError("num_rf_chains must be >= 1");
    if (num_rf_chains % num_ris != 0)
        throw ConfigError("num_rf_chains must be divisible by num_star_ris");
    if (csi_delta < 0.0)
        throw ConfigError("csi_delta must be >= 0");
    if (absorption_per_m < 0.0)
        throw ConfigError("absorption_per_m must be >= 0");
    if (!noise_dbm_per_user.empty() && int(noise_dbm_per_user.size()) != num_users)
        throw ConfigError("noise_dbm_per_user must list one value per user");
    if (!user_sides.empty()) {
        if (int(user_sides.size()) != num_users)
            throw ConfigError("user_sides must list one side per user");
        const auto refl = std::count(user_sides.begin(), user_sides.end(), Side::Reflection);
        if (refl != num_ris)
            throw ConfigError("user side labels must split evenly: R reflection and R "
                              "transmission users");
    }
    {
        const std::size_t r = std::size_t(num_ris), rk = std::size_t(num_ris) * num_users;
        if (!bs_ris_delay_s.empty() && bs_ris_delay_s.size() != r)
            throw ConfigError("bs_ris_delay_s needs R values");
        if (!ris_user_delay_s.empty() && ris_user_delay_s.size() != rk)
            throw ConfigError("ris_user_delay_s needs R*K values");
    }
    if (use_explicit_angles) {
        const std::size_t r = std::size_t(num_ris), rk = std::size_t(num_ris) * num_users;
        if (bs_ris_aod_rad.size() != r || bs_ris_u_rad.size() != r || bs_ris_v_rad.size() != r ||
            bs_ris_distance_m.size() != r)
            throw ConfigError("explicit-angle geometry needs R values per bs_ris_* key");
        if (ris_user_u_rad.size() != rk || ris_user_v_rad.size() != rk ||
            ris_user_distance_m.size() != rk)
            throw ConfigError("explicit-angle geometry needs R*K values per ris_user_* key");
        for (double d : bs_ris_distance_m)
            if (d <= 0.0)
                throw ConfigError("bs_ris_distance_m entries must be > 0");
        for (double d : ris_user_distance_m)
            if (d <= 0.0)
                throw ConfigError("ris_user_distance_m entries must be > 0");
        if (user_sides.empty())
            throw ConfigError("explicit-angle geometry requires user_sides");
    } else {
        if (!ris_positions.empty() && int(ris_positions.size()) != num_ris)
            throw ConfigError("ris_positions must list one position per STAR-RIS");
        if (!user_positions.empty() && int(user_positions.size()) != num_users)
            throw ConfigError("user_positions must list one position per user");
        if (!user_positions.empty() && user_sides.empty())
            throw ConfigError("user_positions requires user_sides");
    }
    if (solver.fp_tol <= 0.0 || solver.admm_tol <= 0.0 || solver.qcqp_power_tol <= 0.0)
        throw ConfigError("solver tolerances must be > 0");
    if (solver.fp_max_iters < 1 || solver.admm_max_iters < 1)
        throw ConfigError("solver iteration caps must be >= 1");
    if (solver.admm_penalty <= 0.0)
        throw ConfigError("admm_penalty must be > 0");
}

SubcarrierGrid subcarrier_frequencies(double fc_hz, double bandwidth_hz, int num_subcarriers)
{
    if (num_subcarriers < 1)
        throw ConfigError("subcarrier count must be >= 1");
    if (bandwidth_hz < 0.0)
        throw ConfigError("bandwidth must be >= 0");
    SubcarrierGrid grid;
    grid.frequency_hz.resize(std::size_t(num_subcarriers));
    grid.relative.resize(std::size_t(num_subcarriers));
    const double half_span = (double(num_subcarriers) - 1.0) / 2.0;
    for (int m = 1; m <= num_subcarriers; ++m) {
        const double f = fc_hz + bandwidth_hz / double(num_subcarriers) * (double(m) - 1.0 - half_span);
        grid.frequency_hz[std::size_t(m - 1)] = f;
        grid.relative[std::size_t(m - 1)] = f / fc_hz;
    }
    return grid;
}

double noise_power_watts(double noise_dbm)
{
    return std::pow(10.0, (noise_dbm - 30.0) / 10.0);
}

double Geometry::boresight_angle(double u_rad, double v_rad)
{
    // Boresight is the outward surface normal, (u, v) = (0, pi/2).
    const double c = std::clamp(std::sin(v_rad) * std::cos(u_rad), -1.0, 1.0);
    return std::acos(c);
}

namespace {

struct LinkAngles {
    double u, v, dist;
};

// Local frame of a surface facing the y axis: u is the azimuth measured from
// the outward normal inside the x-y plane, v the polar angle from z. |dy| is
// used so that both faces of a STAR-RIS see their own half-space with
// u in [-pi/2, pi/2].
LinkAngles angles_from_delta(const Vec3 &from, const Vec3 &to)
{
    const double dx = to.x - from.x;
    const double dy = to.y - from.y;
    const double dz = to.z - from.z;
    const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
    if (dist <= 0.0)
        throw ConfigError("coincident positions in geometry");
    LinkAngles a;
    a.dist = dist;
    a.u = std::atan2(dx, std::abs(dy));
    a.v = std::acos(std::clamp(dz / dist, -1.0, 1.0));
    return a;
}

std::vector<Vec3> default_ris_positions(int num_ris)
{
    std::vector<Vec3> pos(std::size_t(num_ris), Vec3{});
    for (int r = 0; r < num_ris; ++r) {
        const double x = num_ris == 1
                             ? 0.0
                             : -2.0 + 4.0 * double(r) / double(num_ris - 1);
        pos[std::size_t(r)] = Vec3{x, 10.0, 0.0};
    }
    return pos;
}

// Users sit on half-circles of radius 1 m around (0, 10, 0): reflection
// users on the BS side (y < 10), transmission users behind the surface.
std::vector<Vec3> default_user_positions(int num_users, const std::vector<Side> &sides,
                                         Rng *rng)
{
    const int per_side = num_users / 2;
    std::vector<Vec3> pos(std::size_t(num_users), Vec3{});
    std::array<int, 2> placed = {0, 0};
    for (int k = 0; k < num_users; ++k) {
        const int side = side_index(sides[std::size_t(k)]);
        const int j = placed[std::size_t(side)]++;
        double az = per_side == 1 ? 0.0
                                  : -kPi / 3.0 + 2.0 * kPi / 3.0 * double(j) / double(per_side - 1);
        if (rng != nullptr)
            az = rng->uniform(-5.0 * kPi / 12.0, 5.0 * kPi / 12.0);
        const double ysign = side == 0 ? -1.0 : 1.0;
        pos[std::size_t(k)] = Vec3{std::sin(az), 10.0 + ysign * std::cos(az), 0.0};
    }
    return pos;
}

} // namespace

Geometry build_geometry(const ScenarioConfig &cfg, Rng *rng)
{
    cfg.validate();
    Geometry geo;
    const int R = cfg.num_ris, K = cfg.num_users;

    if (cfg.use_explicit_angles) {
        geo.user_sides = cfg.user_sides;
        geo.bs_to_ris.resize(std::size_t(R));
        geo.ris_to_user.assign(std::size_t(R), std::vector<UserLink>(std::size_t(K)));
        for (int r = 0; r < R; ++r) {
            RisLink &link = geo.bs_to_ris[std::size_t(r)];
            link.aod_bs_rad = cfg.bs_ris_aod_rad[std::size_t(r)];
            link.u_rad = cfg.bs_ris_u_rad[std::size_t(r)];
            link.v_rad = cfg.bs_ris_v_rad[std::size_t(r)];
            link.distance_m = cfg.bs_ris_distance_m[std::size_t(r)];
            link.delay_s = cfg.bs_ris_delay_s.empty() ? link.distance_m / kSpeedOfLight
                                                      : cfg.bs_ris_delay_s[std::size_t(r)];
            for (int k = 0; k < K; ++k) {
                UserLink &ul = geo.ris_to_user[std::size_t(r)][std::size_t(k)];
                const std::size_t idx = std::size_t(r) * std::size_t(K) + std::size_t(k);
                ul.u_rad = cfg.ris_user_u_rad[idx];
                ul.v_rad = cfg.ris_user_v_rad[idx];
                ul.distance_m = cfg.ris_user_distance_m[idx];
                ul.delay_s = cfg.ris_user_delay_s.empty() ? ul.distance_m / kSpeedOfLight
                                                          : cfg.ris_user_delay_s[idx];
            }
        }
        return geo;
    }

    geo.user_sides = cfg.user_sides;
    if (geo.user_sides.empty()) {
        // Default labeling: first half reflection, second half transmission.
        geo.user_sides.resize(std::size_t(K));
        for (int k = 0; k < K; ++k)
            geo.user_sides[std::size_t(k)] = k < K / 2 ? Side::Reflection : Side::Transmission;
    }

    std::vector<Vec3> ris_pos = cfg.ris_positions.empty() ? default_ris_positions(R)
                                                          : cfg.ris_positions;
    std::vector<Vec3> user_pos = cfg.user_positions;
    if (user_pos.empty())
        user_pos = default_user_positions(K, geo.user_sides, cfg.randomize_users ? rng : nullptr);

    geo.bs_to_ris.resize(std::size_t(R));
    geo.ris_to_user.assign(std::size_t(R), std::vector<UserLink>(std::size_t(K)));
    for (int r = 0; r < R; ++r) {
        const Vec3 &rp = ris_pos[std::size_t(r)];
        RisLink &link = geo.bs_to_ris[std::size_t(r)];
        const LinkAngles to_ris = angles_from_delta(cfg.bs_position, rp);
        // BS ULA lies along x with boresight +y; sin(aod) is the direction
        // cosine along the array axis.
        const double dx = rp.x - cfg.bs_position.x;
        link.aod_bs_rad = std::asin(std::clamp(dx / to_ris.dist, -1.0, 1.0));
        const LinkAngles at_ris = angles_from_delta(rp, cfg.bs_position);
        link.u_rad = at_ris.u;
        link.v_rad = at_ris.v;
        link.distance_m = to_ris.dist;
        link.delay_s = cfg.bs_ris_delay_s.empty() ? to_ris.dist / kSpeedOfLight
                                                  : cfg.bs_ris_delay_s[std::size_t(r)];
        for (int k = 0; k < K; ++k) {
            const LinkAngles a = angles_from_delta(rp, user_pos[std::size_t(k)]);
            UserLink &ul = geo.ris_to_user[std::size_t(r)][std::size_t(k)];
            ul.u_rad = a.u;
            ul.v_rad = a.v;
            ul.distance_m = a.dist;
            ul.delay_s = cfg.ris_user_delay_s.empty()
                             ? a.dist / kSpeedOfLight
                             : cfg.ris_user_delay_s[std::size_t(r) * std::size_t(K) +
                                                    std::size_t(k)];
        }
    }
    return geo;
}

Allocation allocate_users(const Geometry &geo, int num_ris, int num_users)
{
    if (num_users != 2 * num_ris)
        throw ConfigError("allocation requires K = 2R");
    if (geo.num_ris() != num_ris || geo.num_users() != num_users)
        throw ConfigError("geometry size mismatch in allocate_users");
    std::array<int, 2> counts = {0, 0};
    for (Side s : geo.user_sides)
        ++counts[std::size_t(side_index(s))];
    if (counts[0] != num_ris || counts[1] != num_ris)
        throw ConfigError("need exactly R reflection-side and R transmission-side users");

    Allocation alloc;
    alloc.reflection_user.assign(std::size_t(num_ris), -1);
    alloc.transmission_user.assign(std::size_t(num_ris), -1);
    std::vector<bool> taken(std::size_t(num_users), false);
    for (int r = 0; r < num_ris; ++r) {
        for (Side side : kBothSides) {
            int best = -1;
            double best_angle = 0.0;
            for (int k = 0; k < num_users; ++k) {
                if (taken[std::size_t(k)] || geo.user_sides[std::size_t(k)] != side)
                    continue;
                const UserLink &ul = geo.ris_to_user[std::size_t(r)][std::size_t(k)];
                const double a = Geometry::boresight_angle(ul.u_rad, ul.v_rad);
                if (best < 0 || a < best_angle) { // strict: lowest index wins ties
                    best = k;
                    best_angle = a;
                }
            }
            taken[std::size_t(best)] = true;
            if (side == Side::Reflection)
                alloc.reflection_user[std::size_t(r)] = best;
            else
                alloc.transmission_user[std::size_t(r)] = best;
        }
    }
    return alloc;
}

CVec apply_csi_error(const CVec &h, double delta, Rng &rng)
{
    if (delta < 0.0)
        throw ConfigError("csi_delta must be >= 0");
    CVec out = h;
    if (delta == 0.0)
        return out;
    for (Eigen::Index n = 0; n < h.size(); ++n) {
        const double sigma = std::sqrt(delta / 2.0) * std::abs(h[n]);
        out[n] += sigma * rng.complex_normal();
    }
    return out;
}

CMat apply_csi_error(const CMat &h, double delta, Rng &rng)
{
    if (delta < 0.0)
        throw ConfigError("csi_delta must be >= 0");
    CMat out = h;
    if (delta == 0.0)
        return out;
    // Row-major traversal keeps the draw order independent of storage.
    for (Eigen::Index i = 0; i < h.rows(); ++i)
        for (Eigen::Index j = 0; j < h.cols(); ++j) {
            const double sigma = std::sqrt(delta / 2.0) * std::abs(h(i, j));
            out(i, j) += sigma * rng.complex_normal();
        }
    return out;
}

// --- Config file handling ---------------------------------------------------

std::vector<ConfigLine> parse_key_value_text(const std::string &text)
{
    std::vector<ConfigLine> lines;
    std::istringstream in(text);
    std::string raw;
    std::string section = "scenario";
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string s = raw;
        if (const auto pos = s.find('#'); pos != std::string::npos)
            s.erase(pos);
        auto trim = [](std::string &t) {
            const auto b = t.find_first_not_of(" \t\r");
            const auto e = t.find_last_not_of(" \t\r");
            t = b == std::string::npos ? std::string() : t.substr(b, e - b + 1);
        };
        trim(s);
        if (s.empty())
            continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            section = s.substr(1, s.size() - 2);
            trim(section);
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        ConfigLine cl;
        cl.section = section;
        cl.key = s.substr(0, eq);
        cl.value = s.substr(eq + 1);
        trim(cl.key);
        trim(cl.value);
        cl.line = lineno;
        if (cl.key.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        lines.push_back(cl);
    }
    return lines;
}

namespace {

double parse_double(const ConfigLine &cl)
{
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(cl.value, &used);
    } catch (const std::exception &) {
        throw ConfigError("line " + std::to_string(cl.line) + ": '" + cl.value +
                          "' is not a number");
    }
    if (used != cl.value.size())
        throw ConfigError("line " + std::to_string(cl.line) + ": trailing characters in '" +
                          cl.value + "'");
    return v;
}

long long parse_int(const ConfigLine &cl)
{
    const double v = parse_double(cl);
    const long long i = (long long)std::llround(v);
    if (double(i) != v)
        throw ConfigError("line " + std::to_string(cl.line) + ": '" + cl.value +
                          "' is not an integer");
    return i;
}

bool parse_bool(const ConfigLine &cl)
{
    if (cl.value == "true" || cl.value == "on" || cl.value == "1")
        return true;
    if (cl.value == "false" || cl.value == "off" || cl.value == "0")
        return false;
    throw ConfigError("line " + std::to_string(cl.line) + ": '" + cl.value +
                      "' is not a boolean");
}

std::vector<double> parse_double_list(const ConfigLine &cl)
{
    std::vector<double> out;
    std::istringstream in(cl.value);
    std::string tok;
    while (in >> tok) {
        ConfigLine one = cl;
        one.value = tok;
        out.push_back(parse_double(one));
    }
    if (out.empty())
        throw ConfigError("line " + std::to_string(cl.line) + ": empty value list");
    return out;
}

// "x y z ; x y z ; ..."
std::vector<Vec3> parse_vec3_list(const ConfigLine &cl)
{
    std::vector<Vec3> out;
    std::string chunk;
    std::istringstream groups(cl.value);
    while (std::getline(groups, chunk, ';')) {
        std::istringstream in(chunk);
        Vec3 p;
        if (!(in >> p.x >> p.y >> p.z))
            throw ConfigError("line " + std::to_string(cl.line) +
                              ": position needs three coordinates");
        std::string rest;
        if (in >> rest)
            throw ConfigError("line " + std::to_string(cl.line) + ": trailing characters");
        out.push_back(p);
    }
    return out;
}

std::vector<Side> parse_side_list(const ConfigLine &cl)
{
    std::vector<Side> out;
    std::istringstream in(cl.value);
    std::string tok;
    while (in >> tok) {
        if (tok == "R" || tok == "r" || tok == "reflection")
            out.push_back(Side::Reflection);
        else if (tok == "T" || tok == "t" || tok == "transmission")
            out.push_back(Side::Transmission);
        else
            throw ConfigError("line " + std::to_string(cl.line) + ": unknown side '" + tok + "'");
    }
    return out;
}

RisStructure parse_structure(const ConfigLine &cl)
{
    if (cl.value == "conventional")
        return RisStructure::Conventional;
    if (cl.value == "fully_connected")
        return RisStructure::FullyConnected;
    if (cl.value == "sub_connected")
        return RisStructure::SubConnected;
    throw ConfigError("line " + std::to_string(cl.line) + ": unknown structure '" + cl.value +
                      "' (conventional | fully_connected | sub_connected)");
}

void apply_line(ScenarioConfig &cfg, const ConfigLine &cl)
{
    const std::string &k = cl.key;
    if (k == "fc_hz")
        cfg.fc_hz = parse_double(cl);
    else if (k == "bandwidth_hz")
        cfg.bandwidth_hz = parse_double(cl);
    else if (k == "num_subcarriers")
        cfg.num_subcarriers = int(parse_int(cl));
    else if (k == "num_bs_antennas")
        cfg.num_bs_antennas = int(parse_int(cl));
    else if (k == "num_rf_chains")
        cfg.num_rf_chains = int(parse_int(cl));
    else if (k == "num_tds_per_chain")
        cfg.num_tds_per_chain = int(parse_int(cl));
    else if (k == "num_star_ris")
        cfg.num_ris = int(parse_int(cl));
    else if (k == "ris_rows")
        cfg.ris_rows = int(parse_int(cl));
    else if (k == "ris_cols")
        cfg.ris_cols = int(parse_int(cl));
    else if (k == "sub_rows")
        cfg.sub_rows = int(parse_int(cl));
    else if (k == "sub_cols")
        cfg.sub_cols = int(parse_int(cl));
    else if (k == "num_users")
        cfg.num_users = int(parse_int(cl));
    else if (k == "max_power_w")
        cfg.max_power_w = parse_double(cl);
    else if (k == "noise_dbm")
        cfg.noise_dbm = parse_double(cl);
    else if (k == "noise_dbm_per_user")
        cfg.noise_dbm_per_user = parse_double_list(cl);
    else if (k == "absorption_per_m")
        cfg.absorption_per_m = parse_double(cl);
    else if (k == "csi_delta")
        cfg.csi_delta = parse_double(cl);
    else if (k == "structure")
        cfg.structure = parse_structure(cl);
    else if (k == "bs_td")
        cfg.bs_td = parse_bool(cl);
    else if (k == "ris_td")
        cfg.ris_td = parse_bool(cl);
    else if (k == "nonnegative_delays")
        cfg.nonnegative_delays = parse_bool(cl);
    else if (k == "seed")
        cfg.seed = std::uint64_t(parse_int(cl));
    else if (k == "randomize_users")
        cfg.randomize_users = parse_bool(cl);
    else if (k == "bs_position") {
        const auto v = parse_vec3_list(cl);
        if (v.size() != 1)
            throw ConfigError("line " + std::to_string(cl.line) + ": bs_position is one point");
        cfg.bs_position = v[0];
    } else if (k == "ris_positions")
        cfg.ris_positions = parse_vec3_list(cl);
    else if (k == "user_positions")
        cfg.user_positions = parse_vec3_list(cl);
    else if (k == "user_sides")
        cfg.user_sides = parse_side_list(cl);
    else if (k == "use_explicit_angles")
        cfg.use_explicit_angles = parse_bool(cl);
    else if (k == "bs_ris_aod_rad")
        cfg.bs_ris_aod_rad = parse_double_list(cl);
    else if (k == "bs_ris_u_rad")
        cfg.bs_ris_u_rad = parse_double_list(cl);
    else if (k == "bs_ris_v_rad")
        cfg.bs_ris_v_rad = parse_double_list(cl);
    else if (k == "bs_ris_distance_m")
        cfg.bs_ris_distance_m = parse_double_list(cl);
    else if (k == "bs_ris_delay_s")
        cfg.bs_ris_delay_s = parse_double_list(cl);
    else if (k == "ris_user_u_rad")
        cfg.ris_user_u_rad = parse_double_list(cl);
    else if (k == "ris_user_v_rad")
        cfg.ris_user_v_rad = parse_double_list(cl);
    else if (k == "ris_user_distance_m")
        cfg.ris_user_distance_m = parse_double_list(cl);
    else if (k == "ris_user_delay_s")
        cfg.ris_user_delay_s = parse_double_list(cl);
    else if (k == "fp_tol")
        cfg.solver.fp_tol = parse_double(cl);
    else if (k == "fp_max_iters")
        cfg.solver.fp_max_iters = int(parse_int(cl));
    else if (k == "qcqp_power_tol")
        cfg.solver.qcqp_power_tol = parse_double(cl);
    else if (k == "admm_penalty")
        cfg.solver.admm_penalty = parse_double(cl);
    else if (k == "admm_tol")
        cfg.solver.admm_tol = parse_double(cl);
    else if (k == "admm_max_iters")
        cfg.solver.admm_max_iters = int(parse_int(cl));
    else
        throw ConfigError("line " + std::to_string(cl.line) + ": unknown key '" + k + "'");
}

const std::set<std::string> kKnownSections = {"scenario", "geometry", "solver", "experiment"};

} // namespace

ScenarioConfig config_from_text(const std::string &text,
                                std::map<std::string, std::string> *experiment_keys)
{
    ScenarioConfig cfg;
    for (const ConfigLine &cl : parse_key_value_text(text)) {
        if (!kKnownSections.count(cl.section))
            throw ConfigError("line " + std::to_string(cl.line) + ": unknown section '" +
                              cl.section + "'");
        if (cl.section == "experiment") {
            if (experiment_keys == nullptr)
                throw ConfigError("line " + std::to_string(cl.line) +
                                  ": experiment keys not allowed here");
            (*experiment_keys)[cl.key] = cl.value;
            continue;
        }
        apply_line(cfg, cl);
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::string &path,
                           std::map<std::string, std::string> *experiment_keys)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_text(ss.str(), experiment_keys);
}

void apply_override(ScenarioConfig &cfg, const std::string &key, const std::string &value)
{
    ConfigLine cl;
    cl.section = "override";
    cl.key = key;
    cl.value = value;
    cl.line = 0;
    apply_line(cfg, cl);
}

namespace {

std::string fmt_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string resolved_text(const ScenarioConfig &cfg)
{
    std::ostringstream out;
    out << "[scenario]\n";
    out << "fc_hz = " << fmt_double(cfg.fc_hz) << "\n";
    out << "bandwidth_hz = " << fmt_double(cfg.bandwidth_hz) << "\n";
    out << "num_subcarriers = " << cfg.num_subcarriers << "\n";
    out << "num_bs_antennas = " << cfg.num_bs_antennas << "\n";
    out << "num_rf_chains = " << cfg.num_rf_chains << "\n";
    out << "num_tds_per_chain = " << cfg.num_tds_per_chain << "\n";
    out << "num_star_ris = " << cfg.num_ris << "\n";
    out << "ris_rows = " << cfg.ris_rows << "\n";
    out << "ris_cols = " << cfg.ris_cols << "\n";
    out << "sub_rows = " << cfg.sub_rows << "\n";
    out << "sub_cols = " << cfg.sub_cols << "\n";
    out << "num_users = " << cfg.num_users << "\n";
    out << "max_power_w = " << fmt_double(cfg.max_power_w) << "\n";
    out << "noise_dbm = " << fmt_double(cfg.noise_dbm) << "\n";
    out << "absorption_per_m = " << fmt_double(cfg.absorption_per_m) << "\n";
    out << "csi_delta = " << fmt_double(cfg.csi_delta) << "\n";
    out << "structure = " << to_string(cfg.structure) << "\n";
    out << "bs_td = " << (cfg.bs_td ? "true" : "false") << "\n";
    out << "ris_td = " << (cfg.ris_td ? "true" : "false") << "\n";
    out << "nonnegative_delays = " << (cfg.nonnegative_delays ? "true" : "false") << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "randomize_users = " << (cfg.randomize_users ? "true" : "false") << "\n";
    out << "[geometry]\n";
    out << "bs_position = " << fmt_double(cfg.bs_position.x) << " " << fmt_double(cfg.bs_position.y)
        << " " << fmt_double(cfg.bs_position.z) << "\n";
    auto dump_vec3 = [&out](const char *key, const std::vector<Vec3> &v) {
        if (v.empty())
            return;
        out << key << " =";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i)
                out << " ;";
            out << " " << fmt_double(v[i].x) << " " << fmt_double(v[i].y) << " "
                << fmt_double(v[i].z);
        }
        out << "\n";
    };
    dump_vec3("ris_positions", cfg.ris_positions);
    dump_vec3("user_positions", cfg.user_positions);
    if (!cfg.user_sides.empty()) {
        out << "user_sides =";
        for (Side s : cfg.user_sides)
            out << " " << to_string(s);
        out << "\n";
    }
    auto dump_list = [&out](const char *key, const std::vector<double> &v) {
        if (v.empty())
            return;
        out << key << " =";
        for (double x : v)
            out << " " << fmt_double(x);
        out << "\n";
    };
    if (cfg.use_explicit_angles) {
        out << "use_explicit_angles = true\n";
        dump_list("bs_ris_aod_rad", cfg.bs_ris_aod_rad);
        dump_list("bs_ris_u_rad", cfg.bs_ris_u_rad);
        dump_list("bs_ris_v_rad", cfg.bs_ris_v_rad);
        dump_list("bs_ris_distance_m", cfg.bs_ris_distance_m);
        dump_list("ris_user_u_rad", cfg.ris_user_u_rad);
        dump_list("ris_user_v_rad", cfg.ris_user_v_rad);
        dump_list("ris_user_distance_m", cfg.ris_user_distance_m);
    }
    dump_list("bs_ris_delay_s", cfg.bs_ris_delay_s);
    dump_list("ris_user_delay_s", cfg.ris_user_delay_s);
    dump_list("noise_dbm_per_user", cfg.noise_dbm_per_user);
    out << "[solver]\n";
    out << "fp_tol = " << fmt_double(cfg.solver.fp_tol) << "\n";
    out << "fp_max_iters = " << cfg.solver.fp_max_iters << "\n";
    out << "qcqp_power_tol = " << fmt_double(cfg.solver.qcqp_power_tol) << "\n";
    out << "admm_penalty = " << fmt_double(cfg.solver.admm_penalty) << "\n";
    out << "admm_tol = " << fmt_double(cfg.solver.admm_tol) << "\n";
    out << "admm_max_iters = " << cfg.solver.admm_max_iters << "\n";
    return out.str();
}

} // namespace starbeam
