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

#include "starbeam/experiments.hpp"

#include "starbeam/beam_gain.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace starbeam {

std::string to_string(Scheme s)
{
    switch (s) {
    case Scheme::FullyConnected:
        return "fully";
    case Scheme::SubConnected:
        return "sub";
    case Scheme::Conventional:
        return "conventional";
    case Scheme::NoTd:
        return "no_td";
    }
    return "?";
}

Scheme scheme_from_string(const std::string &name)
{
    if (name == "fully")
        return Scheme::FullyConnected;
    if (name == "sub")
        return Scheme::SubConnected;
    if (name == "conventional")
        return Scheme::Conventional;
    if (name == "no_td")
        return Scheme::NoTd;
    throw ConfigError("unknown scheme '" + name + "' (fully | sub | conventional | no_td)");
}

ScenarioConfig with_scheme(ScenarioConfig cfg, Scheme scheme)
{
    switch (scheme) {
    case Scheme::FullyConnected:
        cfg.structure = RisStructure::FullyConnected;
        cfg.bs_td = true;
        cfg.ris_td = true;
        break;
    case Scheme::SubConnected:
        cfg.structure = RisStructure::SubConnected;
        cfg.bs_td = true;
        cfg.ris_td = true;
        break;
    case Scheme::Conventional:
        cfg.structure = RisStructure::Conventional;
        cfg.bs_td = true;
        break;
    case Scheme::NoTd:
        cfg.structure = RisStructure::Conventional;
        cfg.bs_td = false;
        cfg.ris_td = false;
        break;
    }
    return cfg;
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream)
{
    std::uint64_t s = base ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    return detail::splitmix64(s);
}

SystemResult run_system(const ScenarioConfig &cfg, std::uint64_t seed, std::uint64_t csi_stream)
{
    cfg.validate();
    Rng rng(seed);
    const Geometry geo = build_geometry(cfg, &rng);
    const Allocation alloc = allocate_users(geo, cfg.num_ris, cfg.num_users);
    const SubcarrierGrid grid =
        subcarrier_frequencies(cfg.fc_hz, cfg.bandwidth_hz, cfg.num_subcarriers);
    const ChannelSet channels = build_channel_set(cfg, geo, grid);
    const BsFrontend frontend = build_bs_frontend(cfg, geo, grid);
    const RisState ris = design_ris_state(cfg, geo, alloc);

    SystemResult result;
    if (cfg.csi_delta > 0.0) {
        Rng csi_rng = rng.split(0x5a5a5a5aULL + csi_stream);
        const ChannelSet estimated = apply_csi_error(channels, cfg.csi_delta, csi_rng);
        const RisState deployed = deploy_from_estimate(cfg, alloc, ris, channels, estimated);
        // The transmitter only has the estimate: phases, delays, digital
        // beams and amplitudes all come from it; rates are evaluated on the
        // true channels through the deployed surfaces.
        const FpProblem problem_est = make_fp_problem(cfg, geo, estimated, frontend, deployed);
        result.state = run_algorithm1(problem_est);
        const FpProblem problem_true = make_fp_problem(cfg, geo, channels, frontend, deployed);
        const auto hhat = effective_channels(problem_true, result.state.beta_r, result.state.beta_t);
        result.sum_rate_bits = sum_rate(problem_true, hhat, result.state.d);
    } else {
        const FpProblem problem = make_fp_problem(cfg, geo, channels, frontend, ris);
        result.state = run_algorithm1(problem);
        result.sum_rate_bits = result.state.trace.empty() ? 0.0
                                                          : result.state.trace.back().sum_rate_bits;
    }
    result.iterations = result.state.iterations;
    result.converged = result.state.converged;
    return result;
}

RisState deploy_from_estimate(const ScenarioConfig &cfg, const Allocation &alloc,
                              const RisState &designed, const ChannelSet &channels,
                              const ChannelSet &estimated)
{
    RisState deployed = designed;
    // Datum subcarrier: the one closest to the design frequency.
    int mc = 0;
    double best = std::abs(channels.frequency_hz.front() - cfg.fc_hz);
    for (int m = 1; m < channels.num_subcarriers; ++m) {
        const double dist = std::abs(channels.frequency_hz[std::size_t(m)] - cfg.fc_hz);
        if (dist < best) {
            best = dist;
            mc = m;
        }
    }
    for (int r = 0; r < cfg.num_ris; ++r)
        for (Side s : kBothSides) {
            const int k = alloc.user_for(r, s);
            RisSideState &side = deployed.side(r, s);
            const CRow &truth =
                channels.ris_to_user[std::size_t(r)][std::size_t(mc)][std::size_t(k)];
            const CRow &est =
                estimated.ris_to_user[std::size_t(r)][std::size_t(mc)][std::size_t(k)];
            for (int n = 0; n < cfg.ris_elements(); ++n)
                side.phi2[n] += std::arg(est[n] / truth[n]);
        }
    return deployed;
}

ExperimentKind experiment_kind_from_string(const std::string &name)
{
    if (name == "gain-bandwidth")
        return ExperimentKind::GainBandwidth;
    if (name == "gain-structure")
        return ExperimentKind::GainStructure;
    if (name == "convergence")
        return ExperimentKind::Convergence;
    if (name == "td-sweep")
        return ExperimentKind::TdSweep;
    if (name == "bandwidth-sweep")
        return ExperimentKind::BandwidthSweep;
    if (name == "power-sweep")
        return ExperimentKind::PowerSweep;
    if (name == "csi-sweep")
        return ExperimentKind::CsiSweep;
    throw ConfigError("unknown experiment '" + name +
                      "' (gain-bandwidth | gain-structure | convergence | td-sweep | "
                      "bandwidth-sweep | power-sweep | csi-sweep)");
}

std::string to_string(ExperimentKind kind)
{
    switch (kind) {
    case ExperimentKind::GainBandwidth:
        return "gain-bandwidth";
    case ExperimentKind::GainStructure:
        return "gain-structure";
    case ExperimentKind::Convergence:
        return "convergence";
    case ExperimentKind::TdSweep:
        return "td-sweep";
    case ExperimentKind::BandwidthSweep:
        return "bandwidth-sweep";
    case ExperimentKind::PowerSweep:
        return "power-sweep";
    case ExperimentKind::CsiSweep:
        return "csi-sweep";
    }
    return "?";
}

namespace {

std::vector<double> parse_list(const std::string &value, const std::string &key)
{
    std::vector<double> out;
    std::istringstream in(value);
    double v = 0.0;
    while (in >> v)
        out.push_back(v);
    if (out.empty() || !in.eof())
        throw ConfigError("experiment key '" + key + "': expected a space-separated number list");
    return out;
}

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace

void ExperimentSpec::apply_experiment_keys(const std::map<std::string, std::string> &keys)
{
    for (const auto &[key, value] : keys) {
        if (key == "schemes") {
            schemes.clear();
            std::istringstream in(value);
            std::string tok;
            while (in >> tok)
                schemes.push_back(scheme_from_string(tok));
            if (schemes.empty())
                throw ConfigError("experiment key 'schemes' is empty");
        } else if (key == "bandwidths_hz")
            bandwidths_hz = parse_list(value, key);
        else if (key == "td_counts") {
            td_counts.clear();
            for (double v : parse_list(value, key))
                td_counts.push_back(int(v));
        } else if (key == "powers_w")
            powers_w = parse_list(value, key);
        else if (key == "deltas")
            deltas = parse_list(value, key);
        else if (key == "csi_draws")
            csi_draws = int(parse_list(value, key).at(0));
        else if (key == "repetitions")
            repetitions = int(parse_list(value, key).at(0));
        else if (key == "kind")
            kind = experiment_kind_from_string(value);
        else
            throw ConfigError("unknown experiment key '" + key + "'");
    }
    if (repetitions < 1 || csi_draws < 1)
        throw ConfigError("repetitions and csi_draws must be >= 1");
}

namespace {

// --- Experiment bodies ------------------------------------------------------

void run_gain_bandwidth(const ExperimentSpec &spec, std::ostringstream &csv,
                        std::ostringstream &summary)
{
    const auto points = sweep_gain(spec.config, spec.config.structure, spec.bandwidths_hz);
    csv << gain_csv(points);
    summary << "gain-bandwidth: structure " << to_string(spec.config.structure) << ", "
            << spec.bandwidths_hz.size() << " bandwidths, " << spec.config.num_subcarriers
            << " subcarriers\n";
    for (double bw : spec.bandwidths_hz) {
        double worst = 1.0;
        for (const GainPoint &p : points)
            if (p.bandwidth_hz == bw)
                worst = std::min(worst, p.gain);
        summary << "  B = " << fmt(bw) << " Hz: min gain " << fmt(worst) << "\n";
    }
}

void run_gain_structure(const ExperimentSpec &spec, std::ostringstream &csv,
                        std::ostringstream &summary)
{
    csv << "structure,side,bandwidth_hz,m,f_hz,gain\n";
    summary << "gain-structure: B = " << fmt(spec.config.bandwidth_hz) << " Hz\n";
    for (RisStructure structure : {RisStructure::Conventional, RisStructure::SubConnected,
                                   RisStructure::FullyConnected}) {
        const auto points = sweep_gain(spec.config, structure, {spec.config.bandwidth_hz});
        std::string body = gain_csv(points);
        body.erase(0, body.find('\n') + 1); // drop the repeated header
        csv << body;
        double worst = 1.0;
        for (const GainPoint &p : points)
            worst = std::min(worst, p.gain);
        summary << "  " << to_string(structure) << ": min gain " << fmt(worst) << "\n";
    }
}

void run_convergence(const ExperimentSpec &spec, std::ostringstream &csv,
                     std::ostringstream &summary)
{
    csv << "scheme,seed,iteration,ldr_objective,sum_rate_bits,power_used,max_energy_violation\n";
    summary << "convergence: " << spec.repetitions << " seed(s)\n";
    struct Job {
        Scheme scheme;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (Scheme scheme : spec.schemes)
        for (int rep = 0; rep < spec.repetitions; ++rep)
            jobs.push_back({scheme, mix_seed(spec.seed, std::uint64_t(rep))});
    std::vector<SystemResult> results{jobs.size()};
    parallel_for(jobs.size(), [&](std::size_t i) {
        results[i] = run_system(with_scheme(spec.config, jobs[i].scheme), jobs[i].seed);
    });
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const SystemResult &res = results[i];
        char buf[240];
        for (const FpTraceRow &row : res.state.trace) {
            std::snprintf(buf, sizeof buf, "%s,%llu,%d,%.17g,%.17g,%.17g,%.17g\n",
                          to_string(jobs[i].scheme).c_str(), (unsigned long long)jobs[i].seed,
                          row.iteration, row.ldr_objective, row.sum_rate_bits, row.power_used,
                          row.max_energy_violation);
            csv << buf;
        }
        summary << "  " << to_string(jobs[i].scheme) << " seed " << jobs[i].seed << ": rate "
                << fmt(res.sum_rate_bits) << " bits in " << res.iterations << " iterations"
                << (res.converged ? "" : " (cap reached)") << "\n";
    }
}

struct RateJob {
    std::string label;
    double x = 0.0;
    int rep = 0;
    std::uint64_t seed = 0;
    ScenarioConfig cfg;
};

struct RateRow {
    double rate = 0.0;
    int iterations = 0;
};

// Independent repetitions fan out over the worker pool; rows are written in
// job order so the artifacts stay deterministic.
std::vector<RateRow> run_rate_jobs(const std::vector<RateJob> &jobs)
{
    std::vector<RateRow> rows{jobs.size()};
    parallel_for(jobs.size(), [&](std::size_t i) {
        const SystemResult res = run_system(jobs[i].cfg, jobs[i].seed);
        rows[i] = RateRow{res.sum_rate_bits, res.iterations};
    });
    return rows;
}

void emit_rate_rows(const std::string &x_name, const std::vector<RateJob> &jobs,
                    const std::vector<RateRow> &rows, std::ostringstream &csv,
                    std::ostringstream &summary)
{
    csv << "scheme," << x_name << ",rep,seed,sum_rate_bits,iterations\n";
    char buf[240];
    double mean = 0.0;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%s,%.12g,%d,%llu,%.17g,%d\n", jobs[i].label.c_str(),
                      jobs[i].x, jobs[i].rep, (unsigned long long)jobs[i].seed, rows[i].rate,
                      rows[i].iterations);
        csv << buf;
        mean += rows[i].rate;
        const bool group_end = i + 1 == jobs.size() || jobs[i + 1].label != jobs[i].label ||
                               jobs[i + 1].x != jobs[i].x;
        if (group_end) {
            summary << "  " << jobs[i].label << " " << x_name << " = " << fmt(jobs[i].x)
                    << ": mean rate " << fmt(mean / double(jobs[i].rep + 1)) << "\n";
            mean = 0.0;
        }
    }
}

void run_td_sweep(const ExperimentSpec &spec, std::ostringstream &csv, std::ostringstream &summary)
{
    summary << "td-sweep: sub-connected vs TD count, plus references\n";
    std::vector<RateJob> jobs;
    for (int s_total : spec.td_counts) {
        const int side = int(std::lround(std::sqrt(double(s_total))));
        if (side * side != s_total)
            throw ConfigError("td_counts entries must be perfect squares (S = S1 x S2)");
        ScenarioConfig cfg = with_scheme(spec.config, Scheme::SubConnected);
        cfg.sub_rows = side;
        cfg.sub_cols = side;
        cfg.validate();
        for (int rep = 0; rep < spec.repetitions; ++rep)
            jobs.push_back(
                {"sub", double(s_total), rep, mix_seed(spec.seed, std::uint64_t(rep)), cfg});
    }
    for (Scheme scheme : {Scheme::FullyConnected, Scheme::Conventional}) {
        const ScenarioConfig cfg = with_scheme(spec.config, scheme);
        const double x = scheme == Scheme::FullyConnected ? double(cfg.ris_elements()) : 0.0;
        for (int rep = 0; rep < spec.repetitions; ++rep)
            jobs.push_back(
                {to_string(scheme), x, rep, mix_seed(spec.seed, std::uint64_t(rep)), cfg});
    }
    emit_rate_rows("s_total", jobs, run_rate_jobs(jobs), csv, summary);
}

void run_axis_sweep(const ExperimentSpec &spec, std::ostringstream &csv,
                    std::ostringstream &summary)
{
    const bool is_power = spec.kind == ExperimentKind::PowerSweep;
    const std::vector<double> &axis = is_power ? spec.powers_w : spec.bandwidths_hz;
    const char *x_name = is_power ? "p_max_w" : "bandwidth_hz";
    summary << (is_power ? "power-sweep\n" : "bandwidth-sweep\n");
    std::vector<RateJob> jobs;
    for (Scheme scheme : spec.schemes)
        for (double x : axis) {
            ScenarioConfig cfg = with_scheme(spec.config, scheme);
            if (is_power)
                cfg.max_power_w = x;
            else
                cfg.bandwidth_hz = x;
            cfg.validate();
            for (int rep = 0; rep < spec.repetitions; ++rep)
                jobs.push_back(
                    {to_string(scheme), x, rep, mix_seed(spec.seed, std::uint64_t(rep)), cfg});
        }
    emit_rate_rows(x_name, jobs, run_rate_jobs(jobs), csv, summary);
}

void run_csi_sweep(const ExperimentSpec &spec, std::ostringstream &csv,
                   std::ostringstream &summary)
{
    csv << "scheme,delta,draw,seed,sum_rate_bits,iterations\n";
    summary << "csi-sweep: " << spec.csi_draws << " draws per level\n";
    char buf[240];
    for (Scheme scheme : spec.schemes) {
        for (double delta : spec.deltas) {
            ScenarioConfig cfg = with_scheme(spec.config, scheme);
            cfg.csi_delta = delta;
            cfg.validate();
            const int draws = delta == 0.0 ? 1 : spec.csi_draws;
            std::vector<SystemResult> results{std::size_t(draws)};
            // One shared placement seed; only the error realization differs
            // per draw, so rates stay comparable across delta levels.
            parallel_for(std::size_t(draws), [&](std::size_t i) {
                results[i] = run_system(cfg, spec.seed, std::uint64_t(i));
            });
            double mean = 0.0, sq = 0.0;
            for (int i = 0; i < draws; ++i) {
                const SystemResult &res = results[std::size_t(i)];
                std::snprintf(buf, sizeof buf, "%s,%.12g,%d,%llu,%.17g,%d\n",
                              to_string(scheme).c_str(), delta, i,
                              (unsigned long long)spec.seed, res.sum_rate_bits,
                              res.iterations);
                csv << buf;
                mean += res.sum_rate_bits;
                sq += res.sum_rate_bits * res.sum_rate_bits;
            }
            mean /= draws;
            const double var = std::max(0.0, sq / draws - mean * mean);
            summary << "  " << to_string(scheme) << " delta = " << fmt(delta) << ": mean rate "
                    << fmt(mean) << " +- " << fmt(std::sqrt(var)) << " over " << draws
                    << " draw(s)\n";
        }
    }
}

} // namespace

ExperimentResult run_experiment(const ExperimentSpec &spec)
{
    spec.config.validate();
    std::ostringstream csv, summary;
    summary << "experiment: " << to_string(spec.kind) << "\nseed: " << spec.seed << "\n";

    switch (spec.kind) {
    case ExperimentKind::GainBandwidth:
        run_gain_bandwidth(spec, csv, summary);
        break;
    case ExperimentKind::GainStructure:
        run_gain_structure(spec, csv, summary);
        break;
    case ExperimentKind::Convergence:
        run_convergence(spec, csv, summary);
        break;
    case ExperimentKind::TdSweep:
        run_td_sweep(spec, csv, summary);
        break;
    case ExperimentKind::BandwidthSweep:
    case ExperimentKind::PowerSweep:
        run_axis_sweep(spec, csv, summary);
        break;
    case ExperimentKind::CsiSweep:
        run_csi_sweep(spec, csv, summary);
        break;
    }

    ExperimentResult result;
    result.csv = csv.str();
    result.summary = summary.str();

    std::ostringstream manifest;
    const std::string resolved = resolved_text(spec.config);
    manifest << "kind = " << to_string(spec.kind) << "\n";
    manifest << "seed = " << spec.seed << "\n";
    manifest << "repetitions = " << spec.repetitions << "\n";
    manifest << "content_hash = " << sha256_hex(resolved + result.csv) << "\n";
    manifest << resolved;

    namespace fs = std::filesystem;
    fs::create_directories(spec.out_dir);
    const std::string base = spec.out_dir + "/" + to_string(spec.kind);
    ExperimentResult &r = result;
    r.csv_path = base + ".csv";
    r.manifest_path = spec.out_dir + "/manifest.txt";
    r.summary_path = spec.out_dir + "/summary.txt";
    std::ofstream(r.csv_path, std::ios::binary) << r.csv;
    std::ofstream(r.manifest_path, std::ios::binary) << manifest.str();
    std::ofstream(r.summary_path, std::ios::binary) << r.summary;
    return result;
}

std::string validate_config_file(const std::string &path)
{
    std::map<std::string, std::string> experiment_keys;
    const ScenarioConfig cfg = load_config(path, &experiment_keys);
    ExperimentSpec spec;
    spec.config = cfg;
    spec.apply_experiment_keys(experiment_keys); // type-checks the sweep lists
    // Geometry sanity: building it validates distances and side counts.
    (void)build_geometry(cfg);
    (void)allocate_users(build_geometry(cfg), cfg.num_ris, cfg.num_users);
    return resolved_text(cfg);
}

// --- SHA-256 (FIPS 180-4), used for run manifests ---------------------------

namespace {

struct Sha256 {
    std::uint32_t h[8] = {0x6a09e667u, 0xbb67ae85u, 0x3c6ef372u, 0xa54ff53au,
                          0x510e527fu, 0x9b05688cu, 0x1f83d9abu, 0x5be0cd19u};
    unsigned char block[64] = {};
    std::size_t block_len = 0;
    std::uint64_t total_len = 0;

    static std::uint32_t rotr(std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

    void process(const unsigned char *p)
    {
        static const std::uint32_t k[64] = {
            0x428a2f98u, 0x71374491u, 0xb5c0fbcfu, 0xe9b5dba5u, 0x3956c25bu, 0x59f111f1u,
            0x923f82a4u, 0xab1c5ed5u, 0xd807aa98u, 0x12835b01u, 0x243185beu, 0x550c7dc3u,
            0x72be5d74u, 0x80deb1feu, 0x9bdc06a7u, 0xc19bf174u, 0xe49b69c1u, 0xefbe4786u,
            0x0fc19dc6u, 0x240ca1ccu, 0x2de92c6fu, 0x4a7484aau, 0x5cb0a9dcu, 0x76f988dau,
            0x983e5152u, 0xa831c66du, 0xb00327c8u, 0xbf597fc7u, 0xc6e00bf3u, 0xd5a79147u,
            0x06ca6351u, 0x14292967u, 0x27b70a85u, 0x2e1b2138u, 0x4d2c6dfcu, 0x53380d13u,
            0x650a7354u, 0x766a0abbu, 0x81c2c92eu, 0x92722c85u, 0xa2bfe8a1u, 0xa81a664bu,
            0xc24b8b70u, 0xc76c51a3u, 0xd192e819u, 0xd6990624u, 0xf40e3585u, 0x106aa070u,
            0x19a4c116u, 0x1e376c08u, 0x2748774cu, 0x34b0bcb5u, 0x391c0cb3u, 0x4ed8aa4au,
            0x5b9cca4fu, 0x682e6ff3u, 0x748f82eeu, 0x78a5636fu, 0x84c87814u, 0x8cc70208u,
            0x90befffau, 0xa4506cebu, 0xbef9a3f7u, 0xc67178f2u};
        std::uint32_t w[64];
        for (int i = 0; i < 16; ++i)
            w[i] = std::uint32_t(p[4 * i] << 24) | std::uint32_t(p[4 * i + 1] << 16) |
                   std::uint32_t(p[4 * i + 2] << 8) | std::uint32_t(p[4 * i + 3]);
        for (int i = 16; i < 64; ++i) {
            const std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            const std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4], f = h[5], g = h[6],
                      hh = h[7];
        for (int i = 0; i < 64; ++i) {
            const std::uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
            const std::uint32_t ch = (e & f) ^ (~e & g);
            const std::uint32_t t1 = hh + s1 + ch + k[i] + w[i];
            const std::uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
            const std::uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
            const std::uint32_t t2 = s0 + maj;
            hh = g;
            g = f;
            f = e;
            e = d + t1;
            d = c;
            c = b;
            b = a;
            a = t1 + t2;
        }
        h[0] += a;
        h[1] += b;
        h[2] += c;
        h[3] += d;
        h[4] += e;
        h[5] += f;
        h[6] += g;
        h[7] += hh;
    }

    void update(const unsigned char *data, std::size_t len)
    {
        total_len += len;
        while (len > 0) {
            const std::size_t take = std::min(len, sizeof block - block_len);
            std::memcpy(block + block_len, data, take);
            block_len += take;
            data += take;
            len -= take;
            if (block_len == sizeof block) {
                process(block);
                block_len = 0;
            }
        }
    }

    std::string finish()
    {
        const std::uint64_t bits = total_len * 8;
        const unsigned char pad = 0x80;
        update(&pad, 1);
        const unsigned char zero = 0x00;
        while (block_len != 56)
            update(&zero, 1);
        unsigned char lenbuf[8];
        for (int i = 0; i < 8; ++i)
            lenbuf[i] = (unsigned char)((bits >> (56 - 8 * i)) & 0xff);
        update(lenbuf, 8);
        char out[65];
        for (int i = 0; i < 8; ++i)
            std::snprintf(out + 8 * i, 9, "%08x", h[i]);
        return std::string(out, 64);
    }
};

} // namespace

std::string sha256_hex(const std::string &data)
{
    Sha256 sha;
    sha.update(reinterpret_cast<const unsigned char *>(data.data()), data.size());
    return sha.finish();
}

} // namespace starbeam
