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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "starbeam/beam_gain.hpp"
#include "starbeam/bs_frontend.hpp"
#include "starbeam/channel.hpp"
#include "starbeam/experiments.hpp"

namespace {

// channels.csv, ris_state.csv and bs_gain.csv for cross-implementation
// diffing of one resolved scenario.
int cmd_dump(const std::string &config_path, const std::string &out_dir)
{
    try {
        const starbeam::ScenarioConfig cfg = starbeam::load_config(config_path);
        starbeam::Rng rng(cfg.seed);
        const starbeam::Geometry geo = starbeam::build_geometry(cfg, &rng);
        const starbeam::Allocation alloc =
            starbeam::allocate_users(geo, cfg.num_ris, cfg.num_users);
        const starbeam::SubcarrierGrid grid =
            starbeam::subcarrier_frequencies(cfg.fc_hz, cfg.bandwidth_hz, cfg.num_subcarriers);
        const starbeam::ChannelSet channels = starbeam::build_channel_set(cfg, geo, grid);
        const starbeam::BsFrontend frontend = starbeam::build_bs_frontend(cfg, geo, grid);
        const starbeam::RisState ris = starbeam::design_ris_state(cfg, geo, alloc);

        std::filesystem::create_directories(out_dir);
        std::ofstream(out_dir + "/channels.csv", std::ios::binary)
            << starbeam::channel_csv(channels);
        std::ofstream(out_dir + "/ris_state.csv", std::ios::binary)
            << starbeam::ris_state_csv(ris);
        std::ofstream gain(out_dir + "/bs_gain.csv", std::ios::binary);
        gain << "chain,m,f_hz,gain\n";
        for (int l = 0; l < cfg.num_rf_chains; ++l) {
            const double theta =
                geo.bs_to_ris[std::size_t(l / (cfg.num_rf_chains / cfg.num_ris))].aod_bs_rad;
            for (int m = 0; m < grid.size(); ++m) {
                char buf[128];
                std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g\n", l, m,
                              grid.frequency_hz[std::size_t(m)],
                              starbeam::bs_combined_gain(frontend, m, l, theta, cfg.fc_hz));
                gain << buf;
            }
        }
        std::cout << "wrote channel, RIS state and BS gain dumps to " << out_dir << "\n";
        return 0;
    } catch (const starbeam::ConfigError &err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 2;
    }
}

int cmd_validate(const std::string &config_path)
{
    try {
        std::cout << starbeam::validate_config_file(config_path);
        std::cout << "config ok\n";
        return 0;
    } catch (const starbeam::ConfigError &err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 2;
    }
}

int cmd_run(const std::string &kind, const std::string &config_path, std::uint64_t seed,
            bool seed_given, const std::string &out_dir,
            const std::vector<std::string> &overrides, int repetitions)
{
    starbeam::ExperimentSpec spec;
    try {
        spec.kind = starbeam::experiment_kind_from_string(kind);
        std::map<std::string, std::string> experiment_keys;
        if (!config_path.empty())
            spec.config = starbeam::load_config(config_path, &experiment_keys);
        spec.apply_experiment_keys(experiment_keys);
        for (const std::string &kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw starbeam::ConfigError("--set expects key=value, got '" + kv + "'");
            starbeam::apply_override(spec.config, kv.substr(0, eq), kv.substr(eq + 1));
        }
        spec.config.validate();
        spec.seed = seed_given ? seed : spec.config.seed;
        spec.out_dir = out_dir;
        if (repetitions > 0)
            spec.repetitions = repetitions;
    } catch (const starbeam::ConfigError &err) {
        std::cerr << "usage error: " << err.what() << "\n";
        return 2;
    }

    try {
        const starbeam::ExperimentResult result = starbeam::run_experiment(spec);
        std::cout << result.summary;
        std::cout << "wrote " << result.csv_path << "\n";
        return 0;
    } catch (const starbeam::SolverError &err) {
        std::cerr << "solver failure: " << err.what() << "\n";
        return 1;
    } catch (const starbeam::ConfigError &err) {
        std::cerr << "usage error: " << err.what() << "\n";
        return 2;
    }
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"wideband beamforming simulator for STAR-RIS assisted THz links"};
    app.require_subcommand(1);

    std::string config_path;
    auto *validate = app.add_subcommand("validate", "check a config file and print it resolved");
    validate->add_option("config", config_path, "config file path")->required();

    std::string dump_config, dump_dir = "out";
    auto *dump = app.add_subcommand("dump", "write channel/RIS/BS-gain CSVs for one scenario");
    dump->add_option("config", dump_config, "config file path")->required();
    dump->add_option("--out", dump_dir, "output directory");

    std::string kind, run_config, out_dir = "out";
    std::uint64_t seed = 1;
    int repetitions = 0;
    std::vector<std::string> overrides;
    auto *run = app.add_subcommand("run", "run an experiment and write CSV artifacts");
    run->add_option("kind", kind,
                    "gain-bandwidth | gain-structure | convergence | td-sweep | "
                    "bandwidth-sweep | power-sweep | csi-sweep")
        ->required();
    run->add_option("--config", run_config, "config file (defaults apply when omitted)");
    auto *seed_opt = run->add_option("--seed", seed, "base seed (default: the config's seed)");
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--reps", repetitions, "repetition count override");
    run->add_option("--set", overrides, "config override key=value (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (validate->parsed())
        return cmd_validate(config_path);
    if (dump->parsed())
        return cmd_dump(dump_config, dump_dir);
    return cmd_run(kind, run_config, seed, seed_opt->count() > 0, out_dir, overrides,
                   repetitions);
}
