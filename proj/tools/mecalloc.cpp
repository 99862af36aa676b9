// Copyright 2026 The mecalloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// mecalloc: run allocation policies over sampled edge-server scenarios.
//
//   mecalloc simulate --config default.cfg --policy cgm --seed 7 --out run.csv
//   mecalloc sweep --param traffic_mean --values 1,3,5 --policies all --seeds 10 --out sweep.csv
//   mecalloc config > default.cfg

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "mecalloc/experiment.hpp"
#include "mecalloc/model.hpp"
#include "mecalloc/policies.hpp"
#include "mecalloc/simulator.hpp"

namespace {

struct Common {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> slots;
    std::string out;
    unsigned threads = 0;
};

mec::ScenarioConfig load(const Common& c) {
    mec::ScenarioConfig cfg = c.config_path.empty() ? mec::ScenarioConfig{}
                                                    : mec::load_config(c.config_path);
    if (c.seed) cfg.seed = *c.seed;
    if (c.slots) cfg.num_slots = *c.slots;
    mec::validate_config(cfg);
    return cfg;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw mec::ConfigError(fmt::format("cannot write '{}'", path));
    return os;
}

int simulate(const Common& c, const std::string& policy) {
    const auto policies = mec::parse_policy_list(policy);
    const auto cfg = load(c);
    const mec::Scenario scenario = mec::sample_scenario(cfg);
    auto results = mec::compare(policies, scenario, c.threads);

    std::optional<std::ofstream> csv;
    if (!c.out.empty()) {
        csv = open_out(c.out);
        mec::write_slot_csv_header(*csv);
    }
    for (const auto& p : policies) {
        const auto& r = results.at(p.name());
        if (csv) mec::write_slot_csv_rows(*csv, r);
        std::cout << mec::summary_line(r) << '\n';
    }
    return 0;
}

int sweep(const Common& c, const std::string& param, const std::string& values,
          const std::string& policies, int seeds, const std::string& runs_dir) {
    mec::SweepSpec spec;
    spec.param = mec::sweep_param_from_name(param);
    if (values.empty()) {
        spec.values = spec.param == mec::SweepParam::TrafficMean
                          ? std::vector<double>{1, 3, 5, 8, 12, 16, 20}
                          : std::vector<double>{2, 4, 6, 8, 10, 12, 15, 20};
    } else {
        spec.values = mec::parse_value_list(values);
    }
    if (seeds < 1) throw mec::ConfigError("--seeds must be at least 1");
    for (int s = 1; s <= seeds; ++s) spec.seeds.push_back(static_cast<std::uint64_t>(s));
    spec.policies = mec::parse_policy_list(policies);
    spec.base = load(c);

    mec::RunSink sink;
    if (!runs_dir.empty()) {
        std::filesystem::create_directories(runs_dir);
        sink = [&](double value, const mec::RunResult& r) {
            auto os = open_out((std::filesystem::path(runs_dir) /
                                fmt::format("{}_{}_{}_seed{}.csv", r.policy, param,
                                            mec::format_number(value), r.seed))
                                   .string());
            mec::write_slot_csv_header(os);
            mec::write_slot_csv_rows(os, r);
        };
    }
    const auto rows = mec::run_sweep(spec, c.threads, sink);

    if (c.out.empty()) {
        mec::write_sweep_csv(std::cout, rows);
    } else {
        auto os = open_out(c.out);
        mec::write_sweep_csv(os, rows);
    }
    return 0;
}

void add_common(CLI::App* app, Common& c) {
    app->add_option("--config", c.config_path, "key = value scenario file")->check(CLI::ExistingFile);
    app->add_option("--seed", c.seed, "override the config seed");
    app->add_option("--slots", c.slots, "override num_slots");
    app->add_option("--threads", c.threads, "worker threads (0 = all cores)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Utility-driven resource allocation on mobile edge servers"};
    app.require_subcommand(1);

    Common sim_opts;
    std::string sim_policy;
    auto* sim = app.add_subcommand("simulate", "run one scenario and write a per-slot CSV");
    add_common(sim, sim_opts);
    sim->add_option("--policy", sim_policy, "policy name, comma list, or all")->required();
    sim->add_option("--out", sim_opts.out, "per-slot CSV path");

    Common sweep_opts;
    std::string param, values, sweep_policies = "all", runs_dir;
    int seeds = 10;
    auto* sw = app.add_subcommand("sweep", "sweep traffic or server count and aggregate over seeds");
    add_common(sw, sweep_opts);
    sw->add_option("--param", param, "traffic_mean or num_servers")->required();
    sw->add_option("--values", values, "comma-separated values");
    sw->add_option("--policies,--policy", sweep_policies, "policy names or all");
    sw->add_option("--seeds", seeds, "number of seeds, 1..N");
    sw->add_option("--out", sweep_opts.out, "aggregated CSV path (default stdout)");
    sw->add_option("--runs-dir", runs_dir, "also write every run's per-slot CSV here");

    Common cfg_opts;
    auto* cfg = app.add_subcommand("config", "print the effective configuration");
    cfg->add_option("--config", cfg_opts.config_path)->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sim) return simulate(sim_opts, sim_policy);
        if (*sw) return sweep(sweep_opts, param, values, sweep_policies, seeds, runs_dir);
        if (*cfg) {
            std::cout << mec::format_config(load(cfg_opts));
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "mecalloc: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
