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

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "mecalloc/model.hpp"
#include "mecalloc/policies.hpp"
#include "mecalloc/simulator.hpp"

namespace mec {

inline constexpr std::string_view kSlotCsvHeader =
    "slot,policy,seed,arrivals,served,denied,active_servers,slot_utility,cum_utility,"
    "slot_energy,cum_energy";
inline constexpr std::string_view kSweepCsvHeader =
    "policy,param,value,seeds,service_rate_mean,service_rate_std,utility_mean,utility_std,"
    "epu_mean,epu_std";

enum class SweepParam { TrafficMean, NumServers };

SweepParam sweep_param_from_name(std::string_view name);
std::string_view sweep_param_name(SweepParam p);

/// Returns `base` with the swept parameter set to `value`.
ScenarioConfig apply_sweep_value(ScenarioConfig base, SweepParam p, double value);

struct SweepSpec {
    SweepParam param = SweepParam::TrafficMean;
    std::vector<double> values;
    std::vector<std::uint64_t> seeds;
    std::vector<PolicySpec> policies;
    ScenarioConfig base;

    /// Throws ConfigError unless values are non-empty and positive and there
    /// is at least one seed and one policy.
    void validate() const;
};

struct SweepRow {
    std::string policy;
    SweepParam param = SweepParam::TrafficMean;
    double value = 0.0;
    std::size_t seeds = 0;
    double service_rate_mean = 0.0;
    double service_rate_std = 0.0;
    double utility_mean = 0.0;
    double utility_std = 0.0;
    double epu_mean = 0.0;
    double epu_std = 0.0;
};

/// Sample mean and (n-1) standard deviation; std is 0 for a single sample.
struct Stats {
    double mean = 0.0;
    double stddev = 0.0;
};
Stats summarize(const std::vector<double>& xs);

/// Called once per completed run, in deterministic (value, seed, policy) order.
using RunSink = std::function<void(double value, const RunResult&)>;

/// One row per (policy, value), policies in the order given, values in the
/// order given. Every (value, seed) scenario is sampled once and shared by
/// all policies.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads = 0,
                                const RunSink& sink = {});

/// Shortest round-trip decimal form.
std::string format_number(double x);

void write_slot_csv_header(std::ostream& os);
void write_slot_csv_rows(std::ostream& os, const RunResult& result);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

/// policy, service_rate, total_utility, total_energy, energy_per_unit_utility.
std::string summary_line(const RunResult& result);

/// Parses "1,3,5" into numbers. Throws ConfigError on junk.
std::vector<double> parse_value_list(std::string_view list);

}  // namespace mec
