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

#include "mecalloc/experiment.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "parallel.hpp"

namespace mec {

SweepParam sweep_param_from_name(std::string_view name) {
    if (name == "traffic_mean") return SweepParam::TrafficMean;
    if (name == "num_servers") return SweepParam::NumServers;
    throw ConfigError(fmt::format("unknown sweep parameter '{}'", name));
}

std::string_view sweep_param_name(SweepParam p) {
    return p == SweepParam::TrafficMean ? "traffic_mean" : "num_servers";
}

ScenarioConfig apply_sweep_value(ScenarioConfig base, SweepParam p, double value) {
    if (p == SweepParam::TrafficMean) {
        base.traffic_mean = value;
    } else {
        if (value != std::floor(value)) {
            throw ConfigError(fmt::format("num_servers must be an integer, got {}", value));
        }
        base.num_servers = static_cast<int>(value);
    }
    return base;
}

void SweepSpec::validate() const {
    if (values.empty()) throw ConfigError("sweep needs at least one value");
    for (double v : values) {
        if (!(v > 0)) throw ConfigError(fmt::format("sweep value {} is not positive", v));
    }
    if (seeds.empty()) throw ConfigError("sweep needs at least one seed");
    if (policies.empty()) throw ConfigError("sweep needs at least one policy");
}

Stats summarize(const std::vector<double>& xs) {
    Stats s;
    if (xs.empty()) return s;
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return s;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads, const RunSink& sink) {
    spec.validate();
    for (const auto& p : spec.policies) p.validate();

    const std::size_t nv = spec.values.size();
    const std::size_t ns = spec.seeds.size();
    const std::size_t np = spec.policies.size();

    // results[(v * ns + s) * np + p]
    std::vector<RunResult> results(nv * ns * np);
    detail::parallel_for(nv * ns, threads, [&](std::size_t cell) {
        const std::size_t v = cell / ns;
        const std::size_t s = cell % ns;
        ScenarioConfig cfg = apply_sweep_value(spec.base, spec.param, spec.values[v]);
        cfg.seed = spec.seeds[s];
        const Scenario scenario = sample_scenario(cfg);
        for (std::size_t p = 0; p < np; ++p) {
            results[cell * np + p] = run(scenario, spec.policies[p]);
        }
    });

    if (sink) {
        for (std::size_t cell = 0; cell < nv * ns; ++cell) {
            for (std::size_t p = 0; p < np; ++p) sink(spec.values[cell / ns], results[cell * np + p]);
        }
    }

    std::vector<SweepRow> rows;
    rows.reserve(np * nv);
    for (std::size_t p = 0; p < np; ++p) {
        for (std::size_t v = 0; v < nv; ++v) {
            std::vector<double> sr, u, epu;
            for (std::size_t s = 0; s < ns; ++s) {
                const auto& r = results[(v * ns + s) * np + p];
                sr.push_back(r.service_rate);
                u.push_back(r.total_utility);
                epu.push_back(r.energy_per_unit_utility);
            }
            SweepRow row;
            row.policy = spec.policies[p].name();
            row.param = spec.param;
            row.value = spec.values[v];
            row.seeds = ns;
            const auto a = summarize(sr), b = summarize(u), c = summarize(epu);
            row.service_rate_mean = a.mean;
            row.service_rate_std = a.stddev;
            row.utility_mean = b.mean;
            row.utility_std = b.stddev;
            row.epu_mean = c.mean;
            row.epu_std = c.stddev;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string format_number(double x) { return fmt::format("{}", x); }

void write_slot_csv_header(std::ostream& os) { os << kSlotCsvHeader << '\n'; }

void write_slot_csv_rows(std::ostream& os, const RunResult& r) {
    for (const auto& s : r.slots) {
        os << fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", s.slot, r.policy, r.seed, s.arrivals,
                          s.served, s.denied, s.active_servers, s.slot_utility, s.cum_utility,
                          s.slot_energy, s.cum_energy);
    }
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << kSweepCsvHeader << '\n';
    for (const auto& r : rows) {
        os << fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.policy, sweep_param_name(r.param),
                          r.value, r.seeds, r.service_rate_mean, r.service_rate_std,
                          r.utility_mean, r.utility_std, r.epu_mean, r.epu_std);
    }
}

std::string summary_line(const RunResult& r) {
    return fmt::format("policy={} service_rate={}{} total_utility={} total_energy={} "
                       "energy_per_unit_utility={}",
                       r.policy, r.service_rate, r.service_rate_vacuous ? " (vacuous)" : "",
                       r.total_utility, r.total_energy, r.energy_per_unit_utility);
}

std::vector<double> parse_value_list(std::string_view list) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= list.size()) {
        auto comma = list.find(',', pos);
        if (comma == std::string_view::npos) comma = list.size();
        auto item = list.substr(pos, comma - pos);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size()) {
            throw ConfigError(fmt::format("cannot parse value '{}'", item));
        }
        out.push_back(v);
        pos = comma + 1;
    }
    return out;
}

}  // namespace mec
