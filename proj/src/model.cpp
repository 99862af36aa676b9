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

#include "mecalloc/model.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <random>
#include <sstream>
#include <string_view>
#include <variant>

#include <fmt/format.h>

#include "mecalloc/energy.hpp"
#include "mecalloc/utility.hpp"

namespace mec {

std::int64_t Scenario::total_arrivals() const {
    std::int64_t n = 0;
    for (const auto& slot : arrivals) n += static_cast<std::int64_t>(slot.size());
    return n;
}

bool feasibility(const UERequest& req, const MesServer& srv, double distance) {
    return req.cpu_min <= srv.available.cpu && req.ram_min <= srv.available.ram &&
           req.disk <= srv.available.disk && distance <= srv.coverage_range;
}

std::vector<bool> feasibility_vector(const UERequest& req, std::span<const MesServer> servers) {
    if (req.distances.size() != servers.size()) {
        throw ConfigError(fmt::format("request {} has {} distances for {} servers", req.id,
                                      req.distances.size(), servers.size()));
    }
    std::vector<bool> out(servers.size());
    for (std::size_t k = 0; k < servers.size(); ++k) {
        out[k] = feasibility(req, servers[k], req.distances[k]);
    }
    return out;
}

const UERequest& validate_request(const UERequest& req, int t_max, double d_max) {
    if (!(req.cpu_min > 0)) throw ValidationError("cpu_min", "must be positive");
    if (!(req.cpu_min <= req.cpu_max)) throw ValidationError("cpu_max", "below cpu_min");
    if (!(req.ram_min > 0)) throw ValidationError("ram_min", "must be positive");
    if (!(req.ram_min <= req.ram_max)) throw ValidationError("ram_max", "below ram_min");
    if (!(req.disk > 0)) throw ValidationError("disk", "must be positive");
    if (req.duration < 1 || req.duration > t_max) {
        throw ValidationError("duration", fmt::format("{} outside [1, {}]", req.duration, t_max));
    }
    for (double d : req.distances) {
        if (!(d >= 1.0 && d <= d_max)) {
            throw ValidationError("distances", fmt::format("{} outside [1, {}]", d, d_max));
        }
    }
    return req;
}

namespace {

void require(bool ok, std::string_view key, std::string_view what) {
    if (!ok) throw ConfigError(fmt::format("{}: {}", key, what));
}

void require_range(double lo, double hi, std::string_view key) {
    require(lo > 0 && lo <= hi, key, "range must satisfy 0 < lo <= hi");
}

}  // namespace

void validate_config(const ScenarioConfig& c) {
    require(c.num_servers >= 1, "num_servers", "must be at least 1");
    require(c.num_slots >= 1, "num_slots", "must be at least 1");
    require(c.traffic_mean > 0, "traffic_mean", "must be positive");
    require(c.server_cpu_mean > 0 && c.server_cpu_std >= 0, "server_cpu", "mean > 0, std >= 0");
    require(c.server_ram_mean > 0 && c.server_ram_std >= 0, "server_ram", "mean > 0, std >= 0");
    require(c.server_disk_mean > 0 && c.server_disk_std >= 0, "server_disk", "mean > 0, std >= 0");
    require(c.server_floor_fraction > 0 && c.server_floor_fraction <= 1, "server_floor_fraction",
            "must be in (0, 1]");
    require_range(c.req_cpu_max_lo, c.req_cpu_max_hi, "req_cpu_max");
    require_range(c.req_ram_max_lo, c.req_ram_max_hi, "req_ram_max");
    require_range(c.req_disk_lo, c.req_disk_hi, "req_disk");
    require(c.req_cpu_min_fraction > 0 && c.req_cpu_min_fraction <= 1, "req_cpu_min_fraction",
            "must be in (0, 1]");
    require(c.req_ram_min_fraction > 0 && c.req_ram_min_fraction <= 1, "req_ram_min_fraction",
            "must be in (0, 1]");
    require(c.t_max >= 1, "t_max", "must be at least 1");
    require(c.d_max >= 1, "d_max", "must be at least 1");
    require(c.coverage_range > 0, "coverage_range", "must be positive");
    require(c.energy_per_capacity > 0, "energy_per_capacity", "must be positive");
    require(c.energy_jitter >= 0 && c.energy_jitter < 1, "energy_jitter", "must be in [0, 1)");
    require(c.energy_cpu_share >= 0 && c.energy_ram_share >= 0 && c.energy_disk_share >= 0,
            "energy_*_share", "must be non-negative");
    require(c.energy_idle_fraction >= 0 && c.energy_idle_fraction <= 1, "energy_idle_fraction",
            "must be in [0, 1]");
    require(c.gamma1 > 0 && c.gamma2 > 0 && c.gamma3 > 0 && c.gamma4 > 0, "gamma1..gamma4",
            "must be positive");
    require(c.w1 > 0 && c.w2 > 0 && c.w3 > 0 && c.w5 > 0, "w1..w5", "must be positive");
}

namespace {

CoefficientSettings coefficient_settings(const ScenarioConfig& c, const Resources& fleet_total,
                                         double e_max) {
    CoefficientSettings s;
    s.mode = c.coeff_mode;
    s.gamma1 = c.gamma1;
    s.gamma2 = c.gamma2;
    s.gamma3 = c.gamma3;
    s.gamma4 = c.gamma4;
    s.w1 = c.w1;
    s.w2 = c.w2;
    s.w3 = c.w3;
    s.w5 = c.w5;
    s.d_max = c.d_max;
    s.t_max = c.t_max;
    s.fleet_total = fleet_total;
    s.e_max = e_max;
    return s;
}

}  // namespace

Scenario sample_scenario(const ScenarioConfig& config) {
    validate_config(config);

    Scenario sc;
    sc.config = config;
    std::mt19937_64 rng(config.seed);

    auto truncated_normal = [&](double mean, double sd) {
        const double floor = config.server_floor_fraction * mean;
        if (sd == 0) return std::max(mean, floor);
        std::normal_distribution<double> dist(mean, sd);
        return std::max(dist(rng), floor);
    };

    Resources fleet_total;
    sc.servers.resize(static_cast<std::size_t>(config.num_servers));
    for (std::size_t k = 0; k < sc.servers.size(); ++k) {
        auto& srv = sc.servers[k];
        srv.id = static_cast<std::int64_t>(k);
        srv.total.cpu = truncated_normal(config.server_cpu_mean, config.server_cpu_std);
        srv.total.ram = truncated_normal(config.server_ram_mean, config.server_ram_std);
        srv.total.disk = truncated_normal(config.server_disk_mean, config.server_disk_std);
        srv.available = srv.total;
        srv.coverage_range = config.coverage_range;
        fleet_total += srv.total;
    }

    // Keep-on power depends on capacity, which depends on gamma1..gamma3, and
    // gamma5 depends on the summed keep-on power.
    const Coefficients base = derive_coefficients(coefficient_settings(config, fleet_total, 1.0));
    std::uniform_real_distribution<double> jitter(1.0 - config.energy_jitter,
                                                  1.0 + config.energy_jitter);
    double e_max = 0.0;
    for (auto& srv : sc.servers) {
        srv.keep_on_power = config.energy_per_capacity * capacity(srv, base) * jitter(rng);
        auto range = [&](double share) {
            const double peak = share * srv.keep_on_power;
            return PowerRange{config.energy_idle_fraction * peak, peak};
        };
        srv.usage_power = {range(config.energy_cpu_share), range(config.energy_ram_share),
                           range(config.energy_disk_share)};
        e_max += srv.keep_on_power;
    }
    sc.coeffs = derive_coefficients(coefficient_settings(config, fleet_total, e_max));

    std::poisson_distribution<int> arrivals(config.traffic_mean);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> duration(1, config.t_max);
    std::uniform_real_distribution<double> distance(1.0, config.d_max);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

    std::int64_t next_id = 1;
    sc.arrivals.resize(static_cast<std::size_t>(config.num_slots));
    for (std::size_t s = 0; s < sc.arrivals.size(); ++s) {
        const int n = arrivals(rng);
        auto& slot = sc.arrivals[s];
        slot.reserve(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) {
            UERequest r;
            r.id = next_id++;
            r.arrival_slot = static_cast<Slot>(s + 1);
            r.cpu_max = uniform(config.req_cpu_max_lo, config.req_cpu_max_hi);
            r.cpu_min = uniform(config.req_cpu_min_fraction * r.cpu_max, r.cpu_max);
            r.ram_max = uniform(config.req_ram_max_lo, config.req_ram_max_hi);
            r.ram_min = uniform(config.req_ram_min_fraction * r.ram_max, r.ram_max);
            r.disk = uniform(config.req_disk_lo, config.req_disk_hi);
            r.duration = duration(rng);
            r.distances.resize(sc.servers.size());
            for (auto& d : r.distances) d = distance(rng);
            slot.push_back(std::move(r));
        }
    }
    return sc;
}

// ---------------------------------------------------------------------------
// Config text

namespace {

using Field = std::variant<int ScenarioConfig::*, double ScenarioConfig::*,
                           std::uint64_t ScenarioConfig::*, CoefficientMode ScenarioConfig::*>;

struct Key {
    std::string_view name;
    Field field;
};

// clang-format off
constexpr Key kKeys[] = {
    {"num_servers", &ScenarioConfig::num_servers},
    {"num_slots", &ScenarioConfig::num_slots},
    {"traffic_mean", &ScenarioConfig::traffic_mean},
    {"server_cpu_mean", &ScenarioConfig::server_cpu_mean},
    {"server_cpu_std", &ScenarioConfig::server_cpu_std},
    {"server_ram_mean", &ScenarioConfig::server_ram_mean},
    {"server_ram_std", &ScenarioConfig::server_ram_std},
    {"server_disk_mean", &ScenarioConfig::server_disk_mean},
    {"server_disk_std", &ScenarioConfig::server_disk_std},
    {"server_floor_fraction", &ScenarioConfig::server_floor_fraction},
    {"req_cpu_max_lo", &ScenarioConfig::req_cpu_max_lo},
    {"req_cpu_max_hi", &ScenarioConfig::req_cpu_max_hi},
    {"req_cpu_min_fraction", &ScenarioConfig::req_cpu_min_fraction},
    {"req_ram_max_lo", &ScenarioConfig::req_ram_max_lo},
    {"req_ram_max_hi", &ScenarioConfig::req_ram_max_hi},
    {"req_ram_min_fraction", &ScenarioConfig::req_ram_min_fraction},
    {"req_disk_lo", &ScenarioConfig::req_disk_lo},
    {"req_disk_hi", &ScenarioConfig::req_disk_hi},
    {"t_max", &ScenarioConfig::t_max},
    {"d_max", &ScenarioConfig::d_max},
    {"coverage_range", &ScenarioConfig::coverage_range},
    {"energy_per_capacity", &ScenarioConfig::energy_per_capacity},
    {"energy_jitter", &ScenarioConfig::energy_jitter},
    {"energy_cpu_share", &ScenarioConfig::energy_cpu_share},
    {"energy_ram_share", &ScenarioConfig::energy_ram_share},
    {"energy_disk_share", &ScenarioConfig::energy_disk_share},
    {"energy_idle_fraction", &ScenarioConfig::energy_idle_fraction},
    {"coeff_mode", &ScenarioConfig::coeff_mode},
    {"gamma1", &ScenarioConfig::gamma1},
    {"gamma2", &ScenarioConfig::gamma2},
    {"gamma3", &ScenarioConfig::gamma3},
    {"gamma4", &ScenarioConfig::gamma4},
    {"w1", &ScenarioConfig::w1},
    {"w2", &ScenarioConfig::w2},
    {"w3", &ScenarioConfig::w3},
    {"w5", &ScenarioConfig::w5},
    {"seed", &ScenarioConfig::seed},
};
// clang-format on

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
    T value{};
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError(fmt::format("{}: cannot parse '{}'", key, text));
    }
    return value;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig cfg;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string_view line(raw);
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(fmt::format("line {}: expected key = value", lineno));
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        const auto* it = std::find_if(std::begin(kKeys), std::end(kKeys),
                                      [&](const Key& k) { return k.name == key; });
        if (it == std::end(kKeys)) {
            throw ConfigError(fmt::format("line {}: unknown key '{}'", lineno, key));
        }
        std::visit(
            [&](auto member) {
                using T = std::remove_reference_t<decltype(cfg.*member)>;
                if constexpr (std::is_same_v<T, CoefficientMode>) {
                    if (value == "direct") {
                        cfg.*member = CoefficientMode::Direct;
                    } else if (value == "derived") {
                        cfg.*member = CoefficientMode::Derived;
                    } else {
                        throw ConfigError(
                            fmt::format("{}: expected direct or derived, got '{}'", key, value));
                    }
                } else {
                    cfg.*member = parse_number<T>(key, value);
                }
            },
            it->field);
    }
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot read config '{}'", path));
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string format_config(const ScenarioConfig& cfg) {
    std::string out;
    for (const auto& k : kKeys) {
        std::visit(
            [&](auto member) {
                using T = std::remove_cvref_t<decltype(cfg.*member)>;
                if constexpr (std::is_same_v<T, CoefficientMode>) {
                    out += fmt::format("{} = {}\n", k.name,
                                       cfg.*member == CoefficientMode::Direct ? "direct"
                                                                              : "derived");
                } else {
                    out += fmt::format("{} = {}\n", k.name, cfg.*member);
                }
            },
            k.field);
    }
    return out;
}

}  // namespace mec
