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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mec {

using Slot = std::int64_t;

/// Raised for malformed or inconsistent configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a request violates one of its invariants. `field()` names the
/// offending field.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A triple of CPU, RAM and disk amounts, in abstract resource units.
struct Resources {
    double cpu = 0.0;
    double ram = 0.0;
    double disk = 0.0;

    Resources& operator+=(const Resources& o) {
        cpu += o.cpu;
        ram += o.ram;
        disk += o.disk;
        return *this;
    }
    Resources& operator-=(const Resources& o) {
        cpu -= o.cpu;
        ram -= o.ram;
        disk -= o.disk;
        return *this;
    }
    friend Resources operator+(Resources a, const Resources& b) { return a += b; }
    friend Resources operator-(Resources a, const Resources& b) { return a -= b; }
    friend bool operator==(const Resources&, const Resources&) = default;
};

/// One user-equipment request: a row of the request matrix plus its row of
/// the distance matrix.
struct UERequest {
    std::int64_t id = 0;
    double cpu_min = 0.0;
    double cpu_max = 0.0;
    double ram_min = 0.0;
    double ram_max = 0.0;
    double disk = 0.0;
    int duration = 1;  // slots
    Slot arrival_slot = 1;
    std::vector<double> distances;  // meters, one per server

    Resources minimum() const { return {cpu_min, ram_min, disk}; }
    Resources maximum() const { return {cpu_max, ram_max, disk}; }
};

enum class PowerState { Idle, On };

/// Linear power model bounds for one resource: draw at zero and at full
/// utilization.
struct PowerRange {
    double idle = 0.0;
    double peak = 0.0;
};

struct UsagePowerParams {
    PowerRange cpu;
    PowerRange ram;
    PowerRange disk;
};

struct MesServer {
    std::int64_t id = 0;
    Resources total;
    Resources available;
    double keep_on_power = 0.0;  // energy units per ON slot
    PowerState power_state = PowerState::Idle;
    UsagePowerParams usage_power;
    std::int64_t active_slots = 0;
    double coverage_range = 800.0;  // meters

    bool is_on() const noexcept { return power_state == PowerState::On; }
};

/// A live VM. Occupies slots [start_slot, end_slot] inclusive.
struct VmAllocation {
    std::int64_t request_id = 0;
    std::size_t server = 0;  // index into the fleet
    Resources alloc;
    Slot start_slot = 1;
    Slot end_slot = 1;

    // Copied from the owning request so expansion and utility accrual do not
    // need the request itself.
    Resources request_min;
    Resources request_max;
    int duration = 1;
    double distance = 1.0;

    bool alive_at(Slot s) const noexcept { return start_slot <= s && s <= end_slot; }
};

enum class CoefficientMode { Direct, Derived };

/// Unit-balancing and weighting coefficients of the utility function.
struct Coefficients {
    double gamma1 = 0.4;
    double gamma2 = 0.25;
    double gamma3 = 0.25;
    double gamma4 = 0.1;
    double gamma5 = 0.0;
};

/// Inputs to derive_coefficients(). In direct mode gamma1..gamma4 are taken as
/// given; in derived mode they come from the weights and fleet totals. gamma5
/// is always w5 / e_max.
struct CoefficientSettings {
    CoefficientMode mode = CoefficientMode::Direct;
    double gamma1 = 0.4;
    double gamma2 = 0.25;
    double gamma3 = 0.25;
    double gamma4 = 0.1;
    double w1 = 1.0;
    double w2 = 1.0;
    double w3 = 1.0;
    double w5 = 1.0;
    double d_max = 1000.0;
    double t_max = 10.0;
    Resources fleet_total;  // derived mode only
    double e_max = 0.0;     // sum of keep-on power over the fleet
};

/// Everything needed to sample a scenario. Field names double as config keys.
struct ScenarioConfig {
    int num_servers = 10;
    int num_slots = 1000;
    double traffic_mean = 5.0;

    // Server resources ~ Normal(mean, std), truncated below at
    // server_floor_fraction * mean.
    double server_cpu_mean = 15.0;
    double server_cpu_std = 5.0;
    double server_ram_mean = 10.0;
    double server_ram_std = 2.0;
    double server_disk_mean = 25.0;
    double server_disk_std = 5.0;
    double server_floor_fraction = 0.1;

    // c_max ~ U[lo, hi], c_min ~ U[frac * c_max, c_max]; RAM likewise.
    double req_cpu_max_lo = 1.0;
    double req_cpu_max_hi = 5.0;
    double req_cpu_min_fraction = 0.5;
    double req_ram_max_lo = 1.0;
    double req_ram_max_hi = 3.0;
    double req_ram_min_fraction = 0.5;
    double req_disk_lo = 1.0;
    double req_disk_hi = 5.0;
    int t_max = 10;  // duration ~ U{1..t_max}

    double d_max = 1000.0;  // distance ~ U[1, d_max]
    double coverage_range = 800.0;

    // Keep-on power = energy_per_capacity * capacity * U[1-jitter, 1+jitter].
    double energy_per_capacity = 1.0;
    double energy_jitter = 0.2;
    // Peak usage power per resource as a share of keep-on power; idle draw is
    // energy_idle_fraction of the peak.
    double energy_cpu_share = 0.5;
    double energy_ram_share = 0.3;
    double energy_disk_share = 0.2;
    double energy_idle_fraction = 0.3;

    CoefficientMode coeff_mode = CoefficientMode::Direct;
    double gamma1 = 0.4;
    double gamma2 = 0.25;
    double gamma3 = 0.25;
    double gamma4 = 0.1;
    double w1 = 1.0;
    double w2 = 1.0;
    double w3 = 1.0;
    double w5 = 1.0;

    std::uint64_t seed = 1;
};

/// A sampled, immutable problem instance.
struct Scenario {
    ScenarioConfig config;
    std::vector<MesServer> servers;  // all idle, fully available
    Coefficients coeffs;
    std::vector<std::vector<UERequest>> arrivals;  // arrivals[s - 1] for slot s

    int num_slots() const { return static_cast<int>(arrivals.size()); }
    std::int64_t total_arrivals() const;
};

/// Minimum demand fits current availability and the UE is within coverage.
bool feasibility(const UERequest& req, const MesServer& srv, double distance);

/// feasibility() against every server. Throws ConfigError when the request's
/// distance row does not match the fleet size.
std::vector<bool> feasibility_vector(const UERequest& req, std::span<const MesServer> servers);

/// Returns `req` unchanged, or throws ValidationError naming the first
/// violated field.
const UERequest& validate_request(const UERequest& req, int t_max, double d_max);

/// Throws ConfigError on non-positive means, degenerate ranges and the like.
void validate_config(const ScenarioConfig& config);

/// Samples servers, coefficients and per-slot arrivals. Pure in (config).
Scenario sample_scenario(const ScenarioConfig& config);

/// Flat `key = value` text; `#` starts a comment. Unknown keys are an error.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);
std::string format_config(const ScenarioConfig& config);

}  // namespace mec
