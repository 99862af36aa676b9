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

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mecalloc/energy.hpp"
#include "mecalloc/model.hpp"
#include "mecalloc/policies.hpp"

namespace mec {

struct SlotRecord {
    Slot slot = 0;
    std::int64_t arrivals = 0;
    std::int64_t served = 0;
    std::int64_t denied = 0;
    std::int64_t active_servers = 0;
    double slot_utility = 0.0;
    double cum_utility = 0.0;
    double slot_energy = 0.0;
    double cum_energy = 0.0;
};

struct RunResult {
    std::string policy;
    std::uint64_t seed = 0;
    std::vector<SlotRecord> slots;

    std::int64_t total_arrivals = 0;
    std::int64_t total_served = 0;
    std::int64_t total_denied = 0;
    double total_utility = 0.0;
    double total_energy = 0.0;
    // 1.0 with the vacuous flag set when nothing arrived.
    double service_rate = 1.0;
    bool service_rate_vacuous = false;
    // total_energy / total_utility; 0 when both are 0, +inf when only utility is.
    double energy_per_unit_utility = 0.0;
};

/// Read-only view handed to a SlotObserver after each slot completes.
struct SlotView {
    Slot slot;
    const FleetState& state;
    const EnergyLedger& ledger;
    const SlotOutcome& outcome;
    const SlotRecord& record;
};

using SlotObserver = std::function<void(const SlotView&)>;

/// Removes VMs whose last slot is before `slot` and returns their resources.
/// A server left with no VMs gets its availability reset to its totals.
void release_expired(FleetState& state, Slot slot);

/// Switches servers hosting no VM to idle.
void idle_down(FleetState& state);

/// Runs every slot of `scenario` under `spec`. Per slot: expiry, placement
/// and expansion, idle-down of empty servers, energy accrual for ON servers,
/// metrics. Deterministic in (scenario, spec).
RunResult run(const Scenario& scenario, const PolicySpec& spec, const SlotObserver& observer = {});

/// Runs each policy on its own copy of `scenario`. Results keyed by policy
/// name. `threads` = 0 picks hardware concurrency.
std::map<std::string, RunResult> compare(std::span<const PolicySpec> policies,
                                         const Scenario& scenario, unsigned threads = 0);

}  // namespace mec
