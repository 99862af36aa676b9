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

#include "mecalloc/simulator.hpp"

#include <algorithm>
#include <limits>

#include "parallel.hpp"

namespace mec {

void release_expired(FleetState& state, Slot slot) {
    auto expired = [slot](const VmAllocation& vm) { return vm.end_slot < slot; };
    for (const auto& vm : state.vms) {
        if (expired(vm)) state.servers[vm.server].available += vm.alloc;
    }
    std::erase_if(state.vms, expired);

    // Empty servers snap back to their totals so rounding never accumulates
    // across occupancy cycles.
    std::vector<bool> occupied(state.servers.size(), false);
    for (const auto& vm : state.vms) occupied[vm.server] = true;
    for (std::size_t k = 0; k < state.servers.size(); ++k) {
        if (!occupied[k]) state.servers[k].available = state.servers[k].total;
    }
}

void idle_down(FleetState& state) {
    std::vector<bool> occupied(state.servers.size(), false);
    for (const auto& vm : state.vms) occupied[vm.server] = true;
    for (std::size_t k = 0; k < state.servers.size(); ++k) {
        if (!occupied[k]) state.servers[k].power_state = PowerState::Idle;
    }
}

RunResult run(const Scenario& scenario, const PolicySpec& spec, const SlotObserver& observer) {
    spec.validate();
    FleetState state = FleetState::from_scenario(scenario);
    EnergyLedger ledger(state.servers.size());

    RunResult result;
    result.policy = spec.name();
    result.seed = scenario.config.seed;
    result.slots.reserve(scenario.arrivals.size());

    for (std::size_t i = 0; i < scenario.arrivals.size(); ++i) {
        const Slot slot = static_cast<Slot>(i + 1);
        const auto& arrivals = scenario.arrivals[i];

        release_expired(state, slot);
        const SlotOutcome outcome = run_slot(spec, state, arrivals, slot);
        idle_down(state);

        SlotRecord rec;
        rec.slot = slot;
        rec.arrivals = static_cast<std::int64_t>(arrivals.size());
        rec.served = static_cast<std::int64_t>(outcome.served.size());
        rec.denied = static_cast<std::int64_t>(outcome.denied.size());
        for (std::size_t k = 0; k < state.servers.size(); ++k) {
            auto& srv = state.servers[k];
            if (!srv.is_on()) continue;
            rec.slot_energy += ledger.accrue_slot(k, srv, utilization(srv), slot);
            srv.active_slots += 1;
            rec.active_servers += 1;
        }
        rec.slot_utility = outcome.slot_utility;

        result.total_arrivals += rec.arrivals;
        result.total_served += rec.served;
        result.total_denied += rec.denied;
        result.total_utility += rec.slot_utility;
        result.total_energy += rec.slot_energy;
        rec.cum_utility = result.total_utility;
        rec.cum_energy = result.total_energy;
        result.slots.push_back(rec);

        if (observer) observer(SlotView{slot, state, ledger, outcome, result.slots.back()});
    }

    if (result.total_arrivals == 0) {
        result.service_rate = 1.0;
        result.service_rate_vacuous = true;
    } else {
        result.service_rate =
            static_cast<double>(result.total_served) / static_cast<double>(result.total_arrivals);
    }
    if (result.total_utility > 0) {
        result.energy_per_unit_utility = result.total_energy / result.total_utility;
    } else {
        result.energy_per_unit_utility =
            result.total_energy > 0 ? std::numeric_limits<double>::infinity() : 0.0;
    }
    return result;
}

std::map<std::string, RunResult> compare(std::span<const PolicySpec> policies,
                                         const Scenario& scenario, unsigned threads) {
    std::vector<RunResult> results(policies.size());
    detail::parallel_for(policies.size(), threads, [&](std::size_t i) {
        const Scenario copy = scenario;
        results[i] = run(copy, policies[i]);
    });
    std::map<std::string, RunResult> out;
    for (auto& r : results) {
        auto name = r.policy;
        out.emplace(std::move(name), std::move(r));
    }
    return out;
}

}  // namespace mec
