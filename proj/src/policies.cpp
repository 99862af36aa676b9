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

#include "mecalloc/policies.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "mecalloc/energy.hpp"
#include "mecalloc/utility.hpp"

namespace mec {

std::string PolicySpec::name() const {
    std::string base;
    switch (family) {
        case Family::OverProvision: base = "bo"; break;
        case Family::GreedyMax: base = "gm"; break;
        case Family::MinExpand: base = "minexpand"; break;
        case Family::PowMinExpand: base = "powexpand"; break;
    }
    return scope == Scope::Comprehensive ? "c" + base : base;
}

void PolicySpec::validate() const {
    if (!(headroom > 0 && headroom < 1)) throw ConfigError("headroom must be in (0, 1)");
    if (!(expansion_floor > 0 && expansion_floor < 1)) {
        throw ConfigError("expansion_floor must be in (0, 1)");
    }
    if (activation_penalty && family != Family::PowMinExpand) {
        throw ConfigError("activation penalty is only defined for the power-aware family");
    }
}

PolicySpec policy_from_name(std::string_view name) {
    constexpr Family kFamilies[] = {Family::OverProvision, Family::GreedyMax, Family::MinExpand,
                                    Family::PowMinExpand};
    for (std::size_t i = 0; i < kPolicyNames.size(); ++i) {
        if (kPolicyNames[i] != name) continue;
        PolicySpec spec;
        spec.family = kFamilies[i % 4];
        spec.scope = i < 4 ? Scope::Comprehensive : Scope::CpuOnly;
        spec.activation_penalty = spec.family == Family::PowMinExpand;
        return spec;
    }
    throw ConfigError(fmt::format("unknown policy '{}'", name));
}

std::vector<PolicySpec> parse_policy_list(std::string_view list) {
    std::vector<PolicySpec> out;
    if (list == "all") {
        for (auto n : kPolicyNames) out.push_back(policy_from_name(n));
        return out;
    }
    std::size_t pos = 0;
    while (pos <= list.size()) {
        auto comma = list.find(',', pos);
        if (comma == std::string_view::npos) comma = list.size();
        out.push_back(policy_from_name(list.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return out;
}

PolicySpec counterpart(const PolicySpec& spec) {
    PolicySpec other = spec;
    other.scope = spec.scope == Scope::Comprehensive ? Scope::CpuOnly : Scope::Comprehensive;
    return other;
}

FleetState FleetState::from_scenario(const Scenario& scenario) {
    FleetState st;
    st.servers = scenario.servers;
    st.coeffs = scenario.coeffs;
    st.ranks.reserve(st.servers.size());
    for (const auto& srv : st.servers) st.ranks.push_back(energy_rank(srv, st.coeffs));
    st.priority = priority_order(st.servers, st.coeffs);
    return st;
}

std::size_t FleetState::hosted_vms(std::size_t server) const {
    return static_cast<std::size_t>(
        std::count_if(vms.begin(), vms.end(), [&](const auto& vm) { return vm.server == server; }));
}

Resources FleetState::allocated(std::size_t server) const {
    Resources sum;
    for (const auto& vm : vms) {
        if (vm.server == server) sum += vm.alloc;
    }
    return sum;
}

namespace {

bool below_headroom(double demand, double available, double total, const PolicySpec& spec) {
    if (spec.headroom_basis == HeadroomBasis::Available) {
        return demand < (1.0 - spec.headroom) * available;
    }
    return demand < available - spec.headroom * total;
}

}  // namespace

bool headroom_fits(const UERequest& req, const MesServer& srv, double distance,
                   const PolicySpec& spec) {
    if (distance > srv.coverage_range) return false;
    const Resources demand = spec.allocates_minimum() ? req.minimum() : req.maximum();
    if (!below_headroom(demand.cpu, srv.available.cpu, srv.total.cpu, spec)) return false;
    if (spec.scope == Scope::CpuOnly) return true;
    return below_headroom(demand.ram, srv.available.ram, srv.total.ram, spec) &&
           below_headroom(demand.disk, srv.available.disk, srv.total.disk, spec);
}

double scoped_utility_min(const UERequest& req, double distance, const PolicySpec& spec,
                          const Coefficients& coeffs) {
    return spec.scope == Scope::Comprehensive
               ? utility(req.minimum(), req.duration, distance, coeffs)
               : cpu_only_utility(req.cpu_min, req.duration, distance, coeffs);
}

double scoped_utility_max(const UERequest& req, double distance, const PolicySpec& spec,
                          const Coefficients& coeffs) {
    return spec.scope == Scope::Comprehensive
               ? utility(req.maximum(), req.duration, distance, coeffs)
               : cpu_only_utility(req.cpu_max, req.duration, distance, coeffs);
}

PlacementEvent place(const UERequest& req, FleetState& state, const PolicySpec& spec, Slot slot) {
    PlacementEvent ev;
    ev.request_id = req.id;
    if (req.distances.size() != state.servers.size()) {
        throw ConfigError(fmt::format("request {} has {} distances for {} servers", req.id,
                                      req.distances.size(), state.servers.size()));
    }

    for (std::size_t k : state.priority) {
        MesServer& srv = state.servers[k];
        const double d = req.distances[k];
        if (!headroom_fits(req, srv, d, spec)) continue;

        if (spec.activation_penalty && !srv.is_on()) {
            const double u_min = scoped_utility_min(req, d, spec, state.coeffs);
            if (penalized_utility(u_min, false, state.ranks[k], state.coeffs.gamma5) <= 0) continue;
        }

        Resources alloc = spec.allocates_minimum() ? req.minimum() : req.maximum();
        if (spec.scope == Scope::CpuOnly) {
            // The scheduler never looked at RAM or disk; the VM only comes up
            // if the host happens to have at least the minimum of each.
            if (srv.available.ram < req.ram_min || srv.available.disk < req.disk) {
                ev.outcome = PlaceOutcome::ResourceShortfall;
                ev.server = k;
                return ev;
            }
            alloc.ram = std::min(alloc.ram, srv.available.ram);
        }

        srv.power_state = PowerState::On;
        srv.available -= alloc;

        VmAllocation vm;
        vm.request_id = req.id;
        vm.server = k;
        vm.alloc = alloc;
        vm.start_slot = slot;
        vm.end_slot = slot + req.duration - 1;
        vm.request_min = req.minimum();
        vm.request_max = req.maximum();
        vm.duration = req.duration;
        vm.distance = d;
        state.vms.push_back(vm);

        ev.outcome = PlaceOutcome::Placed;
        ev.server = k;
        ev.alloc = alloc;
        return ev;
    }
    ev.outcome = PlaceOutcome::NoServer;
    return ev;
}

std::vector<std::size_t> order_requests(std::span<const UERequest> requests, const PolicySpec& spec,
                                        const Coefficients& coeffs,
                                        std::span<const MesServer> servers) {
    std::vector<std::size_t> order(requests.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (spec.family != Family::GreedyMax) return order;

    std::vector<double> key(requests.size(), 0.0);
    std::vector<double> u(servers.size());
    std::vector<bool> in_range(servers.size());
    for (std::size_t j = 0; j < requests.size(); ++j) {
        const auto& req = requests[j];
        for (std::size_t k = 0; k < servers.size(); ++k) {
            u[k] = scoped_utility_max(req, req.distances.at(k), spec, coeffs);
            in_range[k] = req.distances[k] <= servers[k].coverage_range;
        }
        if (auto best = optimal_server(u, in_range)) key[j] = u[*best];
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return key[a] > key[b]; });
    return order;
}

namespace {

// Grows `alloc` toward `target` without taking `avail` below `floor`. When the
// floor binds, availability is set to exactly the floor.
void grow(double& alloc, double target, double& avail, double floor) {
    const double gap = target - alloc;
    const double room = avail - floor;
    if (!(gap > 0) || !(room > 0)) return;
    if (gap <= room) {
        alloc = target;
        avail -= gap;
    } else {
        alloc += room;
        avail = floor;
    }
}

double vm_utility_max(const VmAllocation& vm, const PolicySpec& spec, const Coefficients& c) {
    return spec.scope == Scope::Comprehensive
               ? utility(vm.request_max, vm.duration, vm.distance, c)
               : cpu_only_utility(vm.request_max.cpu, vm.duration, vm.distance, c);
}

}  // namespace

void expand_vms(FleetState& state, std::size_t server, const PolicySpec& spec) {
    MesServer& srv = state.servers.at(server);
    const double cpu_floor = spec.expansion_floor * srv.total.cpu;
    const double ram_floor = spec.expansion_floor * srv.total.ram;
    if (srv.available.cpu <= cpu_floor) return;

    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < state.vms.size(); ++i) {
        if (state.vms[i].server == server) idx.push_back(i);
    }
    std::vector<double> key(state.vms.size());
    for (std::size_t i : idx) key[i] = vm_utility_max(state.vms[i], spec, state.coeffs);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (key[a] != key[b]) return key[a] > key[b];
        return state.vms[a].request_id < state.vms[b].request_id;
    });

    // With clamped growth a single pass reaches the fixed point: afterwards
    // every VM is at its maximum or the resource sits at its floor.
    for (std::size_t i : idx) {
        auto& vm = state.vms[i];
        grow(vm.alloc.cpu, vm.request_max.cpu, srv.available.cpu, cpu_floor);
        if (spec.scope == Scope::Comprehensive) {
            grow(vm.alloc.ram, vm.request_max.ram, srv.available.ram, ram_floor);
        }
    }
}

double accrual_rate(const VmAllocation& vm, const Coefficients& coeffs) {
    return utility(vm.alloc, 1.0, vm.distance, coeffs);
}

SlotOutcome run_slot(const PolicySpec& spec, FleetState& state,
                     std::span<const UERequest> arrivals, Slot slot) {
    SlotOutcome out;
    const auto order = order_requests(arrivals, spec, state.coeffs, state.servers);
    out.trace.reserve(order.size());
    for (std::size_t j : order) {
        const auto& req = arrivals[j];
        auto ev = place(req, state, spec, slot);
        (ev.outcome == PlaceOutcome::Placed ? out.served : out.denied).push_back(req.id);
        out.trace.push_back(ev);
    }
    if (spec.expands()) {
        for (std::size_t k : state.priority) expand_vms(state, k, spec);
    }
    for (const auto& vm : state.vms) {
        if (vm.alive_at(slot)) out.slot_utility += accrual_rate(vm, state.coeffs);
    }
    return out;
}

}  // namespace mec
