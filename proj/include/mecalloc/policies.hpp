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

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mecalloc/model.hpp"

namespace mec {

/// Allocation policies share one skeleton: walk the servers in ascending
/// energy rank and place each request on the first one with enough headroom.
/// Families differ in request ordering, initial allocation size, post-placement
/// expansion and idle-server activation:
///
///   OverProvision   first come first served, allocate maximum demand
///   GreedyMax       highest maximum utility first, allocate maximum demand
///   MinExpand       first come first served, allocate minimum demand, then
///                   grow VMs toward their maximum in decreasing utility order
///   PowMinExpand    MinExpand, but an idle server is only switched on when the
///                   request's penalized minimum utility is positive
///
/// The comprehensive scope checks CPU, RAM and disk and ranks by the full
/// utility. The cpu_only scope reproduces the classic CPU-only schedulers:
/// admission and ranking look at CPU alone, and a request admitted onto a
/// server that turns out to lack RAM or disk is dropped.
enum class Family { OverProvision, GreedyMax, MinExpand, PowMinExpand };
enum class Scope { Comprehensive, CpuOnly };

/// What the headroom fraction is taken of. Available: demand < (1 - h) * avail.
/// Total: demand < avail - h * total.
enum class HeadroomBasis { Available, Total };

struct PolicySpec {
    Family family = Family::OverProvision;
    Scope scope = Scope::Comprehensive;
    double headroom = 0.1;
    double expansion_floor = 0.1;
    bool activation_penalty = false;
    HeadroomBasis headroom_basis = HeadroomBasis::Available;

    bool expands() const {
        return family == Family::MinExpand || family == Family::PowMinExpand;
    }
    bool allocates_minimum() const { return expands(); }

    /// Canonical name, e.g. "cminexpand" or "gm".
    std::string name() const;

    /// Throws ConfigError on an out-of-range fraction or a penalty flag on a
    /// family other than PowMinExpand.
    void validate() const;
};

inline constexpr std::array<std::string_view, 8> kPolicyNames = {
    "cbo", "cgm", "cminexpand", "cpowexpand", "bo", "gm", "minexpand", "powexpand"};

/// Looks up a policy by name. Throws ConfigError on an unknown name.
PolicySpec policy_from_name(std::string_view name);

/// "all" expands to every policy; otherwise a comma-separated list of names.
std::vector<PolicySpec> parse_policy_list(std::string_view list);

/// The other-scope variant of the same family (cbo <-> bo, ...).
PolicySpec counterpart(const PolicySpec& spec);

/// Mutable fleet state of one run.
struct FleetState {
    std::vector<MesServer> servers;
    std::vector<double> ranks;          // energy rank per server
    std::vector<std::size_t> priority;  // server indices, ascending rank
    std::vector<VmAllocation> vms;
    Coefficients coeffs;

    static FleetState from_scenario(const Scenario& scenario);

    std::size_t hosted_vms(std::size_t server) const;
    Resources allocated(std::size_t server) const;
};

/// Headroom admission test, including the coverage-range check. Demand is
/// the maximum for the over-provisioning families and the minimum for the
/// expanding ones; cpu_only scope tests CPU alone.
bool headroom_fits(const UERequest& req, const MesServer& srv, double distance,
                   const PolicySpec& spec);

/// Minimum or maximum utility a policy of `spec`'s scope assigns to `req` on
/// a server at `distance`.
double scoped_utility_min(const UERequest& req, double distance, const PolicySpec& spec,
                          const Coefficients& coeffs);
double scoped_utility_max(const UERequest& req, double distance, const PolicySpec& spec,
                          const Coefficients& coeffs);

enum class PlaceOutcome {
    Placed,
    NoServer,           // nothing passed the headroom test
    ResourceShortfall,  // cpu_only: admitted, but RAM or disk missing
};

struct PlacementEvent {
    std::int64_t request_id = 0;
    PlaceOutcome outcome = PlaceOutcome::NoServer;
    std::optional<std::size_t> server;
    Resources alloc;  // as placed, before any expansion
};

/// Places one request on the first server (in priority order) that passes
/// headroom_fits, activating it if idle. Under the activation penalty an idle
/// server whose penalized minimum utility is not positive is passed over and
/// stays idle. Leaves the state untouched unless the outcome is Placed.
PlacementEvent place(const UERequest& req, FleetState& state, const PolicySpec& spec, Slot slot);

/// Service order for one slot's arrivals as a permutation of indices.
/// GreedyMax sorts by decreasing maximum utility at the request's best
/// in-range server; every other family keeps arrival order. Stable.
std::vector<std::size_t> order_requests(std::span<const UERequest> requests, const PolicySpec& spec,
                                        const Coefficients& coeffs,
                                        std::span<const MesServer> servers);

/// Grows the VMs on `server` toward their maximum, in decreasing maximum
/// utility, never letting availability drop below expansion_floor * total.
/// Comprehensive scope grows CPU and RAM; cpu_only grows CPU only.
void expand_vms(FleetState& state, std::size_t server, const PolicySpec& spec);

struct SlotOutcome {
    std::vector<std::int64_t> served;
    std::vector<std::int64_t> denied;
    std::vector<PlacementEvent> trace;  // in service order
    double slot_utility = 0.0;
};

/// Per-slot utility rate of a VM at its current allocation.
double accrual_rate(const VmAllocation& vm, const Coefficients& coeffs);

/// One policy step: order, place, expand, then accrue this slot's utility
/// over every live VM. Expiry, energy and idle-down are the simulator's job.
SlotOutcome run_slot(const PolicySpec& spec, FleetState& state,
                     std::span<const UERequest> arrivals, Slot slot);

}  // namespace mec
