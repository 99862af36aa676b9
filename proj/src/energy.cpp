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

#include "mecalloc/energy.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace mec {

double capacity(const MesServer& srv, const Coefficients& c) {
    return c.gamma1 * srv.total.cpu + c.gamma2 * srv.total.ram + c.gamma3 * srv.total.disk;
}

double energy_rank(const MesServer& srv, const Coefficients& c) {
    const double cap = capacity(srv, c);
    if (!(cap > 0)) throw std::domain_error(fmt::format("server {} has zero capacity", srv.id));
    return srv.keep_on_power / cap;
}

std::vector<std::size_t> priority_order(std::span<const MesServer> servers, const Coefficients& c) {
    std::vector<double> ranks(servers.size());
    for (std::size_t k = 0; k < servers.size(); ++k) ranks[k] = energy_rank(servers[k], c);
    std::vector<std::size_t> order(servers.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return ranks[a] < ranks[b]; });
    return order;
}

Utilization utilization(const MesServer& srv) {
    auto frac = [](double total, double avail) {
        if (!(total > 0)) return 0.0;
        return std::clamp((total - avail) / total, 0.0, 1.0);
    };
    return {frac(srv.total.cpu, srv.available.cpu), frac(srv.total.ram, srv.available.ram),
            frac(srv.total.disk, srv.available.disk)};
}

namespace {

double linear_power(const PowerRange& p, double g) {
    if (!(g >= 0.0 && g <= 1.0)) throw std::domain_error(fmt::format("utilization {} not in [0, 1]", g));
    return p.idle + (p.peak - p.idle) * g;
}

}  // namespace

UsagePower usage_power(const MesServer& srv, const Utilization& g) {
    return {linear_power(srv.usage_power.cpu, g.cpu), linear_power(srv.usage_power.ram, g.ram),
            linear_power(srv.usage_power.disk, g.disk)};
}

double EnergyLedger::accrue_slot(std::size_t index, const MesServer& srv, const Utilization& g,
                                 Slot slot) {
    auto& e = entries_.at(index);
    if (!srv.is_on()) return 0.0;
    if (e.last_slot == slot) {
        throw std::logic_error(fmt::format("server {} accrued twice in slot {}", srv.id, slot));
    }
    const UsagePower p = usage_power(srv, g);
    e.keep_on += srv.keep_on_power;
    e.usage.cpu += p.cpu;
    e.usage.ram += p.ram;
    e.usage.disk += p.disk;
    e.active_slots += 1;
    e.last_slot = slot;
    return srv.keep_on_power + p.sum();
}

double EnergyLedger::total() const {
    double sum = 0.0;
    for (const auto& e : entries_) sum += e.total();
    return sum;
}

}  // namespace mec
