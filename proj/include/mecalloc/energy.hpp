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

#include <span>
#include <vector>

#include "mecalloc/model.hpp"

namespace mec {

/// g1*cpu_total + g2*ram_total + g3*disk_total.
double capacity(const MesServer& srv, const Coefficients& coeffs);

/// Keep-on power per unit capacity. Lower is better. Throws std::domain_error
/// on zero capacity.
double energy_rank(const MesServer& srv, const Coefficients& coeffs);

/// Server indices in ascending energy rank, lowest index first on ties.
std::vector<std::size_t> priority_order(std::span<const MesServer> servers,
                                        const Coefficients& coeffs);

/// Fractions of each resource in use, each in [0, 1].
struct Utilization {
    double cpu = 0.0;
    double ram = 0.0;
    double disk = 0.0;
};

Utilization utilization(const MesServer& srv);

/// Per-slot usage power of each resource under the linear model.
struct UsagePower {
    double cpu = 0.0;
    double ram = 0.0;
    double disk = 0.0;

    double sum() const { return cpu + ram + disk; }
};

/// idle + (peak - idle) * G per resource. Throws std::domain_error when a
/// utilization is outside [0, 1].
UsagePower usage_power(const MesServer& srv, const Utilization& g);

/// Accumulated energy of a fleet. Accruals are per server and per slot.
class EnergyLedger {
public:
    struct Entry {
        double keep_on = 0.0;
        UsagePower usage;
        std::int64_t active_slots = 0;
        Slot last_slot = 0;

        double total() const { return keep_on + usage.sum(); }
    };

    explicit EnergyLedger(std::size_t num_servers) : entries_(num_servers) {}

    /// Charges one ON slot to server `index` and returns the amount charged.
    /// Idle servers accrue nothing. Throws std::logic_error on a second accrual
    /// for the same server in the same slot.
    double accrue_slot(std::size_t index, const MesServer& srv, const Utilization& g, Slot slot);

    const Entry& entry(std::size_t index) const { return entries_.at(index); }
    std::size_t size() const { return entries_.size(); }

    /// Keep-on plus usage energy of one server.
    double server_total(std::size_t index) const { return entries_.at(index).total(); }

    /// Sum of server totals.
    double total() const;

private:
    std::vector<Entry> entries_;
};

}  // namespace mec
