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

#include "mecalloc/utility.hpp"

#include <fmt/format.h>

namespace mec {

double utility(double cpu, double ram, double disk, double slots, double distance,
               const Coefficients& c) {
    if (!(distance > 0)) throw std::domain_error(fmt::format("distance {} <= 0", distance));
    return (c.gamma1 * cpu + c.gamma2 * ram + c.gamma3 * disk) * c.gamma4 * slots / distance;
}

double cpu_only_utility(double cpu, double slots, double distance, const Coefficients& c) {
    return utility(cpu, 0.0, 0.0, slots, distance, c);
}

UtilityBounds utility_bounds(const UERequest& req, double distance, const Coefficients& c) {
    return {utility(req.minimum(), req.duration, distance, c),
            utility(req.maximum(), req.duration, distance, c)};
}

UtilityBounds cpu_only_utility_bounds(const UERequest& req, double distance,
                                      const Coefficients& c) {
    return {cpu_only_utility(req.cpu_min, req.duration, distance, c),
            cpu_only_utility(req.cpu_max, req.duration, distance, c)};
}

Coefficients derive_coefficients(const CoefficientSettings& s) {
    Coefficients out;
    if (s.mode == CoefficientMode::Direct) {
        if (!(s.gamma1 > 0 && s.gamma2 > 0 && s.gamma3 > 0 && s.gamma4 > 0)) {
            throw ConfigError("gamma1..gamma4 must be positive");
        }
        out.gamma1 = s.gamma1;
        out.gamma2 = s.gamma2;
        out.gamma3 = s.gamma3;
        out.gamma4 = s.gamma4;
    } else {
        if (!(s.fleet_total.cpu > 0 && s.fleet_total.ram > 0 && s.fleet_total.disk > 0)) {
            throw ConfigError("derived coefficients need positive fleet totals");
        }
        if (!(s.d_max > 0 && s.t_max > 0)) throw ConfigError("d_max and t_max must be positive");
        if (!(s.w1 > 0 && s.w2 > 0 && s.w3 > 0)) throw ConfigError("w1..w3 must be positive");
        out.gamma1 = s.w1 / s.fleet_total.cpu;
        out.gamma2 = s.w2 / s.fleet_total.ram;
        out.gamma3 = s.w3 / s.fleet_total.disk;
        out.gamma4 = s.d_max / s.t_max;
    }
    if (!(s.e_max > 0 && s.w5 > 0)) throw ConfigError("e_max and w5 must be positive");
    out.gamma5 = s.w5 / s.e_max;
    return out;
}

std::optional<std::size_t> optimal_server(std::span<const double> utilities,
                                          const std::vector<bool>& feasible) {
    if (utilities.size() != feasible.size()) {
        throw std::invalid_argument("utilities and feasibility differ in length");
    }
    std::optional<std::size_t> best;
    for (std::size_t k = 0; k < utilities.size(); ++k) {
        if (!feasible[k]) continue;
        if (!best || utilities[k] > utilities[*best]) best = k;
    }
    return best;
}

}  // namespace mec
