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

#include <optional>
#include <span>
#include <stdexcept>

#include "mecalloc/model.hpp"

namespace mec {

struct UtilityBounds {
    double u_min = 0.0;
    double u_max = 0.0;
};

/// (g1*cpu + g2*ram + g3*disk) * g4 * slots / distance.
///
/// Throws std::domain_error when distance <= 0.
double utility(double cpu, double ram, double disk, double slots, double distance,
               const Coefficients& coeffs);

inline double utility(const Resources& alloc, double slots, double distance,
                      const Coefficients& coeffs) {
    return utility(alloc.cpu, alloc.ram, alloc.disk, slots, distance, coeffs);
}

/// Utility as seen by a CPU-only scheduler: RAM and disk terms dropped.
double cpu_only_utility(double cpu, double slots, double distance, const Coefficients& coeffs);

/// Utility at the request's minimum and maximum demand for one server.
UtilityBounds utility_bounds(const UERequest& req, double distance, const Coefficients& coeffs);

UtilityBounds cpu_only_utility_bounds(const UERequest& req, double distance,
                                      const Coefficients& coeffs);

/// Direct mode passes gamma1..gamma4 through; derived mode computes them from
/// the weights, fleet totals, d_max and t_max. gamma5 = w5 / e_max in both.
/// Throws ConfigError on non-positive inputs the chosen mode depends on.
Coefficients derive_coefficients(const CoefficientSettings& settings);

/// Utility minus gamma5 * energy_rank when the candidate server is idle.
inline double penalized_utility(double u, bool server_on, double energy_rank, double gamma5) {
    return server_on ? u : u - gamma5 * energy_rank;
}

/// Index of the largest utility among feasible entries, lowest index on
/// ties, nullopt when nothing is feasible.
///
/// Throws std::invalid_argument on length mismatch.
std::optional<std::size_t> optimal_server(std::span<const double> utilities,
                                          const std::vector<bool>& feasible);

}  // namespace mec
