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

// Test-only, straight-line transcription of the four allocation procedures for
// a single slot, in both scopes. Shares no code with the library beyond the
// plain data types it reads.

#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "mecalloc/model.hpp"

namespace mec::oracle {

enum class RefFamily { BO, GM, MinExpand, PowExpand };

struct RefServer {
    double c_total, r_total, h_total;
    double c_av, r_av, h_av;
    double keep_on;
    bool on;
    double range;
};

struct RefDecision {
    std::int64_t request_id;
    int server;  // -1 when denied
    double c, r, h;
};

inline double ref_u(double c, double r, double h, double t, double d, const Coefficients& g) {
    return (g.gamma1 * c + g.gamma2 * r + g.gamma3 * h) * g.gamma4 * t / d;
}

/// Decisions in the order requests were served, with allocations as they stand
/// after the expansion phase.
inline std::vector<RefDecision> reference_slot(std::vector<RefServer> mes,
                                               std::vector<UERequest> ue, const Coefficients& g,
                                               RefFamily family, bool cpu_only) {
    const std::size_t n = mes.size();
    const bool minimum_first = family == RefFamily::MinExpand || family == RefFamily::PowExpand;

    // line 1: sort all MESs into increasing order of p_k
    std::vector<double> p(n);
    for (std::size_t k = 0; k < n; ++k) {
        p[k] = mes[k].keep_on /
               (g.gamma1 * mes[k].c_total + g.gamma2 * mes[k].r_total + g.gamma3 * mes[k].h_total);
    }
    std::vector<std::size_t> sorted(n);
    std::iota(sorted.begin(), sorted.end(), std::size_t{0});
    std::stable_sort(sorted.begin(), sorted.end(),
                     [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });

    auto umax = [&](const UERequest& q, double d) {
        return cpu_only ? ref_u(q.cpu_max, 0, 0, q.duration, d, g)
                        : ref_u(q.cpu_max, q.ram_max, q.disk, q.duration, d, g);
    };
    auto umin = [&](const UERequest& q, double d) {
        return cpu_only ? ref_u(q.cpu_min, 0, 0, q.duration, d, g)
                        : ref_u(q.cpu_min, q.ram_min, q.disk, q.duration, d, g);
    };

    // GM line 3: sort incoming UEs into decreasing order of (best in-range) u_max
    if (family == RefFamily::GM) {
        std::vector<double> key(ue.size(), 0.0);
        for (std::size_t j = 0; j < ue.size(); ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                if (ue[j].distances[k] <= mes[k].range) {
                    key[j] = std::max(key[j], umax(ue[j], ue[j].distances[k]));
                }
            }
        }
        std::vector<std::size_t> idx(ue.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return key[a] > key[b]; });
        std::vector<UERequest> reordered;
        for (auto i : idx) reordered.push_back(ue[i]);
        ue = std::move(reordered);
    }

    struct Vm {
        std::size_t decision;
        int k;
        double umax;
        double c_max, r_max;
    };
    std::vector<RefDecision> out;
    std::vector<Vm> vms;

    for (const auto& q : ue) {  // for UE j
        RefDecision dec{q.id, -1, 0, 0, 0};
        for (std::size_t k : sorted) {  // for MES k
            auto& s = mes[k];
            const double d = q.distances[k];
            if (d > s.range) continue;
            const double c = minimum_first ? q.cpu_min : q.cpu_max;
            const double r = minimum_first ? q.ram_min : q.ram_max;
            const double h = q.disk;
            bool fits = c < 0.9 * s.c_av;
            if (!cpu_only) fits = fits && r < 0.9 * s.r_av && h < 0.9 * s.h_av;
            if (!fits) continue;
            if (family == RefFamily::PowExpand && !s.on) {
                const double u_pen = umin(q, d) - g.gamma5 * p[k];
                if (!(u_pen > 0)) continue;  // idle server stays idle
            }
            if (cpu_only && (s.r_av < q.ram_min || s.h_av < h)) break;  // VM cannot be created
            const double r_alloc = cpu_only ? std::min(r, s.r_av) : r;
            s.on = true;
            s.c_av -= c;
            s.r_av -= r_alloc;
            s.h_av -= h;
            dec = {q.id, static_cast<int>(k), c, r_alloc, h};
            vms.push_back({out.size(), static_cast<int>(k), umax(q, d), q.cpu_max, q.ram_max});
            break;
        }
        out.push_back(dec);
    }

    if (minimum_first) {
        for (std::size_t k : sorted) {
            auto& s = mes[k];
            if (!(s.c_av > 0.1 * s.c_total)) continue;  // while c_kav > 0.1 c_k
            std::vector<Vm> here;
            for (const auto& vm : vms) {
                if (vm.k == static_cast<int>(k)) here.push_back(vm);
            }
            std::stable_sort(here.begin(), here.end(), [&](const Vm& a, const Vm& b) {
                if (a.umax != b.umax) return a.umax > b.umax;
                return out[a.decision].request_id < out[b.decision].request_id;
            });
            for (const auto& vm : here) {  // expand VM j to its maximum, clamped at the floor
                auto& dec = out[vm.decision];
                double room = s.c_av - 0.1 * s.c_total;
                double want = vm.c_max - dec.c;
                if (want > 0 && room > 0) {
                    if (want <= room) {
                        dec.c += want;
                        s.c_av -= want;
                    } else {
                        dec.c += room;
                        s.c_av = 0.1 * s.c_total;
                    }
                }
                if (!cpu_only) {
                    room = s.r_av - 0.1 * s.r_total;
                    want = vm.r_max - dec.r;
                    if (want > 0 && room > 0) {
                        if (want <= room) {
                            dec.r += want;
                            s.r_av -= want;
                        } else {
                            dec.r += room;
                            s.r_av = 0.1 * s.r_total;
                        }
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace mec::oracle
