#include <doctest.h>

#include <sstream>

#include "mecalloc/energy.hpp"
#include "mecalloc/experiment.hpp"
#include "mecalloc/simulator.hpp"
#include "test_support.hpp"

using namespace mec;

namespace {

Scenario one_server_scenario() {
    Scenario sc;
    sc.config.num_servers = 1;
    sc.config.num_slots = 3;
    MesServer s;
    s.id = 0;
    s.total = {15, 10, 25};
    s.available = s.total;
    s.keep_on_power = 14.75;
    s.usage_power = {{1, 2}, {1, 2}, {1, 2}};
    s.coverage_range = 800;
    sc.servers.push_back(s);
    sc.coeffs = {0.4, 0.25, 0.25, 0.1, 1.0 / 14.75};

    UERequest q;
    q.id = 1;
    q.cpu_min = q.cpu_max = 5;
    q.ram_min = q.ram_max = 3;
    q.disk = 4;
    q.duration = 2;
    q.arrival_slot = 1;
    q.distances = {100};
    sc.arrivals = {{q}, {}, {}};
    return sc;
}

}  // namespace

TEST_CASE("one request on one server, traced by hand") {
    const auto sc = one_server_scenario();
    std::vector<bool> on;
    const auto r = run(sc, policy_from_name("cbo"), [&](const SlotView& v) {
        on.push_back(v.state.servers[0].is_on());
    });
    CHECK(r.total_served == 1);
    CHECK(r.total_denied == 0);
    CHECK(r.service_rate == 1.0);
    CHECK_FALSE(r.service_rate_vacuous);
    CHECK(rel_eq(r.total_utility, 0.0075));
    CHECK(rel_eq(r.slots[0].slot_utility, 0.00375));
    CHECK(rel_eq(r.slots[1].slot_utility, 0.00375));
    CHECK(r.slots[2].slot_utility == 0);
    CHECK(on == std::vector<bool>{true, true, false});
    CHECK(r.slots[0].active_servers == 1);
    CHECK(r.slots[2].active_servers == 0);
    CHECK(r.slots[2].slot_energy == 0);
    // keep-on 14.75 plus linear usage at G = (5/15, 3/10, 4/25), two slots.
    const double usage = (1 + 5.0 / 15) + (1 + 0.3) + (1 + 0.16);
    CHECK(rel_eq(r.total_energy, 2 * (14.75 + usage)));
}

TEST_CASE("no arrivals gives a vacuous service rate") {
    auto sc = one_server_scenario();
    sc.arrivals = {{}, {}};
    const auto r = run(sc, policy_from_name("cgm"));
    CHECK(r.service_rate == 1.0);
    CHECK(r.service_rate_vacuous);
    CHECK(r.total_energy == 0);
    CHECK(r.energy_per_unit_utility == 0);
}

TEST_CASE("release_expired") {
    auto sc = one_server_scenario();
    sc.servers[0].total = {20, 20, 20};
    sc.servers[0].available = sc.servers[0].total;
    auto st = FleetState::from_scenario(sc);
    const auto spec = policy_from_name("cbo");
    auto q = sc.arrivals[0][0];
    q.duration = 1;
    place(q, st, spec, 1);  // alloc_c = 5, ends slot 1
    q.id = 2;
    q.cpu_min = q.cpu_max = 2;
    place(q, st, spec, 1);
    q.id = 3;
    q.duration = 3;
    place(q, st, spec, 1);  // survives
    const double before = st.servers[0].available.cpu;

    release_expired(st, 1);
    CHECK(st.vms.size() == 3);
    CHECK(st.servers[0].available.cpu == before);

    release_expired(st, 2);
    CHECK(st.vms.size() == 1);
    CHECK(rel_eq(st.servers[0].available.cpu, before + 5 + 2));

    release_expired(st, 4);
    CHECK(st.vms.empty());
    CHECK(st.servers[0].available == st.servers[0].total);
}

TEST_CASE("runs are deterministic") {
    ScenarioConfig cfg;
    cfg.num_slots = 150;
    cfg.traffic_mean = 8;
    cfg.seed = 42;
    const auto sc = sample_scenario(cfg);
    for (const auto& spec : parse_policy_list("all")) {
        std::ostringstream a, b;
        write_slot_csv_rows(a, run(sc, spec));
        write_slot_csv_rows(b, run(sc, spec));
        CHECK(a.str() == b.str());
    }
}

TEST_CASE("resource conservation and accounting over a full run") {
    ScenarioConfig cfg;
    cfg.num_slots = 300;
    cfg.traffic_mean = 12;
    cfg.seed = 5;
    const auto sc = sample_scenario(cfg);
    for (const auto& spec : parse_policy_list("all")) {
        CAPTURE(spec.name());
        const auto r = run(sc, spec, [&](const SlotView& v) {
            for (std::size_t k = 0; k < v.state.servers.size(); ++k) {
                const auto& s = v.state.servers[k];
                const auto used = v.state.allocated(k);
                CHECK(rel_eq(used.cpu + s.available.cpu, s.total.cpu, 1e-9));
                CHECK(rel_eq(used.ram + s.available.ram, s.total.ram, 1e-9));
                CHECK(rel_eq(used.disk + s.available.disk, s.total.disk, 1e-9));
                CHECK(s.available.cpu >= 0);
                CHECK(s.available.ram >= 0);
                CHECK(s.available.disk >= 0);
                CHECK(s.is_on() == (v.state.hosted_vms(k) > 0));
            }
            CHECK(rel_eq(v.ledger.total(), v.record.cum_energy, 1e-9));
        });
        CHECK(r.total_served + r.total_denied == sc.total_arrivals());
        CHECK(r.service_rate >= 0);
        CHECK(r.service_rate <= 1);
    }
}

TEST_CASE("utility of never-expanded VMs equals the closed form") {
    // Over-provisioning never expands, so each served request earns its full
    // maximum-demand utility over its duration, truncated at the horizon.
    ScenarioConfig cfg;
    cfg.num_slots = 100;
    cfg.seed = 77;
    const auto sc = sample_scenario(cfg);
    const auto spec = policy_from_name("cbo");
    double expected = 0;
    run(sc, spec, [&](const SlotView& v) {
        for (const auto& ev : v.outcome.trace) {
            if (ev.outcome != PlaceOutcome::Placed) continue;
            const auto& vm = *std::find_if(v.state.vms.begin(), v.state.vms.end(),
                                           [&](const auto& x) { return x.request_id == ev.request_id; });
            const auto slots = std::min<Slot>(vm.end_slot, cfg.num_slots) - vm.start_slot + 1;
            expected += (0.4 * vm.alloc.cpu + 0.25 * vm.alloc.ram + 0.25 * vm.alloc.disk) * 0.1 *
                        static_cast<double>(slots) / vm.distance;
        }
    });
    CHECK(rel_eq(run(sc, spec).total_utility, expected, 1e-9));
}

TEST_CASE("compare") {
    ScenarioConfig cfg;
    cfg.num_slots = 200;
    cfg.seed = 3;
    const auto sc = sample_scenario(cfg);

    const auto all = parse_policy_list("all");
    const auto results = compare(all, sc, 4);
    CHECK(results.size() == 8);
    for (const auto& [name, r] : results) {
        CHECK(r.policy == name);
        CHECK(r.total_served + r.total_denied == sc.total_arrivals());
    }
    const auto single = parse_policy_list("cgm");
    CHECK(compare(single, sc).size() == 1);

    // Parallel and sequential agree exactly.
    const auto seq = compare(all, sc, 1);
    for (const auto& [name, r] : results) CHECK(seq.at(name).total_utility == r.total_utility);
}

TEST_CASE("scope degeneracy: without RAM and disk pressure both scopes place identically") {
    // Zero RAM/disk demand and huge RAM/disk supply: the CPU-only view is the
    // whole picture, so each family must make the same decisions in both scopes.
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        ScenarioConfig cfg;
        cfg.num_slots = 200;
        cfg.traffic_mean = 10;
        cfg.seed = seed;
        auto sc = sample_scenario(cfg);
        for (auto& s : sc.servers) {
            s.total.ram = s.total.disk = 1e12;
            s.available = s.total;
        }
        for (auto& slot : sc.arrivals) {
            for (auto& q : slot) q.ram_min = q.ram_max = q.disk = 0;
        }
        for (auto name : {"cbo", "cgm", "cminexpand", "cpowexpand"}) {
            const auto spec = policy_from_name(name);
            std::vector<std::vector<PlacementEvent>> a, b;
            run(sc, spec, [&](const SlotView& v) { a.push_back(v.outcome.trace); });
            run(sc, counterpart(spec), [&](const SlotView& v) { b.push_back(v.outcome.trace); });
            REQUIRE(a.size() == b.size());
            for (std::size_t s = 0; s < a.size(); ++s) {
                REQUIRE(a[s].size() == b[s].size());
                for (std::size_t i = 0; i < a[s].size(); ++i) {
                    CHECK(a[s][i].request_id == b[s][i].request_id);
                    CHECK(a[s][i].server == b[s][i].server);
                    CHECK(a[s][i].alloc.cpu == b[s][i].alloc.cpu);
                }
            }
        }
    }
}

TEST_CASE("equal service with non-binding RAM and equal distances") {
    ScenarioConfig cfg;
    cfg.num_slots = 200;
    cfg.seed = 9;
    cfg.server_ram_mean = 1e6;
    cfg.server_ram_std = 0;
    cfg.server_disk_mean = 1e6;
    cfg.server_disk_std = 0;
    cfg.req_disk_lo = cfg.req_disk_hi = 0.001;
    auto sc = sample_scenario(cfg);
    for (auto& slot : sc.arrivals) {
        for (auto& q : slot) std::fill(q.distances.begin(), q.distances.end(), 100.0);
    }
    const auto specs = parse_policy_list("cbo,bo");
    const auto res = compare(specs, sc);
    CHECK(res.at("cbo").service_rate == res.at("bo").service_rate);
}
