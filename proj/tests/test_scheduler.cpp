#include <doctest.h>

#include <cmath>
#include <vector>

#include "gdvfs/oracle.hpp"
#include "gdvfs/scheduler.hpp"
#include "test_support.hpp"

using namespace gdvfs;
using testing::Rng;

namespace {

Platform cores(int count, double k = 0.0, double alpha = 2.0, double t_a = 1.0) {
    Platform p;
    p.core_count = count;
    p.dyn_coeff = 1.0;
    p.dyn_exponent = alpha;
    p.idle_ratio = k;
    p.mem_latency = t_a;
    return p;
}

TaskGraph chain3(double d = 0.0) {
    return TaskGraph({{"a", 4}, {"b", 5}, {"c", 6}}, {{"a", "b"}, {"b", "c"}}, d);
}

TaskGraph diamond(std::uint64_t cw, double d = 0.0) {
    return TaskGraph({{"a", cw}, {"b", cw}, {"c", cw}, {"d", cw}},
                     {{"a", "b"}, {"a", "c"}, {"b", "d"}, {"c", "d"}}, d);
}

const Policy kAllPolicies[] = {Policy::CriticalPath, Policy::LargestWork,
                               Policy::FifoTopological};

}  // namespace

TEST_CASE("a chain serializes completely") {
    const Schedule s = list_schedule(chain3(), cores(2), Policy::CriticalPath);
    validate_schedule(s, chain3());
    CHECK(s.level_cycles == std::vector<std::uint64_t>{15, 0});
    CHECK(s.makespan_cycles() == 15);
}

TEST_CASE("independent equal tasks overlap perfectly") {
    const TaskGraph g({{"a", 7}, {"b", 7}}, {}, 0.0);
    const Schedule s = list_schedule(g, cores(2), Policy::LargestWork);
    validate_schedule(s, g);
    CHECK(s.level_cycles == std::vector<std::uint64_t>{0, 7});
}

TEST_CASE("the diamond splits into a serial and a two-wide region") {
    const TaskGraph g = diamond(5);
    for (Policy policy : kAllPolicies) {
        const Schedule s = list_schedule(g, cores(2), policy);
        validate_schedule(s, g);
        CHECK(s.level_cycles == std::vector<std::uint64_t>{10, 5});
        const ParallelismVector w = parallelism_vector(s, cores(2));
        CHECK(w.cycles == std::vector<double>{10.0, 5.0});
    }
}

TEST_CASE("scheduling is deterministic") {
    Rng rng(1001);
    const TaskGraph g = testing::random_dag(rng, 8, 0.3, 0.0);
    for (Policy policy : kAllPolicies) {
        const Schedule a = list_schedule(g, cores(3), policy);
        const Schedule b = list_schedule(g, cores(3), policy);
        REQUIRE(a.placements.size() == b.placements.size());
        for (std::size_t i = 0; i < a.placements.size(); ++i) {
            CHECK(a.placements[i].core == b.placements[i].core);
            CHECK(a.placements[i].start_cycle == b.placements[i].start_cycle);
            CHECK(a.placements[i].end_cycle == b.placements[i].end_cycle);
        }
    }
}

TEST_CASE("random schedules conserve busy-core-weighted cycles") {
    Rng rng(2002);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = rng.uniform_int(2, 10);
        const TaskGraph g = testing::random_dag(rng, n, rng.uniform(0.1, 0.5), 0.0);
        const Platform p = cores(rng.uniform_int(2, 4));
        for (Policy policy : kAllPolicies) {
            const Schedule s = list_schedule(g, p, policy);
            validate_schedule(s, g);  // includes exact integer conservation
            std::uint64_t weighted = 0;
            for (std::size_t m = 0; m < s.level_cycles.size(); ++m)
                weighted += (m + 1) * s.level_cycles[m];
            CHECK(weighted == g.total_cycles());
        }
    }
}

TEST_CASE("schedule metrics expose makespan, weighted makespan and criterion") {
    const Platform p = cores(2, 0.0, 2.0, 1.0);
    SUBCASE("at d = 0 the criterion is the weighted makespan over the budget") {
        const Schedule s = list_schedule(diamond(5), p, Policy::CriticalPath);
        const ScheduleMetrics m = schedule_metrics(s, p, 0.0, 10.0);
        CHECK(m.cycle_makespan == doctest::Approx(15.0));
        CHECK(m.weighted_makespan ==
              doctest::Approx(10.0 + 5.0 * std::pow(2.0, 1.0 / 3.0)));
        CHECK(m.criterion == doctest::Approx(m.weighted_makespan / 10.0));
    }
    SUBCASE("a serial-only schedule has equal makespans when K = 0") {
        const Schedule s = list_schedule(chain3(), p, Policy::CriticalPath);
        const ScheduleMetrics m = schedule_metrics(s, p, 0.3, 100.0);
        CHECK(m.weighted_makespan == doctest::Approx(m.cycle_makespan));
    }
    SUBCASE("the criterion strictly decreases in the budget") {
        const Schedule s = list_schedule(diamond(5), p, Policy::CriticalPath);
        const double tight = schedule_metrics(s, p, 0.2, 4.0).criterion;
        const double loose = schedule_metrics(s, p, 0.2, 8.0).criterion;
        CHECK(loose < tight);
    }
    SUBCASE("budgets below the memory floor are rejected with the floor value") {
        const Schedule s = list_schedule(chain3(), p, Policy::CriticalPath);
        try {
            schedule_metrics(s, p, 1.0, 10.0);  // floor = 15 * 1 * 1
            FAIL("expected InfeasibleDeadline");
        } catch (const InfeasibleDeadline& e) {
            CHECK(e.memory_floor() == doctest::Approx(15.0));
        }
    }
}

TEST_CASE("ranked schedules are sorted by the criterion") {
    const Platform p = cores(2, 0.0, 2.0, 0.05);
    SUBCASE("a single policy yields a single row") {
        const Policy one[] = {Policy::CriticalPath};
        const auto rows = rank_schedules(diamond(5, 0.4), p, 40.0, one);
        CHECK(rows.size() == 1);
    }
    SUBCASE("a chain forces identical rows across policies") {
        const auto rows = rank_schedules(chain3(0.4), p, 40.0, kAllPolicies);
        REQUIRE(rows.size() == 3);
        for (const auto& row : rows) {
            CHECK(row.metrics.criterion == rows[0].metrics.criterion);
            CHECK(row.metrics.cycle_makespan == rows[0].metrics.cycle_makespan);
            CHECK(row.solution.energy.total ==
                  doctest::Approx(rows[0].solution.energy.total).epsilon(1e-12));
        }
    }
    SUBCASE("rows come back ascending in criterion with full solutions attached") {
        Rng rng(3003);
        const TaskGraph g = testing::random_dag(rng, 7, 0.25, 0.3);
        const auto rows = rank_schedules(g, cores(3, 0.1, 2.0, 0.1), 60.0, kAllPolicies);
        REQUIRE(rows.size() == 3);
        for (std::size_t i = 1; i < rows.size(); ++i)
            CHECK(rows[i].metrics.criterion >= rows[i - 1].metrics.criterion);
        for (const auto& row : rows) {
            CHECK(row.solution.completion_time <= 60.0 * (1 + 1e-9));
            CHECK(row.solution.energy.total > 0.0);
        }
    }
}

TEST_CASE("criterion order matches dynamic energy order on the diamond") {
    // Memory-heavy platform; the two distinct diamond schedules are compared
    // by criterion and by solved dynamic energy.
    const Platform p = cores(2, 0.0, 2.0, 1.0);
    const TaskGraph g = diamond(5, 2.0);
    const auto schedules = enumerate_schedules(g, 2);
    REQUIRE(schedules.size() == 2);

    const double budget = 1.1 * 20.0 * 2.0 + 10.0;  // above the serial memory floor
    std::vector<std::pair<double, double>> rows;  // criterion, dynamic energy
    for (const Schedule& s : schedules) {
        const ParallelismVector w = parallelism_vector(s, p);
        const ScheduleMetrics m = metrics_from_parallelism(p, w, 2.0, budget);
        SolveOptions dyn;
        dyn.scope = EnergyScope::DynamicOnly;
        const OptimizationResult r =
            solve_constrained(DeadlineProblem(p, w, 2.0, budget), dyn);
        rows.emplace_back(m.criterion,
                          r.energy.memory_dynamic + r.energy.instruction_dynamic);
    }
    REQUIRE(rows.size() == 2);
    CHECK(((rows[0].first < rows[1].first) == (rows[0].second < rows[1].second)));
}

TEST_CASE("policies can disagree on parallelism when widths differ") {
    // Two long independent tasks plus a short chain: largest-work grabs the
    // long tasks first, the FIFO order interleaves differently.
    const TaskGraph g({{"a", 2}, {"b", 9}, {"c", 9}, {"d", 2}}, {{"a", "d"}}, 0.0);
    const Platform p = cores(2);
    for (Policy policy : kAllPolicies) validate_schedule(list_schedule(g, p, policy), g);
    const Schedule lw = list_schedule(g, p, Policy::LargestWork);
    const Schedule ft = list_schedule(g, p, Policy::FifoTopological);
    CHECK(lw.level_cycles != ft.level_cycles);
}
