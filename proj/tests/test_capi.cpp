// Exercises the shared-library surface: handles, error codes and the
// thread-local failure message. Links against gdvfs.h only.
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "gdvfs.h"

namespace {

gdvfs_platform_params base_params() {
    gdvfs_platform_params p{};
    p.core_count = 4;
    p.c1 = 1.0;
    p.c2 = 0.1;
    p.c3 = 0.5;
    p.alpha = 2.0;
    p.idle_ratio = 0.1;
    p.mem_latency = 0.01;
    return p;
}

struct Fixture {
    gdvfs_platform* platform = nullptr;
    gdvfs_problem* problem = nullptr;
    std::vector<double> w = {4.0, 0.0, 2.0, 0.0};
    double d = 0.5;
    double budget = 8.0;

    Fixture() {
        const gdvfs_platform_params p = base_params();
        REQUIRE(gdvfs_platform_create(&p, &platform) == GDVFS_OK);
        REQUIRE(gdvfs_problem_create(platform, w.data(), w.size(), d, budget, &problem) ==
                GDVFS_OK);
    }
    ~Fixture() {
        gdvfs_problem_destroy(problem);
        gdvfs_platform_destroy(platform);
    }
};

}  // namespace

TEST_CASE("platform creation validates and reports errors") {
    gdvfs_platform_params p = base_params();
    gdvfs_platform* platform = nullptr;
    CHECK(gdvfs_platform_create(&p, &platform) == GDVFS_OK);
    CHECK(gdvfs_platform_cores(platform) == 4);
    double mp = 0.0;
    CHECK(gdvfs_effective_cores(platform, 2, &mp) == GDVFS_OK);
    CHECK(mp == doctest::Approx(2.2));
    gdvfs_platform_destroy(platform);

    p.alpha = 1.0;
    gdvfs_platform* bad = nullptr;
    CHECK(gdvfs_platform_create(&p, &bad) == GDVFS_ERR_INVALID_ARGUMENT);
    CHECK(std::strlen(gdvfs_last_error()) > 0);
    CHECK(gdvfs_platform_create(nullptr, &bad) == GDVFS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("model evaluation through the C surface") {
    Fixture fx;
    double power = 0.0;
    CHECK(gdvfs_chip_power(fx.platform, 2, 2.0, &power) == GDVFS_OK);
    CHECK(power == doctest::Approx(2.2 * 4.0 + 0.1 * 2.0 + 0.5));
    double per_cycle = 0.0;
    CHECK(gdvfs_energy_per_cycle(fx.platform, 2, 2.0, &per_cycle) == GDVFS_OK);
    CHECK(per_cycle * 2.0 == doctest::Approx(power).epsilon(1e-12));
    CHECK(gdvfs_chip_power(fx.platform, 9, 2.0, &power) == GDVFS_ERR_INVALID_ARGUMENT);

    CHECK(gdvfs_problem_memory_floor(fx.problem) == doctest::Approx(6.0 * 0.5 * 0.01));
    double floor = 0.0;
    CHECK(gdvfs_memory_floor(fx.w.data(), fx.w.size(), fx.d, 0.01, &floor) == GDVFS_OK);
    CHECK(floor == doctest::Approx(gdvfs_problem_memory_floor(fx.problem)));

    const double nan = std::nan("");
    const std::vector<double> f = {1.0, nan, 2.0, nan};
    gdvfs_energy_breakdown energy{};
    CHECK(gdvfs_total_energy(fx.problem, f.data(), f.size(), &energy) == GDVFS_OK);
    CHECK(energy.total == doctest::Approx(energy.memory_dynamic + energy.instruction_dynamic +
                                          energy.static_energy));
    double time = 0.0;
    CHECK(gdvfs_completion_time(fx.problem, f.data(), f.size(), &time) == GDVFS_OK);
    CHECK(time == doctest::Approx(4.0 / 1.0 + 2.0 / 2.0 + floor));
}

TEST_CASE("infeasible problems surface the memory floor in the message") {
    const gdvfs_platform_params p = base_params();
    gdvfs_platform* platform = nullptr;
    REQUIRE(gdvfs_platform_create(&p, &platform) == GDVFS_OK);
    const std::vector<double> w = {100.0, 0.0, 0.0, 0.0};
    gdvfs_problem* problem = nullptr;
    CHECK(gdvfs_problem_create(platform, w.data(), w.size(), 10.0, 1.0, &problem) ==
          GDVFS_ERR_INFEASIBLE);
    CHECK(std::string(gdvfs_last_error()).find("memory floor") != std::string::npos);
    gdvfs_platform_destroy(platform);
}

TEST_CASE("the solver handle exposes the full result") {
    Fixture fx;
    gdvfs_result* result = nullptr;
    REQUIRE(gdvfs_solve(fx.problem, nullptr, &result) == GDVFS_OK);
    std::vector<double> f(4);
    CHECK(gdvfs_result_frequencies(result, f.data(), f.size()) == GDVFS_OK);
    CHECK(std::isfinite(f[0]));
    CHECK(!std::isfinite(f[1]));  // unused level carries NaN
    gdvfs_energy_breakdown energy{};
    CHECK(gdvfs_result_energy(result, &energy) == GDVFS_OK);
    CHECK(energy.total > 0.0);
    CHECK(gdvfs_result_completion_time(result) <= fx.budget * (1 + 1e-9));
    if (gdvfs_result_deadline_binding(result))
        CHECK(gdvfs_result_dual_multiplier(result) > 0.0);
    CHECK(gdvfs_result_frequencies(result, f.data(), 2) == GDVFS_ERR_INVALID_ARGUMENT);
    gdvfs_result_destroy(result);

    gdvfs_solve_options options{};
    options.dynamic_only = 1;
    gdvfs_result* dynamic = nullptr;
    REQUIRE(gdvfs_solve(fx.problem, &options, &dynamic) == GDVFS_OK);
    CHECK(gdvfs_result_deadline_binding(dynamic) == 1);  // dynamic energy always binds
    gdvfs_result_destroy(dynamic);

    options.dynamic_only = 0;
    options.frequency_cap = 1e-6;  // unreachable deadline under this cap
    gdvfs_result* capped = nullptr;
    CHECK(gdvfs_solve(fx.problem, &options, &capped) == GDVFS_ERR_INFEASIBLE);
}

TEST_CASE("analytical relations are reachable through the C surface") {
    Fixture fx;
    double f_star = 0.0;
    CHECK(gdvfs_unconstrained_level_frequency(fx.platform, fx.d, 2, &f_star) == GDVFS_OK);
    CHECK(f_star > 0.0);

    gdvfs_platform_params no_offset = base_params();
    no_offset.c3 = 0.0;
    gdvfs_platform* degenerate = nullptr;
    REQUIRE(gdvfs_platform_create(&no_offset, &degenerate) == GDVFS_OK);
    CHECK(gdvfs_unconstrained_level_frequency(degenerate, fx.d, 2, &f_star) ==
          GDVFS_ERR_NO_INTERIOR_MINIMUM);
    gdvfs_platform_destroy(degenerate);

    double residual = 1.0;
    CHECK(gdvfs_ratio_relation_residual(fx.platform, fx.d, 3, 3, 2.0, 2.0, &residual) ==
          GDVFS_OK);
    CHECK(residual == doctest::Approx(0.0));

    gdvfs_ratio_bounds bounds{};
    CHECK(gdvfs_ratio_bounds_get(fx.platform, 3, 1, &bounds) == GDVFS_OK);
    CHECK(bounds.lower < bounds.upper_dynamic);
    CHECK(bounds.upper_dynamic < bounds.upper_total);
    CHECK(gdvfs_ratio_bounds_get(fx.platform, 1, 3, &bounds) == GDVFS_ERR_INVALID_ARGUMENT);

    double violation = 0.0;
    const std::vector<double> flat = {1.0, std::nan(""), 1.0, std::nan("")};
    CHECK(gdvfs_max_ratio_bound_violation(fx.platform, fx.w.data(), flat.data(), 4, 0,
                                          &violation) == GDVFS_OK);
    CHECK(violation <= 0.0);  // equal frequencies sit inside the total interval
}

TEST_CASE("cubic ratio calls map alpha != 2 to the unsupported code") {
    Fixture fx;
    double x = 0.0;
    CHECK(gdvfs_cubic_ratio_from_overload(fx.platform, 4, 0.0, &x) == GDVFS_OK);
    double at_zero = 0.0, at_high = 0.0;
    CHECK(gdvfs_cubic_ratio_limits(fx.platform, 4, &at_zero, &at_high) == GDVFS_OK);
    CHECK(x == doctest::Approx(at_zero).epsilon(1e-12));
    CHECK(gdvfs_cubic_ratio(fx.platform, 0.5, 4, 2.0, &x) == GDVFS_OK);

    const double gs[3] = {0.0, 1.0, 10.0};
    double ratios[3] = {0, 0, 0};
    CHECK(gdvfs_sweep_ratio_vs_overload(fx.platform, 4, gs, ratios, 3) == GDVFS_OK);
    CHECK(ratios[0] < ratios[1]);
    CHECK(ratios[1] < ratios[2]);

    gdvfs_platform_params cubic_less = base_params();
    cubic_less.alpha = 2.5;
    gdvfs_platform* other = nullptr;
    REQUIRE(gdvfs_platform_create(&cubic_less, &other) == GDVFS_OK);
    CHECK(gdvfs_cubic_ratio_from_overload(other, 4, 1.0, &x) == GDVFS_ERR_UNSUPPORTED);
    gdvfs_platform_destroy(other);
}

TEST_CASE("reference frequencies round-trip through the problem handle") {
    Fixture fx;
    double dyn = 0.0, total = 0.0;
    CHECK(gdvfs_reference_frequency_dynamic(fx.problem, &dyn) == GDVFS_OK);
    CHECK(gdvfs_reference_frequency_total(fx.problem, &total) == GDVFS_OK);
    CHECK(dyn > 0.0);
    CHECK(total >= dyn * (1 - 1e-12));

    std::vector<double> induced(4);
    CHECK(gdvfs_reference_assignment(fx.problem, dyn, induced.data(), 4) == GDVFS_OK);
    double time = 0.0;
    CHECK(gdvfs_completion_time(fx.problem, induced.data(), 4, &time) == GDVFS_OK);
    CHECK(time == doctest::Approx(fx.budget).epsilon(1e-10));
}

TEST_CASE("graphs, schedules and rankings work end to end") {
    gdvfs_graph* graph = nullptr;
    REQUIRE(gdvfs_graph_create(0.4, &graph) == GDVFS_OK);
    CHECK(gdvfs_graph_add_task(graph, "a", 5) == GDVFS_OK);
    CHECK(gdvfs_graph_add_task(graph, "b", 5) == GDVFS_OK);
    CHECK(gdvfs_graph_add_task(graph, "c", 5) == GDVFS_OK);
    CHECK(gdvfs_graph_add_task(graph, "d", 5) == GDVFS_OK);
    CHECK(gdvfs_graph_add_edge(graph, "a", "b") == GDVFS_OK);
    CHECK(gdvfs_graph_add_edge(graph, "a", "c") == GDVFS_OK);
    CHECK(gdvfs_graph_add_edge(graph, "b", "d") == GDVFS_OK);
    CHECK(gdvfs_graph_add_edge(graph, "c", "d") == GDVFS_OK);
    CHECK(gdvfs_graph_validate(graph) == GDVFS_OK);

    const gdvfs_platform_params params = base_params();
    gdvfs_platform* platform = nullptr;
    REQUIRE(gdvfs_platform_create(&params, &platform) == GDVFS_OK);

    gdvfs_schedule* schedule = nullptr;
    REQUIRE(gdvfs_list_schedule(graph, platform, GDVFS_POLICY_CRITICAL_PATH, &schedule) ==
            GDVFS_OK);
    CHECK(gdvfs_schedule_task_count(schedule) == 4);
    CHECK(std::string(gdvfs_schedule_task_id(schedule, 0)) == "a");
    int32_t core = -1;
    uint64_t start = 1, end = 0;
    CHECK(gdvfs_schedule_placement(schedule, 0, &core, &start, &end) == GDVFS_OK);
    CHECK(core == 0);
    CHECK(start == 0);
    CHECK(end == 5);
    std::vector<double> w(4);
    CHECK(gdvfs_schedule_parallelism(schedule, w.data(), 4) == GDVFS_OK);
    CHECK(w[0] == 10.0);
    CHECK(w[1] == 5.0);

    gdvfs_schedule_metrics metrics{};
    CHECK(gdvfs_metrics_from_parallelism(platform, w.data(), 4, 0.4, 10.0, &metrics) ==
          GDVFS_OK);
    CHECK(metrics.cycle_makespan == doctest::Approx(15.0));
    CHECK(metrics.criterion > 0.0);

    const gdvfs_policy policies[3] = {GDVFS_POLICY_CRITICAL_PATH, GDVFS_POLICY_LARGEST_WORK,
                                      GDVFS_POLICY_FIFO};
    gdvfs_ranking* ranking = nullptr;
    REQUIRE(gdvfs_rank_schedules(graph, platform, 10.0, policies, 3, &ranking) == GDVFS_OK);
    REQUIRE(gdvfs_ranking_size(ranking) == 3);
    double prev = -1.0;
    for (size_t row = 0; row < 3; ++row) {
        gdvfs_schedule_metrics row_metrics{};
        CHECK(gdvfs_ranking_metrics(ranking, row, &row_metrics) == GDVFS_OK);
        CHECK(row_metrics.criterion >= prev);
        prev = row_metrics.criterion;
        gdvfs_energy_breakdown energy{};
        CHECK(gdvfs_ranking_energy(ranking, row, &energy) == GDVFS_OK);
        CHECK(energy.total > 0.0);
        std::vector<double> freqs(4), row_w(4);
        double time = 0.0, lambda = 0.0;
        int32_t binding = 0;
        CHECK(gdvfs_ranking_solution(ranking, row, freqs.data(), 4, &time, &lambda,
                                     &binding) == GDVFS_OK);
        CHECK(gdvfs_ranking_parallelism(ranking, row, row_w.data(), 4) == GDVFS_OK);
        CHECK(time <= 10.0 * (1 + 1e-9));
    }
    gdvfs_ranking_destroy(ranking);
    gdvfs_schedule_destroy(schedule);

    gdvfs_w_set* set = nullptr;
    REQUIRE(gdvfs_enumerate_parallelism(graph, 2, &set) == GDVFS_OK);
    CHECK(gdvfs_w_set_size(set) == 2);
    std::vector<double> w0(2);
    CHECK(gdvfs_w_set_get(set, 0, w0.data(), 2) == GDVFS_OK);
    CHECK(gdvfs_w_set_get(set, 5, w0.data(), 2) == GDVFS_ERR_INVALID_ARGUMENT);
    gdvfs_w_set_destroy(set);

    gdvfs_graph* cyclic = nullptr;
    REQUIRE(gdvfs_graph_create(0.0, &cyclic) == GDVFS_OK);
    CHECK(gdvfs_graph_add_task(cyclic, "a", 1) == GDVFS_OK);
    CHECK(gdvfs_graph_add_task(cyclic, "b", 1) == GDVFS_OK);
    CHECK(gdvfs_graph_add_edge(cyclic, "a", "b") == GDVFS_OK);
    CHECK(gdvfs_graph_add_edge(cyclic, "b", "a") == GDVFS_OK);
    CHECK(gdvfs_graph_validate(cyclic) == GDVFS_ERR_INVALID_ARGUMENT);
    gdvfs_graph_destroy(cyclic);
    gdvfs_graph_destroy(graph);
    gdvfs_platform_destroy(platform);
}

TEST_CASE("the grid oracle and golden section work through callbacks") {
    Fixture fx;
    // Reduce to 3 active levels for the oracle cap.
    const std::vector<double> w = {4.0, 1.0, 2.0, 0.0};
    gdvfs_problem* problem = nullptr;
    REQUIRE(gdvfs_problem_create(fx.platform, w.data(), w.size(), fx.d, fx.budget,
                                 &problem) == GDVFS_OK);

    gdvfs_grid_spec spec{};
    CHECK(gdvfs_default_grid(problem, 300, &spec) == GDVFS_OK);
    CHECK(spec.freq_min > 0.0);
    CHECK(spec.freq_min < spec.freq_max);
    CHECK(spec.points == 300);

    gdvfs_result* solved = nullptr;
    REQUIRE(gdvfs_solve(problem, nullptr, &solved) == GDVFS_OK);
    gdvfs_energy_breakdown energy{};
    REQUIRE(gdvfs_result_energy(solved, &energy) == GDVFS_OK);

    std::vector<double> f(4);
    double grid_energy = 0.0;
    CHECK(gdvfs_grid_minimize_energy(problem, nullptr, f.data(), 4, &grid_energy) ==
          GDVFS_OK);
    CHECK(grid_energy >= energy.total * (1 - 1e-9));
    CHECK(grid_energy <= energy.total * (1 + 1e-4));
    gdvfs_result_destroy(solved);
    gdvfs_problem_destroy(problem);

    auto parabola = [](double x, void*) { return (x - 3.0) * (x - 3.0); };
    double minimizer = 0.0;
    CHECK(gdvfs_golden_section_1d(parabola, nullptr, 0.0, 10.0, &minimizer) == GDVFS_OK);
    CHECK(minimizer == doctest::Approx(3.0).epsilon(1e-8));
}

TEST_CASE("status names and version strings exist") {
    CHECK(std::string(gdvfs_status_name(GDVFS_OK)) == "ok");
    CHECK(std::string(gdvfs_status_name(GDVFS_ERR_INFEASIBLE)) == "infeasible deadline");
    CHECK(std::strlen(gdvfs_version()) > 0);
}
