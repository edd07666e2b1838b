#include "gdvfs/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "gdvfs/numerics.hpp"

namespace gdvfs {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument(what);
}

/// Longest path (in cycles, own workload included) from each task to a sink.
std::vector<std::uint64_t> bottom_levels(const TaskGraph& graph) {
    const auto order = graph.topological_order();
    std::vector<std::uint64_t> level(graph.tasks().size(), 0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        std::uint64_t best = 0;
        for (int s : graph.successors()[*it]) best = std::max(best, level[s]);
        level[*it] = best + graph.tasks()[*it].cycles;
    }
    return level;
}

std::vector<std::uint64_t> occupancy(const std::vector<TaskPlacement>& placements,
                                     int core_count) {
    std::vector<std::pair<std::uint64_t, int>> events;
    events.reserve(placements.size() * 2);
    for (const TaskPlacement& pl : placements) {
        events.emplace_back(pl.start_cycle, +1);
        events.emplace_back(pl.end_cycle, -1);
    }
    std::sort(events.begin(), events.end());

    std::vector<std::uint64_t> w(core_count, 0);
    int busy = 0;
    std::uint64_t at = 0;
    for (const auto& [time, delta] : events) {
        if (time > at && busy > 0) w[busy - 1] += time - at;
        at = time;
        busy += delta;
    }
    return w;
}

}  // namespace

std::uint64_t Schedule::makespan_cycles() const noexcept {
    std::uint64_t end = 0;
    for (const TaskPlacement& pl : placements) end = std::max(end, pl.end_cycle);
    return end;
}

Schedule list_schedule(const TaskGraph& graph, const Platform& platform, Policy policy) {
    platform.validate();
    const int n = static_cast<int>(graph.tasks().size());
    const int cores = platform.core_count;

    // Priority key: larger first for work-based rules, then ascending id.
    std::vector<std::uint64_t> key(n, 0);
    switch (policy) {
        case Policy::CriticalPath:
            key = bottom_levels(graph);
            break;
        case Policy::LargestWork:
            for (int i = 0; i < n; ++i) key[i] = graph.tasks()[i].cycles;
            break;
        case Policy::FifoTopological: {
            const auto order = graph.topological_order();
            for (int pos = 0; pos < n; ++pos)
                key[order[pos]] = static_cast<std::uint64_t>(n - pos);  // earlier = larger
            break;
        }
    }

    auto lower_priority = [&](int a, int b) {
        if (key[a] != key[b]) return key[a] < key[b];
        return graph.tasks()[a].id > graph.tasks()[b].id;
    };
    std::priority_queue<int, std::vector<int>, decltype(lower_priority)> ready(lower_priority);

    std::vector<int> waiting_preds(n);
    for (int i = 0; i < n; ++i) {
        waiting_preds[i] = static_cast<int>(graph.predecessors()[i].size());
        if (waiting_preds[i] == 0) ready.push(i);
    }

    // (finish cycle, task) events; min-heap.
    using Event = std::pair<std::uint64_t, int>;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> running;
    std::vector<int> free_cores(cores);
    std::iota(free_cores.rbegin(), free_cores.rend(), 0);  // pop back = smallest id

    std::vector<TaskPlacement> placements(n);
    std::uint64_t now = 0;
    int scheduled = 0;
    while (scheduled < n) {
        while (!ready.empty() && !free_cores.empty()) {
            const int task = ready.top();
            ready.pop();
            const int core = free_cores.back();
            free_cores.pop_back();
            placements[task] = {core, now, now + graph.tasks()[task].cycles};
            running.emplace(placements[task].end_cycle, task);
            ++scheduled;
        }
        if (running.empty()) break;  // blocked; impossible on an acyclic graph
        now = running.top().first;
        while (!running.empty() && running.top().first == now) {
            const int task = running.top().second;
            running.pop();
            free_cores.push_back(placements[task].core);
            for (int s : graph.successors()[task])
                if (--waiting_preds[s] == 0) ready.push(s);
        }
        std::sort(free_cores.rbegin(), free_cores.rend());
    }
    require(scheduled == n, "task graph contains a cycle");

    Schedule out;
    out.placements = std::move(placements);
    out.core_count = cores;
    out.level_cycles = occupancy(out.placements, cores);
    return out;
}

ParallelismVector parallelism_vector(const Schedule& schedule, const Platform& platform) {
    platform.validate();
    require(schedule.core_count == platform.core_count,
            "schedule was built for a different core count");
    const auto w = occupancy(schedule.placements, schedule.core_count);
    ParallelismVector out;
    out.cycles.assign(w.begin(), w.end());
    return out;
}

void validate_schedule(const Schedule& schedule, const TaskGraph& graph) {
    const int n = static_cast<int>(graph.tasks().size());
    require(static_cast<int>(schedule.placements.size()) == n,
            "schedule and graph task counts differ");

    std::uint64_t placed_cycles = 0;
    for (int i = 0; i < n; ++i) {
        const TaskPlacement& pl = schedule.placements[i];
        require(pl.core >= 0 && pl.core < schedule.core_count, "core id out of range");
        require(pl.end_cycle - pl.start_cycle == graph.tasks()[i].cycles,
                "placement span does not match the task workload");
        placed_cycles += graph.tasks()[i].cycles;
        for (int p : graph.predecessors()[i])
            require(schedule.placements[p].end_cycle <= pl.start_cycle,
                    "precedence violated at task '" + graph.tasks()[i].id + "'");
        for (int j = i + 1; j < n; ++j) {
            const TaskPlacement& other = schedule.placements[j];
            if (other.core != pl.core) continue;
            require(other.end_cycle <= pl.start_cycle || pl.end_cycle <= other.start_cycle,
                    "tasks overlap on core " + std::to_string(pl.core));
        }
    }

    // Busy-core-weighted cycle conservation, exact in the integer domain.
    const auto w = occupancy(schedule.placements, schedule.core_count);
    std::uint64_t weighted = 0;
    for (std::size_t m = 0; m < w.size(); ++m) weighted += (m + 1) * w[m];
    require(weighted == placed_cycles, "occupancy does not conserve compute cycles");
}

ScheduleMetrics metrics_from_parallelism(const Platform& platform, const ParallelismVector& w,
                                         double data_ratio, double time_budget) {
    platform.validate();
    w.validate(platform.core_count);
    require(std::isfinite(data_ratio) && data_ratio >= 0.0, "d must be >= 0");
    require(std::isfinite(time_budget) && time_budget > 0.0, "t_budget must be > 0");

    KahanSum total, weighted;
    for (int i : w.active()) {
        total.add(w.cycles[i]);
        weighted.add(platform.parallelism_weight(i + 1) * w.cycles[i]);
    }
    const double floor = memory_floor(w, data_ratio, platform.mem_latency);
    if (time_budget <= floor) throw InfeasibleDeadline(floor, time_budget);

    ScheduleMetrics out;
    out.cycle_makespan = total.value();
    out.weighted_makespan = weighted.value();
    out.criterion = out.weighted_makespan / (time_budget - floor);
    return out;
}

ScheduleMetrics schedule_metrics(const Schedule& schedule, const Platform& platform,
                                 double data_ratio, double time_budget) {
    return metrics_from_parallelism(platform, parallelism_vector(schedule, platform),
                                    data_ratio, time_budget);
}

std::vector<RankedSchedule> rank_schedules(const TaskGraph& graph, const Platform& platform,
                                           double time_budget, std::span<const Policy> policies) {
    require(!policies.empty(), "need at least one policy");
    std::vector<RankedSchedule> rows;
    rows.reserve(policies.size());
    for (Policy policy : policies) {
        RankedSchedule row;
        row.policy = policy;
        row.schedule = list_schedule(graph, platform, policy);
        const ParallelismVector w = parallelism_vector(row.schedule, platform);
        row.metrics = metrics_from_parallelism(platform, w, graph.data_ratio(), time_budget);
        row.solution = solve_constrained(
            DeadlineProblem(platform, w, graph.data_ratio(), time_budget));
        rows.push_back(std::move(row));
    }
    std::stable_sort(rows.begin(), rows.end(), [](const RankedSchedule& a, const RankedSchedule& b) {
        return a.metrics.criterion < b.metrics.criterion;
    });
    return rows;
}

}  // namespace gdvfs
