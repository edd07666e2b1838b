#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gdvfs/model.hpp"
#include "gdvfs/optimizer.hpp"

namespace gdvfs {

/// Priority rules of the greedy list scheduler. Ties always break by
/// ascending task id; free cores are taken in ascending core id order.
enum class Policy {
    CriticalPath,     ///< longest path to a sink first (HLF)
    LargestWork,      ///< largest compute workload first
    FifoTopological,  ///< topological order, first come first served
};

struct TaskPlacement {
    int core = 0;
    std::uint64_t start_cycle = 0;
    std::uint64_t end_cycle = 0;
};

/// A schedule in the cycle domain. Cycle counts are frequency invariant
/// because all active cores share one global frequency and memory stalls
/// scale every region identically.
struct Schedule {
    std::vector<TaskPlacement> placements;    ///< indexed like graph.tasks()
    std::vector<std::uint64_t> level_cycles;  ///< w_m by active-core count
    int core_count = 0;

    std::uint64_t makespan_cycles() const noexcept;
};

struct ScheduleMetrics {
    double cycle_makespan = 0.0;     ///< S = sum w_m
    double weighted_makespan = 0.0;  ///< S_bar = sum pi_{m'} w_m
    double criterion = 0.0;          ///< S_bar / (t_budget - S d t_a)
};

struct RankedSchedule {
    Policy policy;
    Schedule schedule;
    ScheduleMetrics metrics;
    OptimizationResult solution;
};

/// Deterministic greedy list schedule of the graph on the platform's cores.
/// Throws InvalidArgument on a cyclic graph (TaskGraph already rejects those).
Schedule list_schedule(const TaskGraph& graph, const Platform& platform, Policy policy);

/// Sweeps the cycle timeline of a schedule; w_m accumulates the spans during
/// which exactly m cores are busy. The busy-core-weighted integral equals the
/// total compute workload exactly (integer arithmetic).
ParallelismVector parallelism_vector(const Schedule& schedule, const Platform& platform);

/// Checks precedence, per-core overlap and cycle conservation of a schedule
/// against its graph; throws InvalidArgument on the first violation.
void validate_schedule(const Schedule& schedule, const TaskGraph& graph);

/// Criterion S_bar / (t_budget - S d t_a) directly from a parallelism vector.
ScheduleMetrics metrics_from_parallelism(const Platform& platform, const ParallelismVector& w,
                                         double data_ratio, double time_budget);

ScheduleMetrics schedule_metrics(const Schedule& schedule, const Platform& platform,
                                 double data_ratio, double time_budget);

/// One list schedule per policy, each solved to optimal frequencies, sorted
/// ascending by criterion (ties keep the policy order given).
std::vector<RankedSchedule> rank_schedules(const TaskGraph& graph, const Platform& platform,
                                           double time_budget, std::span<const Policy> policies);

}  // namespace gdvfs
