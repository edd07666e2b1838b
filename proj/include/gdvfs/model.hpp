#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gdvfs/errors.hpp"

// Units used throughout the library: frequencies in Hz, times in seconds,
// workloads in CPU cycles. The product data_ratio * mem_latency (d * t_a)
// converts cycles into stall seconds; no unit conversion happens inside.

namespace gdvfs {

/// Chip constants of the power model
///   p_m(f) = [m + K(M-m)] c1 f^alpha + c2 f + c3.
struct Platform {
    int core_count = 2;          ///< M, homogeneous cores (>= 2)
    double dyn_coeff = 1.0;      ///< c1 > 0, W / Hz^alpha
    double static_slope = 0.0;   ///< c2 >= 0, W / Hz
    double static_offset = 0.0;  ///< c3 >= 0, W
    double dyn_exponent = 2.0;   ///< alpha >= 2, real
    double idle_ratio = 0.0;     ///< K in [0, 1), idle-to-active dynamic ratio
    double mem_latency = 0.0;    ///< t_a >= 0, seconds per memory access

    /// Throws InvalidArgument when any invariant is violated.
    void validate() const;

    /// Effective dynamic multiplier m' = m + K(M - m) for m active cores.
    /// Strictly increasing in m and never below m.
    double effective_cores(int active) const;

    /// pi_{m'} = (m')^(1/(alpha+1)), the parallelism weight of the
    /// reference-frequency family and of the weighted makespan.
    double parallelism_weight(int active) const;
};

/// One task of the dependency graph; cycles is the compute workload cw.
struct Task {
    std::string id;
    std::uint64_t cycles = 0;
};

/// Immutable task dependency DAG plus the application-wide data-to-CPU
/// quotient d (memory accesses per CPU cycle).
class TaskGraph {
public:
    TaskGraph(std::vector<Task> tasks,
              const std::vector<std::pair<std::string, std::string>>& edges,
              double data_ratio);

    const std::vector<Task>& tasks() const noexcept { return tasks_; }
    const std::vector<std::pair<int, int>>& edges() const noexcept { return edges_; }
    double data_ratio() const noexcept { return data_ratio_; }
    const std::vector<std::vector<int>>& successors() const noexcept { return succ_; }
    const std::vector<std::vector<int>>& predecessors() const noexcept { return pred_; }

    int index_of(std::string_view id) const;  ///< -1 when absent

    /// Kahn order with ties broken by ascending task id.
    std::vector<int> topological_order() const;

    std::uint64_t total_cycles() const noexcept;

private:
    std::vector<Task> tasks_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> succ_;
    std::vector<std::vector<int>> pred_;
    double data_ratio_ = 0.0;
};

/// w = [w_1 .. w_M]: cycles during which exactly m cores are active.
struct ParallelismVector {
    std::vector<double> cycles;  ///< index m-1 holds w_m

    int levels() const noexcept { return static_cast<int>(cycles.size()); }
    std::vector<int> active() const;  ///< 0-based indices with w > 0

    /// Length must equal core_count, entries finite and >= 0, at least one > 0.
    void validate(int core_count) const;
};

/// f = [f_1 .. f_M]; levels with w_m = 0 carry the unused marker (NaN).
struct FrequencyAssignment {
    std::vector<double> hz;

    static double unused() noexcept;
    bool used(int level_index) const noexcept;

    /// Same length as w; f > 0 and finite wherever w > 0. Entries of unused
    /// levels are ignored by every operation.
    void validate_for(const ParallelismVector& w) const;
};

struct EnergyBreakdown {
    double memory_dynamic = 0.0;      ///< Joules spent clocking through stalls
    double instruction_dynamic = 0.0; ///< Joules spent on CPU instructions
    double static_energy = 0.0;       ///< Joules of the affine static model
    double total = 0.0;
};

/// Frequency-independent part of the completion time, sum of w_m * d * t_a.
double memory_floor(const ParallelismVector& w, double data_ratio, double mem_latency);

/// A frequency-selection instance: platform, parallelism, memory intensity
/// and deadline. Construction enforces every invariant including
/// t_budget > memory floor.
class DeadlineProblem {
public:
    DeadlineProblem(Platform platform, ParallelismVector parallelism,
                    double data_ratio, double time_budget);

    const Platform& platform() const noexcept { return platform_; }
    const ParallelismVector& parallelism() const noexcept { return parallelism_; }
    double data_ratio() const noexcept { return data_ratio_; }
    double time_budget() const noexcept { return time_budget_; }

    double memory_floor() const noexcept { return memory_floor_; }
    const std::vector<int>& active_levels() const noexcept { return active_; }

private:
    Platform platform_;
    ParallelismVector parallelism_;
    double data_ratio_;
    double time_budget_;
    double memory_floor_;
    std::vector<int> active_;
};

/// Total chip power with m active cores at frequency f:
/// [m + K(M-m)] c1 f^alpha + c2 f + c3.
double chip_power(const Platform& platform, int active_cores, double freq);

/// Energy per CPU cycle, chip_power / f expanded:
/// m' c1 f^(alpha-1) + c2 + c3 / f.
double energy_per_cycle(const Platform& platform, int active_cores, double freq);

/// Energy of an assignment, split into memory-access dynamic, instruction
/// dynamic and static components. Levels with w_m = 0 contribute nothing.
EnergyBreakdown total_energy(const DeadlineProblem& problem, const FrequencyAssignment& f);

/// Completion time sum(w_m / f_m) + sum(w_m d t_a); the second summand is
/// frequency independent.
double completion_time(const DeadlineProblem& problem, const FrequencyAssignment& f);

}  // namespace gdvfs
