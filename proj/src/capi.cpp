#include "gdvfs.h"

#include <cstring>
#include <optional>
#include <string>
#include <vector>

#include "gdvfs/model.hpp"
#include "gdvfs/optimizer.hpp"
#include "gdvfs/oracle.hpp"
#include "gdvfs/scheduler.hpp"

// extern-C shim over the C++ core: exceptions become status codes, handles
// own their C++ objects, and the latest failure message lives in a
// thread-local buffer.

namespace {

thread_local std::string g_last_error;

template <typename Fn>
gdvfs_status wrap(Fn&& fn) noexcept {
    try {
        fn();
        return GDVFS_OK;
    } catch (const gdvfs::InfeasibleDeadline& e) {
        g_last_error = e.what();
        return GDVFS_ERR_INFEASIBLE;
    } catch (const gdvfs::NoInteriorMinimum& e) {
        g_last_error = e.what();
        return GDVFS_ERR_NO_INTERIOR_MINIMUM;
    } catch (const gdvfs::Unsupported& e) {
        g_last_error = e.what();
        return GDVFS_ERR_UNSUPPORTED;
    } catch (const gdvfs::LimitExceeded& e) {
        g_last_error = e.what();
        return GDVFS_ERR_LIMIT_EXCEEDED;
    } catch (const gdvfs::NumericError& e) {
        g_last_error = e.what();
        return GDVFS_ERR_NUMERIC;
    } catch (const gdvfs::InvalidArgument& e) {
        g_last_error = e.what();
        return GDVFS_ERR_INVALID_ARGUMENT;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return GDVFS_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return GDVFS_ERR_INTERNAL;
    }
}

gdvfs_status fail_invalid(const char* what) noexcept {
    g_last_error = what;
    return GDVFS_ERR_INVALID_ARGUMENT;
}

gdvfs::ParallelismVector make_w(const double* w, size_t len) {
    if (!w) throw gdvfs::InvalidArgument("w must not be null");
    gdvfs::ParallelismVector out;
    out.cycles.assign(w, w + len);
    return out;
}

gdvfs::FrequencyAssignment make_f(const double* f, size_t len) {
    if (!f) throw gdvfs::InvalidArgument("f must not be null");
    gdvfs::FrequencyAssignment out;
    out.hz.assign(f, f + len);
    return out;
}

void copy_out(const std::vector<double>& values, double* out, size_t len, const char* what) {
    if (!out) throw gdvfs::InvalidArgument(std::string(what) + " must not be null");
    if (len != values.size())
        throw gdvfs::InvalidArgument(std::string(what) + " has the wrong length");
    std::memcpy(out, values.data(), values.size() * sizeof(double));
}

gdvfs::Policy to_policy(gdvfs_policy p) {
    switch (p) {
        case GDVFS_POLICY_CRITICAL_PATH: return gdvfs::Policy::CriticalPath;
        case GDVFS_POLICY_LARGEST_WORK: return gdvfs::Policy::LargestWork;
        case GDVFS_POLICY_FIFO: return gdvfs::Policy::FifoTopological;
    }
    throw gdvfs::InvalidArgument("unknown policy");
}

gdvfs_policy from_policy(gdvfs::Policy p) {
    switch (p) {
        case gdvfs::Policy::CriticalPath: return GDVFS_POLICY_CRITICAL_PATH;
        case gdvfs::Policy::LargestWork: return GDVFS_POLICY_LARGEST_WORK;
        case gdvfs::Policy::FifoTopological: return GDVFS_POLICY_FIFO;
    }
    return GDVFS_POLICY_CRITICAL_PATH;
}

gdvfs_energy_breakdown to_c(const gdvfs::EnergyBreakdown& e) {
    return {e.memory_dynamic, e.instruction_dynamic, e.static_energy, e.total};
}

}  // namespace

struct gdvfs_platform {
    gdvfs::Platform p;
};
struct gdvfs_problem {
    gdvfs::DeadlineProblem p;
};
struct gdvfs_result {
    gdvfs::OptimizationResult r;
};
struct gdvfs_graph {
    std::vector<gdvfs::Task> tasks;
    std::vector<std::pair<std::string, std::string>> edges;
    double d = 0.0;

    gdvfs::TaskGraph build() const { return gdvfs::TaskGraph(tasks, edges, d); }
};
struct gdvfs_schedule {
    gdvfs::Schedule s;
    std::vector<std::string> ids;
};
struct gdvfs_ranking {
    std::vector<gdvfs::RankedSchedule> rows;
    std::vector<std::vector<double>> parallelism;
};
struct gdvfs_w_set {
    std::vector<std::vector<double>> ws;
};

extern "C" {

const char* gdvfs_last_error(void) { return g_last_error.c_str(); }

const char* gdvfs_status_name(gdvfs_status status) {
    switch (status) {
        case GDVFS_OK: return "ok";
        case GDVFS_ERR_INVALID_ARGUMENT: return "invalid argument";
        case GDVFS_ERR_INFEASIBLE: return "infeasible deadline";
        case GDVFS_ERR_NO_INTERIOR_MINIMUM: return "no interior minimum";
        case GDVFS_ERR_UNSUPPORTED: return "unsupported";
        case GDVFS_ERR_LIMIT_EXCEEDED: return "limit exceeded";
        case GDVFS_ERR_NUMERIC: return "numeric error";
        case GDVFS_ERR_INTERNAL: return "internal error";
    }
    return "unknown";
}

const char* gdvfs_version(void) { return "1.0.0"; }

gdvfs_status gdvfs_platform_create(const gdvfs_platform_params* params,
                                   gdvfs_platform** out) {
    if (!params || !out) return fail_invalid("params and out must not be null");
    return wrap([&] {
        gdvfs::Platform p;
        p.core_count = params->core_count;
        p.dyn_coeff = params->c1;
        p.static_slope = params->c2;
        p.static_offset = params->c3;
        p.dyn_exponent = params->alpha;
        p.idle_ratio = params->idle_ratio;
        p.mem_latency = params->mem_latency;
        p.validate();
        *out = new gdvfs_platform{p};
    });
}

void gdvfs_platform_destroy(gdvfs_platform* platform) { delete platform; }

int32_t gdvfs_platform_cores(const gdvfs_platform* platform) {
    return platform ? platform->p.core_count : 0;
}

gdvfs_status gdvfs_effective_cores(const gdvfs_platform* platform, int32_t active,
                                   double* out) {
    if (!platform || !out) return fail_invalid("platform and out must not be null");
    return wrap([&] { *out = platform->p.effective_cores(active); });
}

gdvfs_status gdvfs_chip_power(const gdvfs_platform* platform, int32_t active, double freq,
                              double* out) {
    if (!platform || !out) return fail_invalid("platform and out must not be null");
    return wrap([&] { *out = gdvfs::chip_power(platform->p, active, freq); });
}

gdvfs_status gdvfs_energy_per_cycle(const gdvfs_platform* platform, int32_t active,
                                    double freq, double* out) {
    if (!platform || !out) return fail_invalid("platform and out must not be null");
    return wrap([&] { *out = gdvfs::energy_per_cycle(platform->p, active, freq); });
}

gdvfs_status gdvfs_problem_create(const gdvfs_platform* platform, const double* w,
                                  size_t w_len, double d, double t_budget,
                                  gdvfs_problem** out) {
    if (!platform || !out) return fail_invalid("platform and out must not be null");
    return wrap([&] {
        *out = new gdvfs_problem{
            gdvfs::DeadlineProblem(platform->p, make_w(w, w_len), d, t_budget)};
    });
}

void gdvfs_problem_destroy(gdvfs_problem* problem) { delete problem; }

double gdvfs_problem_memory_floor(const gdvfs_problem* problem) {
    return problem ? problem->p.memory_floor() : 0.0;
}

gdvfs_status gdvfs_memory_floor(const double* w, size_t w_len, double d,
                                double mem_latency, double* out) {
    if (!out) return fail_invalid("out must not be null");
    return wrap([&] { *out = gdvfs::memory_floor(make_w(w, w_len), d, mem_latency); });
}

gdvfs_status gdvfs_total_energy(const gdvfs_problem* problem, const double* f, size_t f_len,
                                gdvfs_energy_breakdown* out) {
    if (!problem || !out) return fail_invalid("problem and out must not be null");
    return wrap([&] { *out = to_c(gdvfs::total_energy(problem->p, make_f(f, f_len))); });
}

gdvfs_status gdvfs_completion_time(const gdvfs_problem* problem, const double* f,
                                   size_t f_len, double* out) {
    if (!problem || !out) return fail_invalid("problem and out must not be null");
    return wrap([&] { *out = gdvfs::completion_time(problem->p, make_f(f, f_len)); });
}

gdvfs_status gdvfs_solve(const gdvfs_problem* problem, const gdvfs_solve_options* options,
                         gdvfs_result** out) {
    if (!problem || !out) return fail_invalid("problem and out must not be null");
    return wrap([&] {
        gdvfs::SolveOptions opts;
        if (options) {
            if (options->dynamic_only) opts.scope = gdvfs::EnergyScope::DynamicOnly;
            if (options->frequency_cap > 0.0) opts.frequency_cap = options->frequency_cap;
        }
        *out = new gdvfs_result{gdvfs::solve_constrained(problem->p, opts)};
    });
}

void gdvfs_result_destroy(gdvfs_result* result) { delete result; }

gdvfs_status gdvfs_result_frequencies(const gdvfs_result* result, double* out, size_t len) {
    if (!result) return fail_invalid("result must not be null");
    return wrap([&] { copy_out(result->r.frequencies.hz, out, len, "frequencies buffer"); });
}

gdvfs_status gdvfs_result_energy(const gdvfs_result* result, gdvfs_energy_breakdown* out) {
    if (!result || !out) return fail_invalid("result and out must not be null");
    *out = to_c(result->r.energy);
    return GDVFS_OK;
}

double gdvfs_result_completion_time(const gdvfs_result* result) {
    return result ? result->r.completion_time : 0.0;
}

double gdvfs_result_dual_multiplier(const gdvfs_result* result) {
    return result ? result->r.dual_multiplier : 0.0;
}

int32_t gdvfs_result_deadline_binding(const gdvfs_result* result) {
    return result && result->r.deadline_binding ? 1 : 0;
}

gdvfs_status gdvfs_unconstrained_level_frequency(const gdvfs_platform* platform, double d,
                                                 int32_t active, double* out) {
    if (!platform || !out) return fail_invalid("platform and out must not be null");
    return wrap(
        [&] { *out = gdvfs::unconstrained_level_frequency(platform->p, d, active); });
}

gdvfs_status gdvfs_ratio_relation_residual(const gdvfs_platform* platform, double d,
                                           int32_t m, int32_t n, double f_m, double f_n,
                                           double* out) {
    if (!platform || !out) return fail_invalid("platform and out must not be null");
    return wrap(
        [&] { *out = gdvfs::ratio_relation_residual(platform->p, d, m, n, f_m, f_n); });
}

gdvfs_status gdvfs_ratio_bounds_get(const gdvfs_platform* platform, int32_t m, int32_t n,
                                    gdvfs_ratio_bounds* out) {
    if (!platform || !out) return fail_invalid("platform and out must not be null");
    return wrap([&] {
        const gdvfs::RatioBounds b = gdvfs::ratio_bounds(platform->p, m, n);
        *out = {b.lower, b.upper_total, b.upper_dynamic};
    });
}

gdvfs_status gdvfs_max_ratio_bound_violation(const gdvfs_platform* platform, const double* w,
                                             const double* f, size_t len,
                                             int32_t dynamic_only, double* out) {
    if (!platform || !out) return fail_invalid("platform and out must not be null");
    return wrap([&] {
        *out = gdvfs::max_ratio_bound_violation(
            platform->p, make_w(w, len), make_f(f, len),
            dynamic_only ? gdvfs::EnergyScope::DynamicOnly : gdvfs::EnergyScope::Total);
    });
}

gdvfs_status gdvfs_cubic_ratio(const gdvfs_platform* platform, double d, int32_t active,
                               double serial_freq, double* out) {
    if (!platform || !out) return fail_invalid("platform and out must not be null");
    return wrap([&] { *out = gdvfs::cubic_ratio(platform->p, d, active, serial_freq); });
}

gdvfs_status gdvfs_cubic_ratio_from_overload(const gdvfs_platform* platform, int32_t active,
                                             double overload, double* out) {
    if (!platform || !out) return fail_invalid("platform and out must not be null");
    return wrap(
        [&] { *out = gdvfs::cubic_ratio_from_overload(platform->p, active, overload); });
}

gdvfs_status gdvfs_cubic_ratio_limits(const gdvfs_platform* platform, int32_t active,
                                      double* at_zero, double* at_high) {
    if (!platform || !at_zero || !at_high)
        return fail_invalid("platform and outputs must not be null");
    return wrap([&] {
        const gdvfs::CubicLimits limits = gdvfs::cubic_ratio_limits(platform->p, active);
        *at_zero = limits.at_zero_overload;
        *at_high = limits.at_high_overload;
    });
}

gdvfs_status gdvfs_sweep_ratio_vs_overload(const gdvfs_platform* platform, int32_t active,
                                           const double* overload, double* ratio, size_t n) {
    if (!platform || !overload || !ratio)
        return fail_invalid("platform and arrays must not be null");
    return wrap([&] {
        const auto table = gdvfs::sweep_ratio_vs_overload(
            platform->p, active, std::span<const double>(overload, n));
        for (size_t i = 0; i < table.size(); ++i) ratio[i] = table[i].ratio;
    });
}

gdvfs_status gdvfs_reference_frequency_dynamic(const gdvfs_problem* problem, double* out) {
    if (!problem || !out) return fail_invalid("problem and out must not be null");
    return wrap([&] { *out = gdvfs::reference_frequency_dynamic(problem->p); });
}

gdvfs_status gdvfs_reference_frequency_total(const gdvfs_problem* problem, double* out) {
    if (!problem || !out) return fail_invalid("problem and out must not be null");
    return wrap([&] { *out = gdvfs::reference_frequency_total(problem->p); });
}

gdvfs_status gdvfs_reference_assignment(const gdvfs_problem* problem, double reference,
                                        double* out, size_t len) {
    if (!problem) return fail_invalid("problem must not be null");
    return wrap([&] {
        const gdvfs::FrequencyAssignment f = gdvfs::reference_assignment(
            problem->p.platform(), problem->p.parallelism(), reference);
        copy_out(f.hz, out, len, "assignment buffer");
    });
}

gdvfs_status gdvfs_graph_create(double d, gdvfs_graph** out) {
    if (!out) return fail_invalid("out must not be null");
    return wrap([&] {
        auto graph = new gdvfs_graph;
        graph->d = d;
        *out = graph;
    });
}

void gdvfs_graph_destroy(gdvfs_graph* graph) { delete graph; }

gdvfs_status gdvfs_graph_add_task(gdvfs_graph* graph, const char* id, uint64_t cycles) {
    if (!graph || !id) return fail_invalid("graph and id must not be null");
    return wrap([&] { graph->tasks.push_back({id, cycles}); });
}

gdvfs_status gdvfs_graph_add_edge(gdvfs_graph* graph, const char* from, const char* to) {
    if (!graph || !from || !to) return fail_invalid("graph and ids must not be null");
    return wrap([&] { graph->edges.emplace_back(from, to); });
}

gdvfs_status gdvfs_graph_validate(const gdvfs_graph* graph) {
    if (!graph) return fail_invalid("graph must not be null");
    return wrap([&] { graph->build(); });
}

gdvfs_status gdvfs_list_schedule(const gdvfs_graph* graph, const gdvfs_platform* platform,
                                 gdvfs_policy policy, gdvfs_schedule** out) {
    if (!graph || !platform || !out)
        return fail_invalid("graph, platform and out must not be null");
    return wrap([&] {
        const gdvfs::TaskGraph built = graph->build();
        auto handle = new gdvfs_schedule;
        handle->s = gdvfs::list_schedule(built, platform->p, to_policy(policy));
        for (const gdvfs::Task& t : built.tasks()) handle->ids.push_back(t.id);
        *out = handle;
    });
}

void gdvfs_schedule_destroy(gdvfs_schedule* schedule) { delete schedule; }

size_t gdvfs_schedule_task_count(const gdvfs_schedule* schedule) {
    return schedule ? schedule->s.placements.size() : 0;
}

const char* gdvfs_schedule_task_id(const gdvfs_schedule* schedule, size_t index) {
    if (!schedule || index >= schedule->ids.size()) return nullptr;
    return schedule->ids[index].c_str();
}

gdvfs_status gdvfs_schedule_placement(const gdvfs_schedule* schedule, size_t index,
                                      int32_t* core, uint64_t* start, uint64_t* end) {
    if (!schedule || !core || !start || !end)
        return fail_invalid("schedule and outputs must not be null");
    if (index >= schedule->s.placements.size()) return fail_invalid("task index out of range");
    const gdvfs::TaskPlacement& pl = schedule->s.placements[index];
    *core = pl.core;
    *start = pl.start_cycle;
    *end = pl.end_cycle;
    return GDVFS_OK;
}

gdvfs_status gdvfs_schedule_parallelism(const gdvfs_schedule* schedule, double* out,
                                        size_t len) {
    if (!schedule) return fail_invalid("schedule must not be null");
    return wrap([&] {
        std::vector<double> w(schedule->s.level_cycles.begin(),
                              schedule->s.level_cycles.end());
        copy_out(w, out, len, "parallelism buffer");
    });
}

gdvfs_status gdvfs_metrics_from_parallelism(const gdvfs_platform* platform, const double* w,
                                            size_t len, double d, double t_budget,
                                            gdvfs_schedule_metrics* out) {
    if (!platform || !out) return fail_invalid("platform and out must not be null");
    return wrap([&] {
        const gdvfs::ScheduleMetrics m =
            gdvfs::metrics_from_parallelism(platform->p, make_w(w, len), d, t_budget);
        *out = {m.cycle_makespan, m.weighted_makespan, m.criterion};
    });
}

gdvfs_status gdvfs_rank_schedules(const gdvfs_graph* graph, const gdvfs_platform* platform,
                                  double t_budget, const gdvfs_policy* policies,
                                  size_t n_policies, gdvfs_ranking** out) {
    if (!graph || !platform || !policies || !out)
        return fail_invalid("graph, platform, policies and out must not be null");
    return wrap([&] {
        std::vector<gdvfs::Policy> pols;
        for (size_t i = 0; i < n_policies; ++i) pols.push_back(to_policy(policies[i]));
        auto handle = new gdvfs_ranking;
        handle->rows = gdvfs::rank_schedules(graph->build(), platform->p, t_budget, pols);
        for (const gdvfs::RankedSchedule& row : handle->rows)
            handle->parallelism.emplace_back(row.schedule.level_cycles.begin(),
                                             row.schedule.level_cycles.end());
        *out = handle;
    });
}

void gdvfs_ranking_destroy(gdvfs_ranking* ranking) { delete ranking; }

size_t gdvfs_ranking_size(const gdvfs_ranking* ranking) {
    return ranking ? ranking->rows.size() : 0;
}

gdvfs_status gdvfs_ranking_policy(const gdvfs_ranking* ranking, size_t row,
                                  gdvfs_policy* out) {
    if (!ranking || !out) return fail_invalid("ranking and out must not be null");
    if (row >= ranking->rows.size()) return fail_invalid("row out of range");
    *out = from_policy(ranking->rows[row].policy);
    return GDVFS_OK;
}

gdvfs_status gdvfs_ranking_metrics(const gdvfs_ranking* ranking, size_t row,
                                   gdvfs_schedule_metrics* out) {
    if (!ranking || !out) return fail_invalid("ranking and out must not be null");
    if (row >= ranking->rows.size()) return fail_invalid("row out of range");
    const gdvfs::ScheduleMetrics& m = ranking->rows[row].metrics;
    *out = {m.cycle_makespan, m.weighted_makespan, m.criterion};
    return GDVFS_OK;
}

gdvfs_status gdvfs_ranking_energy(const gdvfs_ranking* ranking, size_t row,
                                  gdvfs_energy_breakdown* out) {
    if (!ranking || !out) return fail_invalid("ranking and out must not be null");
    if (row >= ranking->rows.size()) return fail_invalid("row out of range");
    *out = to_c(ranking->rows[row].solution.energy);
    return GDVFS_OK;
}

gdvfs_status gdvfs_ranking_solution(const gdvfs_ranking* ranking, size_t row,
                                    double* frequencies, size_t len, double* completion_time,
                                    double* dual_multiplier, int32_t* deadline_binding) {
    if (!ranking) return fail_invalid("ranking must not be null");
    if (row >= ranking->rows.size()) return fail_invalid("row out of range");
    return wrap([&] {
        const gdvfs::OptimizationResult& r = ranking->rows[row].solution;
        if (frequencies) copy_out(r.frequencies.hz, frequencies, len, "frequencies buffer");
        if (completion_time) *completion_time = r.completion_time;
        if (dual_multiplier) *dual_multiplier = r.dual_multiplier;
        if (deadline_binding) *deadline_binding = r.deadline_binding ? 1 : 0;
    });
}

gdvfs_status gdvfs_ranking_parallelism(const gdvfs_ranking* ranking, size_t row, double* out,
                                       size_t len) {
    if (!ranking) return fail_invalid("ranking must not be null");
    if (row >= ranking->parallelism.size()) return fail_invalid("row out of range");
    return wrap([&] { copy_out(ranking->parallelism[row], out, len, "parallelism buffer"); });
}

gdvfs_status gdvfs_default_grid(const gdvfs_problem* problem, int32_t points,
                                gdvfs_grid_spec* out) {
    if (!problem || !out) return fail_invalid("problem and out must not be null");
    return wrap([&] {
        const gdvfs::GridSpec grid = gdvfs::default_grid(problem->p, points);
        *out = {grid.freq_min, grid.freq_max, grid.points};
    });
}

gdvfs_status gdvfs_grid_minimize_energy(const gdvfs_problem* problem,
                                        const gdvfs_grid_spec* spec, double* f_out,
                                        size_t f_len, double* energy_out) {
    if (!problem || !energy_out) return fail_invalid("problem and energy_out must not be null");
    return wrap([&] {
        gdvfs::GridSpec grid;
        if (spec)
            grid = {spec->freq_min, spec->freq_max, spec->points};
        else
            grid = gdvfs::default_grid(problem->p, 300);
        gdvfs::GridMinimum best = gdvfs::grid_minimize_energy(problem->p, grid);
        if (f_out) copy_out(best.frequencies.hz, f_out, f_len, "frequency buffer");
        *energy_out = best.energy;
    });
}

gdvfs_status gdvfs_golden_section_1d(gdvfs_objective fn, void* user, double lo, double hi,
                                     double* out) {
    if (!fn || !out) return fail_invalid("fn and out must not be null");
    return wrap([&] {
        *out = gdvfs::golden_section_1d([&](double x) { return fn(x, user); }, lo, hi);
    });
}

gdvfs_status gdvfs_enumerate_parallelism(const gdvfs_graph* graph, int32_t core_count,
                                         gdvfs_w_set** out) {
    if (!graph || !out) return fail_invalid("graph and out must not be null");
    return wrap([&] {
        const std::vector<gdvfs::Schedule> schedules =
            gdvfs::enumerate_schedules(graph->build(), core_count);
        auto set = new gdvfs_w_set;
        for (const gdvfs::Schedule& s : schedules)
            set->ws.emplace_back(s.level_cycles.begin(), s.level_cycles.end());
        *out = set;
    });
}

void gdvfs_w_set_destroy(gdvfs_w_set* set) { delete set; }

size_t gdvfs_w_set_size(const gdvfs_w_set* set) { return set ? set->ws.size() : 0; }

gdvfs_status gdvfs_w_set_get(const gdvfs_w_set* set, size_t index, double* w, size_t len) {
    if (!set) return fail_invalid("set must not be null");
    if (index >= set->ws.size()) return fail_invalid("index out of range");
    return wrap([&] { copy_out(set->ws[index], w, len, "w buffer"); });
}

}  // extern "C"
