/* gdvfs — global DVFS frequency selection for memory intensive workloads.
 *
 * C interface of the shared library. Handles are opaque; every function
 * returns a gdvfs_status, with results written through out parameters.
 * On failure the thread-local message of gdvfs_last_error() describes what
 * went wrong. Handles are immutable after creation (except gdvfs_graph_*
 * builders before first use) and safe to share across threads.
 *
 * Units: frequencies in Hz, times in seconds, workloads in CPU cycles.
 */
#ifndef GDVFS_H
#define GDVFS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gdvfs_status {
    GDVFS_OK = 0,
    GDVFS_ERR_INVALID_ARGUMENT = 1,  /* precondition or invariant violated */
    GDVFS_ERR_INFEASIBLE = 2,        /* deadline at or below the memory floor */
    GDVFS_ERR_NO_INTERIOR_MINIMUM = 3, /* c3 = 0: unconstrained optimum is f -> 0 */
    GDVFS_ERR_UNSUPPORTED = 4,       /* e.g. the serial-ratio cubic needs alpha = 2 */
    GDVFS_ERR_LIMIT_EXCEEDED = 5,    /* enumeration or grid above its cap */
    GDVFS_ERR_NUMERIC = 6,           /* non-finite value during evaluation */
    GDVFS_ERR_INTERNAL = 7
} gdvfs_status;

/* Thread-local message of the most recent failure on this thread. */
const char* gdvfs_last_error(void);
const char* gdvfs_status_name(gdvfs_status status);
const char* gdvfs_version(void);

/* ------------------------------------------------------------------ */
/* Platform                                                            */

typedef struct gdvfs_platform gdvfs_platform;

typedef struct gdvfs_platform_params {
    int32_t core_count;    /* M >= 2 */
    double c1;             /* dynamic power coefficient, > 0 */
    double c2;             /* static power slope, >= 0 */
    double c3;             /* static power offset, >= 0 */
    double alpha;          /* dynamic exponent, >= 2 */
    double idle_ratio;     /* K in [0, 1) */
    double mem_latency;    /* t_a seconds, >= 0 */
} gdvfs_platform_params;

gdvfs_status gdvfs_platform_create(const gdvfs_platform_params* params,
                                   gdvfs_platform** out);
void gdvfs_platform_destroy(gdvfs_platform* platform);
int32_t gdvfs_platform_cores(const gdvfs_platform* platform);

/* m' = m + K(M - m). */
gdvfs_status gdvfs_effective_cores(const gdvfs_platform* platform, int32_t active,
                                   double* out);
/* Total chip power [m + K(M-m)] c1 f^alpha + c2 f + c3. */
gdvfs_status gdvfs_chip_power(const gdvfs_platform* platform, int32_t active, double freq,
                              double* out);
/* Energy per cycle m' c1 f^(alpha-1) + c2 + c3 / f. */
gdvfs_status gdvfs_energy_per_cycle(const gdvfs_platform* platform, int32_t active,
                                    double freq, double* out);

/* ------------------------------------------------------------------ */
/* Deadline problem and energy model                                   */

typedef struct gdvfs_problem gdvfs_problem;

typedef struct gdvfs_energy_breakdown {
    double memory_dynamic;
    double instruction_dynamic;
    double static_energy;
    double total;
} gdvfs_energy_breakdown;

/* w has core_count entries (w_1 .. w_M in cycles); d is the data-to-CPU
 * quotient. Fails with GDVFS_ERR_INFEASIBLE when t_budget is not above the
 * memory floor sum(w_m d t_a). */
gdvfs_status gdvfs_problem_create(const gdvfs_platform* platform, const double* w,
                                  size_t w_len, double d, double t_budget,
                                  gdvfs_problem** out);
void gdvfs_problem_destroy(gdvfs_problem* problem);
double gdvfs_problem_memory_floor(const gdvfs_problem* problem);

/* Frequency-independent part of the completion time for a raw w vector;
 * usable before a problem exists (for infeasibility reporting). */
gdvfs_status gdvfs_memory_floor(const double* w, size_t w_len, double d,
                                double mem_latency, double* out);

/* f has w_len entries; levels with w = 0 are ignored (NaN marks them). */
gdvfs_status gdvfs_total_energy(const gdvfs_problem* problem, const double* f, size_t f_len,
                                gdvfs_energy_breakdown* out);
gdvfs_status gdvfs_completion_time(const gdvfs_problem* problem, const double* f,
                                   size_t f_len, double* out);

/* ------------------------------------------------------------------ */
/* Frequency selection                                                 */

typedef struct gdvfs_result gdvfs_result;

typedef struct gdvfs_solve_options {
    int32_t dynamic_only;  /* nonzero drops the static terms from the objective */
    double frequency_cap;  /* <= 0 means unbounded */
} gdvfs_solve_options;

/* KKT-optimal frequencies under the deadline; options may be NULL. */
gdvfs_status gdvfs_solve(const gdvfs_problem* problem, const gdvfs_solve_options* options,
                         gdvfs_result** out);
void gdvfs_result_destroy(gdvfs_result* result);

/* Frequencies in Hz; unused levels (w_m = 0) hold NaN. len must equal M. */
gdvfs_status gdvfs_result_frequencies(const gdvfs_result* result, double* out, size_t len);
gdvfs_status gdvfs_result_energy(const gdvfs_result* result, gdvfs_energy_breakdown* out);
double gdvfs_result_completion_time(const gdvfs_result* result);
double gdvfs_result_dual_multiplier(const gdvfs_result* result);
int32_t gdvfs_result_deadline_binding(const gdvfs_result* result);

/* Unique positive root of the per-level stationarity polynomial
 * m' c1 d t_a alpha f^(alpha+1) + m' c1 (alpha-1) f^alpha + c2 d t_a f^2 - c3;
 * independent of any workload vector. GDVFS_ERR_NO_INTERIOR_MINIMUM when c3 = 0. */
gdvfs_status gdvfs_unconstrained_level_frequency(const gdvfs_platform* platform, double d,
                                                 int32_t active, double* out);

/* Normalized residual of the dynamic-optimal pair relation; ~0 certifies an
 * optimal pair. */
gdvfs_status gdvfs_ratio_relation_residual(const gdvfs_platform* platform, double d,
                                           int32_t m, int32_t n, double f_m, double f_n,
                                           double* out);

typedef struct gdvfs_ratio_bounds {
    double lower;          /* (n'/m')^(1/alpha) */
    double upper_total;    /* 1 */
    double upper_dynamic;  /* (n'/m')^(1/(alpha+1)) */
} gdvfs_ratio_bounds;

gdvfs_status gdvfs_ratio_bounds_get(const gdvfs_platform* platform, int32_t m, int32_t n,
                                    gdvfs_ratio_bounds* out);

/* Worst signed violation of the optimal-ratio interval over all active pairs
 * of an assignment; <= 0 means every pair is inside. */
gdvfs_status gdvfs_max_ratio_bound_violation(const gdvfs_platform* platform, const double* w,
                                             const double* f, size_t len,
                                             int32_t dynamic_only, double* out);

/* Serial-to-parallel ratio x_m = f_m / f_1 for alpha = 2 (the cubic in the
 * overload factor g = 2 d t_a f_1). GDVFS_ERR_UNSUPPORTED when alpha != 2. */
gdvfs_status gdvfs_cubic_ratio(const gdvfs_platform* platform, double d, int32_t active,
                               double serial_freq, double* out);
gdvfs_status gdvfs_cubic_ratio_from_overload(const gdvfs_platform* platform, int32_t active,
                                             double overload, double* out);
/* Asymptotes (1'/m')^(1/2) at g = 0 and (1'/m')^(1/3) for large g. */
gdvfs_status gdvfs_cubic_ratio_limits(const gdvfs_platform* platform, int32_t active,
                                      double* at_zero, double* at_high);
/* Fills ratio[i] for each overload[i]; both arrays have n entries. */
gdvfs_status gdvfs_sweep_ratio_vs_overload(const gdvfs_platform* platform, int32_t active,
                                           const double* overload, double* ratio, size_t n);

/* Reference frequency f' = sum(pi w) / (t_budget - sum(w d t_a)) of the
 * dynamic-only memory-intensive regime, and the full-energy variant
 * max(interior stationary point, deadline-forced value). */
gdvfs_status gdvfs_reference_frequency_dynamic(const gdvfs_problem* problem, double* out);
gdvfs_status gdvfs_reference_frequency_total(const gdvfs_problem* problem, double* out);
/* Induced per-level assignment f_m = f' / pi_{m'}; len must equal M. */
gdvfs_status gdvfs_reference_assignment(const gdvfs_problem* problem, double reference,
                                        double* out, size_t len);

/* ------------------------------------------------------------------ */
/* Task graphs and scheduling                                          */

typedef struct gdvfs_graph gdvfs_graph;
typedef struct gdvfs_schedule gdvfs_schedule;
typedef struct gdvfs_ranking gdvfs_ranking;
typedef struct gdvfs_w_set gdvfs_w_set;

typedef enum gdvfs_policy {
    GDVFS_POLICY_CRITICAL_PATH = 0,
    GDVFS_POLICY_LARGEST_WORK = 1,
    GDVFS_POLICY_FIFO = 2
} gdvfs_policy;

/* Graphs are built incrementally, then validated (unique ids, known edge
 * endpoints, no duplicate edges, acyclic) on first use by any consumer. */
gdvfs_status gdvfs_graph_create(double d, gdvfs_graph** out);
void gdvfs_graph_destroy(gdvfs_graph* graph);
gdvfs_status gdvfs_graph_add_task(gdvfs_graph* graph, const char* id, uint64_t cycles);
gdvfs_status gdvfs_graph_add_edge(gdvfs_graph* graph, const char* from, const char* to);
/* Runs the full graph validation immediately instead of at first use. */
gdvfs_status gdvfs_graph_validate(const gdvfs_graph* graph);

gdvfs_status gdvfs_list_schedule(const gdvfs_graph* graph, const gdvfs_platform* platform,
                                 gdvfs_policy policy, gdvfs_schedule** out);
void gdvfs_schedule_destroy(gdvfs_schedule* schedule);
size_t gdvfs_schedule_task_count(const gdvfs_schedule* schedule);
/* The id pointer stays valid until the schedule is destroyed. */
const char* gdvfs_schedule_task_id(const gdvfs_schedule* schedule, size_t index);
gdvfs_status gdvfs_schedule_placement(const gdvfs_schedule* schedule, size_t index,
                                      int32_t* core, uint64_t* start, uint64_t* end);
/* Parallelism vector w in cycles; len must equal M. */
gdvfs_status gdvfs_schedule_parallelism(const gdvfs_schedule* schedule, double* out,
                                        size_t len);

typedef struct gdvfs_schedule_metrics {
    double cycle_makespan;     /* S */
    double weighted_makespan;  /* S_bar */
    double criterion;          /* S_bar / (t_budget - S d t_a) */
} gdvfs_schedule_metrics;

gdvfs_status gdvfs_metrics_from_parallelism(const gdvfs_platform* platform, const double* w,
                                            size_t len, double d, double t_budget,
                                            gdvfs_schedule_metrics* out);

/* One row per policy, sorted ascending by criterion. */
gdvfs_status gdvfs_rank_schedules(const gdvfs_graph* graph, const gdvfs_platform* platform,
                                  double t_budget, const gdvfs_policy* policies,
                                  size_t n_policies, gdvfs_ranking** out);
void gdvfs_ranking_destroy(gdvfs_ranking* ranking);
size_t gdvfs_ranking_size(const gdvfs_ranking* ranking);
gdvfs_status gdvfs_ranking_policy(const gdvfs_ranking* ranking, size_t row,
                                  gdvfs_policy* out);
gdvfs_status gdvfs_ranking_metrics(const gdvfs_ranking* ranking, size_t row,
                                   gdvfs_schedule_metrics* out);
gdvfs_status gdvfs_ranking_energy(const gdvfs_ranking* ranking, size_t row,
                                  gdvfs_energy_breakdown* out);
gdvfs_status gdvfs_ranking_solution(const gdvfs_ranking* ranking, size_t row,
                                    double* frequencies, size_t len, double* completion_time,
                                    double* dual_multiplier, int32_t* deadline_binding);
gdvfs_status gdvfs_ranking_parallelism(const gdvfs_ranking* ranking, size_t row, double* out,
                                       size_t len);

/* ------------------------------------------------------------------ */
/* Brute-force oracles                                                 */

typedef struct gdvfs_grid_spec {
    double freq_min;  /* > 0 */
    double freq_max;  /* > freq_min */
    int32_t points;   /* >= 100 per dimension */
} gdvfs_grid_spec;

/* Bounds derived from the problem alone, as used when spec is NULL. */
gdvfs_status gdvfs_default_grid(const gdvfs_problem* problem, int32_t points,
                                gdvfs_grid_spec* out);

/* Exhaustive feasible-grid minimum of the total energy with one zoomed
 * refinement. spec may be NULL for default bounds at 300 points. f_out has
 * f_len == M entries. At most 4 active levels. */
gdvfs_status gdvfs_grid_minimize_energy(const gdvfs_problem* problem,
                                        const gdvfs_grid_spec* spec, double* f_out,
                                        size_t f_len, double* energy_out);

/* Golden-section minimizer of fn over [lo, hi] to 1e-10 relative. */
typedef double (*gdvfs_objective)(double x, void* user);
gdvfs_status gdvfs_golden_section_1d(gdvfs_objective fn, void* user, double lo, double hi,
                                     double* out);

/* Distinct parallelism vectors over every precedence-respecting placement of
 * the graph on core_count cores (capped at 8 tasks / 3 cores). */
gdvfs_status gdvfs_enumerate_parallelism(const gdvfs_graph* graph, int32_t core_count,
                                         gdvfs_w_set** out);
void gdvfs_w_set_destroy(gdvfs_w_set* set);
size_t gdvfs_w_set_size(const gdvfs_w_set* set);
gdvfs_status gdvfs_w_set_get(const gdvfs_w_set* set, size_t index, double* w, size_t len);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* GDVFS_H */
