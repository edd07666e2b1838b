#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gdvfs/model.hpp"
#include "gdvfs/rootfind.hpp"

namespace gdvfs {

/// Which part of the energy the solver minimizes. DynamicOnly drops the
/// static terms (c2, c3) from the objective; the reported breakdown is
/// always evaluated under the full platform model.
enum class EnergyScope { Total, DynamicOnly };

struct OptimizationResult {
    FrequencyAssignment frequencies;
    EnergyBreakdown energy;
    double completion_time = 0.0;
    bool deadline_binding = false;
    double dual_multiplier = 0.0;  ///< 0 exactly when the deadline is slack
};

/// Interval of Theorem-style optimal pair ratios f_m / f_n for m >= n.
struct RatioBounds {
    double lower = 1.0;          ///< (n'/m')^(1/alpha)
    double upper_total = 1.0;    ///< 1, full-energy optimum
    double upper_dynamic = 1.0;  ///< (n'/m')^(1/(alpha+1)), dynamic-only optimum
};

struct SweepPoint {
    double overload = 0.0;  ///< g = 2 d t_a f_1 (alpha = 2)
    double ratio = 0.0;     ///< x_m = f_m / f_1
};

/// Asymptotes of the serial-ratio cubic: (1'/m')^(1/2) at g = 0 and
/// (1'/m')^(1/3) as g grows without bound.
struct CubicLimits {
    double at_zero_overload = 1.0;
    double at_high_overload = 1.0;
};

struct SolveOptions {
    EnergyScope scope = EnergyScope::Total;
    /// Optional per-level frequency cap; plumbing only, default unbounded.
    std::optional<double> frequency_cap;
};

/// Scaled stationarity polynomial of one level: per-level derivative of the
/// energy multiplied by f^2 / w_m,
///   m' c1 d t_a alpha f^(alpha+1) + m' c1 (alpha-1) f^alpha + c2 d t_a f^2 - c3.
/// Its value at the optimal f_m equals the deadline multiplier lambda.
PowerPolynomial level_stationarity(const Platform& platform, double data_ratio,
                                   int active_cores, EnergyScope scope = EnergyScope::Total);

/// Unique positive root of the stationarity polynomial: the unconstrained
/// per-level optimum. Independent of any workload vector by construction.
/// Throws NoInteriorMinimum when c3 == 0.
double unconstrained_level_frequency(const Platform& platform, double data_ratio,
                                     int active_cores);

/// KKT-optimal frequencies for the deadline-constrained problem. When the
/// per-level unconstrained optima already meet the deadline they are returned
/// with lambda = 0; otherwise lambda is bisected until the deadline is tight
/// (the dual bracket is grown geometrically first).
OptimizationResult solve_constrained(const DeadlineProblem& problem,
                                     const SolveOptions& options = {});

/// Normalized residual of the dynamic-optimal pair relation
///   (m'[alpha-1+alpha d t_a f_m])^(1/alpha) f_m
///     = (n'[alpha-1+alpha d t_a f_n])^(1/alpha) f_n;
/// ~0 certifies a dynamic-only-optimal pair.
double ratio_relation_residual(const Platform& platform, double data_ratio,
                               int m, int n, double f_m, double f_n);

/// Optimal-ratio intervals for a pair m >= n.
RatioBounds ratio_bounds(const Platform& platform, int m, int n);

/// Worst signed violation of the ratio interval over all active pairs of an
/// assignment; <= 0 means every pair is inside. Checker only, never used as
/// a solver constraint.
double max_ratio_bound_violation(const Platform& platform, const ParallelismVector& w,
                                 const FrequencyAssignment& f, EnergyScope scope);

/// Ratio x_m = f_m / f_1 for alpha = 2, the unique positive root of
///   (m'/1') g x^3 + (m'/1') x^2 - (g + 1) = 0,  g = 2 d t_a f_1,
/// where 1' = KM + (1 - K). Rejects alpha != 2.
double cubic_ratio(const Platform& platform, double data_ratio, int active_cores,
                   double serial_frequency);

/// Same cubic with the memory overload factor g supplied directly.
double cubic_ratio_from_overload(const Platform& platform, int active_cores,
                                 double overload);

CubicLimits cubic_ratio_limits(const Platform& platform, int active_cores);

/// cubic_ratio_from_overload over a sequence of overload factors; the ratio
/// column is monotone in g and bounded by the two limits.
std::vector<SweepPoint> sweep_ratio_vs_overload(const Platform& platform, int active_cores,
                                                std::span<const double> overloads);

/// Closed-form optimal reference frequency of the dynamic-only,
/// memory-intensive regime:
///   f' = sum(pi_{m'} w_m) / (t_budget - sum(w_m d t_a)),
/// with per-level frequencies f_m = f' / pi_{m'}.
double reference_frequency_dynamic(const DeadlineProblem& problem);

/// Reference frequency minimizing the full energy in the same one-parameter
/// family: max(interior stationary point of the expanded energy, the
/// deadline-forced value above).
double reference_frequency_total(const DeadlineProblem& problem);

/// Per-level assignment induced by a reference frequency, f_m = f' / pi_{m'}.
FrequencyAssignment reference_assignment(const Platform& platform,
                                         const ParallelismVector& w,
                                         double reference_frequency);

}  // namespace gdvfs
