#pragma once

#include <functional>
#include <vector>

#include "gdvfs/model.hpp"
#include "gdvfs/scheduler.hpp"

// Brute-force verifiers. Deliberately independent of the analytical solver:
// they only evaluate the model, never the stationarity machinery. Slow by
// design; use them to certify results on small instances.

namespace gdvfs {

/// Log-spaced frequency grid, the same bounds on every active level.
struct GridSpec {
    double freq_min = 0.0;
    double freq_max = 0.0;
    int points = 0;  ///< samples per dimension, >= 100

    void validate() const;
};

struct GridMinimum {
    FrequencyAssignment frequencies;
    double energy = 0.0;
};

/// Grid bounds derived from the problem alone (feasibility scales plus
/// per-level 1-D minimizers located by golden section).
GridSpec default_grid(const DeadlineProblem& problem, int points);

/// Exhaustive minimum of total_energy over the deadline-feasible grid, with
/// one zoomed refinement pass around the best coarse point. At most 4 active
/// levels. Throws InfeasibleDeadline when no grid point is feasible.
GridMinimum grid_minimize_energy(const DeadlineProblem& problem, const GridSpec& grid);

/// Golden-section minimizer to 1e-10 relative. Requires unimodality on the
/// bracket; a monotone function converges to the bracket endpoint. Throws
/// NumericError on non-finite evaluations.
double golden_section_1d(const std::function<double(double)>& fn, double lo, double hi);

/// Every precedence-respecting placement reachable by inserting tasks in any
/// topological order onto any core (no inserted idle time), deduplicated by
/// the resulting parallelism vector. Capped at 8 tasks and 3 cores.
std::vector<Schedule> enumerate_schedules(const TaskGraph& graph, int core_count);

}  // namespace gdvfs
