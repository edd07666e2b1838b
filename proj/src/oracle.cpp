#include "gdvfs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <unordered_set>

#include "gdvfs/numerics.hpp"

namespace gdvfs {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument(what);
}

/// Full energy of one level at frequency f (memory + instruction + static).
double level_energy(const Platform& p, double stall, int level, double w, double f) {
    const double mp = p.effective_cores(level + 1);
    return mp * p.dyn_coeff * w *
               (stall * std::pow(f, p.dyn_exponent) + std::pow(f, p.dyn_exponent - 1.0)) +
           p.static_slope * w * stall * f + p.static_offset * w / f +
           p.static_slope * w + p.static_offset * w * stall;
}

struct Column {
    int level = 0;  // 0-based
    std::vector<double> freq;
    std::vector<double> tau;     // w / f, descending
    std::vector<double> energy;  // level energy, not monotone
};

Column make_column(const DeadlineProblem& problem, int level, double lo, double hi, int points) {
    const Platform& p = problem.platform();
    const double stall = problem.data_ratio() * p.mem_latency;
    const double w = problem.parallelism().cycles[level];

    Column col;
    col.level = level;
    col.freq.reserve(points);
    const double step = points > 1 ? std::log(hi / lo) / (points - 1) : 0.0;
    for (int j = 0; j < points; ++j) {
        const double f = lo * std::exp(step * j);
        col.freq.push_back(f);
        col.tau.push_back(w / f);
        col.energy.push_back(level_energy(p, stall, level, w, f));
    }
    return col;
}

struct GridSearch {
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> best_idx;
};

/// Exact minimum of the separable energy over the deadline-feasible grid.
/// The innermost dimension is resolved with suffix minima, the outer ones by
/// plain enumeration with feasibility and bound pruning.
std::optional<GridSearch> search_grid(const std::vector<Column>& cols, double slack) {
    const int depth_count = static_cast<int>(cols.size());
    const int inner = depth_count - 1;
    const int points = static_cast<int>(cols[inner].freq.size());

    std::vector<double> suffix_min(points);
    std::vector<int> suffix_arg(points);
    {
        double best = std::numeric_limits<double>::infinity();
        int arg = points - 1;
        for (int j = points - 1; j >= 0; --j) {
            if (cols[inner].energy[j] < best) {
                best = cols[inner].energy[j];
                arg = j;
            }
            suffix_min[j] = best;
            suffix_arg[j] = arg;
        }
    }

    // Cheapest possible remaining time and energy beyond each depth.
    std::vector<double> min_tau_rest(depth_count, 0.0), min_energy_rest(depth_count, 0.0);
    for (int d = depth_count - 2; d >= 0; --d) {
        const Column& next = cols[d + 1];
        min_tau_rest[d] = min_tau_rest[d + 1] + next.tau.back();
        min_energy_rest[d] =
            min_energy_rest[d + 1] + *std::min_element(next.energy.begin(), next.energy.end());
    }

    GridSearch result;
    result.best_idx.assign(depth_count, 0);
    std::vector<int> idx(depth_count, 0);

    auto inner_probe = [&](double tau_sum, double e_sum) {
        const double rem = slack - tau_sum;
        const Column& col = cols[inner];
        if (!(col.tau.back() <= rem)) return;
        // tau descends with the index: feasible indices are a suffix.
        int lo = 0, hi = points - 1;
        while (lo < hi) {
            const int mid = (lo + hi) / 2;
            if (col.tau[mid] <= rem)
                hi = mid;
            else
                lo = mid + 1;
        }
        const double cand = e_sum + suffix_min[lo];
        if (cand < result.best) {
            result.best = cand;
            result.best_idx = idx;
            result.best_idx[inner] = suffix_arg[lo];
        }
    };

    auto descend = [&](auto&& self, int depth, double tau_sum, double e_sum) -> void {
        if (depth == inner) {
            inner_probe(tau_sum, e_sum);
            return;
        }
        const Column& col = cols[depth];
        for (int j = 0; j < static_cast<int>(col.freq.size()); ++j) {
            if (tau_sum + col.tau[j] + min_tau_rest[depth] > slack) continue;
            if (e_sum + col.energy[j] + min_energy_rest[depth] >= result.best) continue;
            idx[depth] = j;
            self(self, depth + 1, tau_sum + col.tau[j], e_sum + col.energy[j]);
        }
    };
    descend(descend, 0, 0.0, 0.0);

    if (!std::isfinite(result.best)) return std::nullopt;
    return result;
}

GridMinimum assemble(const DeadlineProblem& problem, const std::vector<Column>& cols,
                     const GridSearch& found) {
    FrequencyAssignment f;
    f.hz.assign(problem.parallelism().cycles.size(), FrequencyAssignment::unused());
    for (std::size_t d = 0; d < cols.size(); ++d)
        f.hz[cols[d].level] = cols[d].freq[found.best_idx[d]];
    GridMinimum out;
    out.energy = total_energy(problem, f).total;
    out.frequencies = std::move(f);
    return out;
}

struct U64VectorHash {
    std::size_t operator()(const std::vector<std::uint64_t>& v) const noexcept {
        std::size_t h = 1469598103934665603ull;
        for (std::uint64_t x : v) h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return h;
    }
};

}  // namespace

void GridSpec::validate() const {
    require(std::isfinite(freq_min) && std::isfinite(freq_max) && freq_min > 0.0 &&
                freq_min < freq_max,
            "grid needs 0 < f_min < f_max");
    require(points >= 100, "grid needs at least 100 points per dimension");
}

GridSpec default_grid(const DeadlineProblem& problem, int points) {
    const Platform& p = problem.platform();
    const double slack = problem.time_budget() - problem.memory_floor();

    // Feasibility scales: every optimal f_m is at least w_m / slack, and the
    // equal-frequency deadline-tight point sum(w) / slack anchors the top.
    double feas_low = std::numeric_limits<double>::infinity();
    KahanSum total_w;
    for (int i : problem.active_levels()) {
        feas_low = std::min(feas_low, problem.parallelism().cycles[i] / slack);
        total_w.add(problem.parallelism().cycles[i]);
    }
    const double equal_tight = total_w.value() / slack;

    double lo = feas_low;
    double hi = equal_tight;
    if (p.static_offset > 0.0) {
        // Per-level interior minimizers, located by golden section alone; the
        // workload scales out of the argmin so w = 1 serves every level.
        const double seed = std::pow(p.static_offset / p.dyn_coeff, 1.0 / p.dyn_exponent);
        const double stall = problem.data_ratio() * p.mem_latency;
        for (int i : problem.active_levels()) {
            const double fmin = golden_section_1d(
                [&](double f) { return level_energy(p, stall, i, 1.0, f); },
                seed * 1e-6, seed * 1e6);
            lo = std::min(lo, fmin);
            hi = std::max(hi, fmin);
        }
    }

    GridSpec grid;
    grid.freq_min = 0.25 * lo;
    grid.freq_max = 4.0 * hi;
    grid.points = points;
    return grid;
}

/// Per-dimension index ranges of the feasible coarse points whose energy is
/// within `bound`. Rounding the true optimum up to the grid lands inside this
/// sublevel set, so its box (padded by one step) brackets the optimum.
std::vector<std::pair<int, int>> sublevel_box(const std::vector<Column>& cols, double slack,
                                              double bound) {
    const int depth_count = static_cast<int>(cols.size());
    std::vector<std::pair<int, int>> box(depth_count,
                                         {std::numeric_limits<int>::max(), -1});
    std::vector<double> min_tau_rest(depth_count, 0.0), min_energy_rest(depth_count, 0.0);
    for (int d = depth_count - 2; d >= 0; --d) {
        const Column& next = cols[d + 1];
        min_tau_rest[d] = min_tau_rest[d + 1] + next.tau.back();
        min_energy_rest[d] =
            min_energy_rest[d + 1] + *std::min_element(next.energy.begin(), next.energy.end());
    }
    std::vector<int> idx(depth_count, 0);
    auto widen = [&](int depth, int j) {
        box[depth].first = std::min(box[depth].first, j);
        box[depth].second = std::max(box[depth].second, j);
    };
    auto descend = [&](auto&& self, int depth, double tau_sum, double e_sum) -> void {
        const Column& col = cols[depth];
        for (int j = 0; j < static_cast<int>(col.freq.size()); ++j) {
            const double tau = tau_sum + col.tau[j];
            const double energy = e_sum + col.energy[j];
            if (tau + (depth + 1 < depth_count ? min_tau_rest[depth] : 0.0) > slack) continue;
            if (energy + (depth + 1 < depth_count ? min_energy_rest[depth] : 0.0) > bound)
                continue;
            if (depth + 1 == depth_count) {
                for (int d = 0; d < depth_count; ++d) widen(d, idx[d]);
                widen(depth, j);
            } else {
                idx[depth] = j;
                self(self, depth + 1, tau, energy);
            }
        }
    };
    descend(descend, 0, 0.0, 0.0);
    return box;
}

GridMinimum grid_minimize_energy(const DeadlineProblem& problem, const GridSpec& grid) {
    grid.validate();
    const std::vector<int>& active = problem.active_levels();
    if (active.size() > 4)
        throw LimitExceeded("grid oracle supports at most 4 active levels");
    const double slack = problem.time_budget() - problem.memory_floor();

    std::vector<Column> coarse;
    for (int level : active)
        coarse.push_back(make_column(problem, level, grid.freq_min, grid.freq_max, grid.points));
    const auto first = search_grid(coarse, slack);
    if (!first)
        throw InfeasibleDeadline(problem.memory_floor(), problem.time_budget(),
                                 "no feasible grid point");
    GridMinimum best = assemble(problem, coarse, *first);

    // One refinement pass. Rounding every coordinate of the optimum up to the
    // next coarse point keeps it feasible and raises the energy by at most a
    // factor step^alpha, so refining over the box of that coarse sublevel set
    // is certain to bracket the optimum.
    const double step = std::log(grid.freq_max / grid.freq_min) / (grid.points - 1);
    const double bound =
        best.energy * std::exp(problem.platform().dyn_exponent * step) * (1.0 + 1e-9);
    const auto box = sublevel_box(coarse, slack, bound);

    // Spend refinement points proportionally to the box width so the refined
    // spacing resolves the binding deadline surface; the per-dimension budget
    // keeps the combinatorial pass bounded.
    std::vector<std::pair<double, double>> ranges;
    double widest = 0.0;
    for (std::size_t d = 0; d < coarse.size(); ++d) {
        const int lo_idx = std::max(0, box[d].first - 1);
        const int hi_idx = std::min(grid.points - 1, box[d].second + 1);
        double lo = coarse[d].freq[lo_idx];
        double hi = coarse[d].freq[hi_idx];
        if (!(hi > lo)) {  // degenerate box: pad by one step each way
            lo *= std::exp(-step);
            hi *= std::exp(step);
        }
        ranges.emplace_back(lo, hi);
        widest = std::max(widest, std::log(hi / lo));
    }
    const int cap = active.size() <= 2 ? 50000 : (active.size() == 3 ? 6000 : 1200);
    const int fine_points = std::clamp(static_cast<int>(widest / 2e-4) + 2, grid.points, cap);

    std::vector<Column> fine;
    for (std::size_t d = 0; d < coarse.size(); ++d)
        fine.push_back(
            make_column(problem, active[d], ranges[d].first, ranges[d].second, fine_points));
    if (const auto second = search_grid(fine, slack)) {
        GridMinimum refined = assemble(problem, fine, *second);
        if (refined.energy < best.energy) best = std::move(refined);
    }
    return best;
}

double golden_section_1d(const std::function<double(double)>& fn, double lo, double hi) {
    require(std::isfinite(lo) && std::isfinite(hi) && lo < hi, "bad golden-section bracket");
    auto eval = [&](double x) {
        const double y = fn(x);
        if (!std::isfinite(y)) throw NumericError("non-finite evaluation in golden section");
        return y;
    };

    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = eval(x1), f2 = eval(x2);
    for (int i = 0; i < 500; ++i) {
        if (b - a <= 1e-10 * (std::abs(a) + std::abs(b)) * 0.5 + 1e-300) break;
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = eval(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = eval(x2);
        }
    }
    return 0.5 * (a + b);
}

std::vector<Schedule> enumerate_schedules(const TaskGraph& graph, int core_count) {
    const int n = static_cast<int>(graph.tasks().size());
    require(core_count >= 1, "need at least one core");
    if (n > 8 || core_count > 3)
        throw LimitExceeded("exhaustive schedule enumeration is capped at 8 tasks on 3 cores");

    std::vector<std::uint64_t> avail(core_count, 0);
    std::vector<std::uint64_t> finish(n, 0);  // 0 = not placed (cw > 0 everywhere)
    std::vector<TaskPlacement> placements(n);
    std::map<std::vector<std::uint64_t>, Schedule> by_parallelism;
    std::unordered_set<std::vector<std::uint64_t>, U64VectorHash> visited;

    auto state_key = [&](unsigned mask) {
        std::vector<std::uint64_t> key;
        key.reserve(1 + n + core_count);
        key.push_back(mask);
        key.insert(key.end(), finish.begin(), finish.end());
        std::vector<std::uint64_t> sorted_avail(avail);
        std::sort(sorted_avail.begin(), sorted_avail.end());
        key.insert(key.end(), sorted_avail.begin(), sorted_avail.end());
        return key;
    };

    const unsigned full = (1u << n) - 1u;
    auto dfs = [&](auto&& self, unsigned mask) -> void {
        if (mask == full) {
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
            Schedule candidate;
            candidate.placements = placements;
            candidate.core_count = core_count;
            candidate.level_cycles = w;
            by_parallelism.emplace(std::move(w), std::move(candidate));
            return;
        }
        if (!visited.insert(state_key(mask)).second) return;

        for (int t = 0; t < n; ++t) {
            if (mask & (1u << t)) continue;
            std::uint64_t ready_at = 0;
            bool ready = true;
            for (int p : graph.predecessors()[t]) {
                if (!(mask & (1u << p))) {
                    ready = false;
                    break;
                }
                ready_at = std::max(ready_at, finish[p]);
            }
            if (!ready) continue;

            // Identical core availabilities are symmetric; try one of each.
            for (int c = 0; c < core_count; ++c) {
                bool duplicate = false;
                for (int prev = 0; prev < c; ++prev) duplicate |= avail[prev] == avail[c];
                if (duplicate) continue;

                const std::uint64_t start = std::max(ready_at, avail[c]);
                const std::uint64_t end = start + graph.tasks()[t].cycles;
                const std::uint64_t saved = avail[c];
                placements[t] = {c, start, end};
                finish[t] = end;
                avail[c] = end;
                self(self, mask | (1u << t));
                avail[c] = saved;
                finish[t] = 0;
            }
        }
    };
    dfs(dfs, 0u);

    std::vector<Schedule> out;
    out.reserve(by_parallelism.size());
    for (auto& [w, schedule] : by_parallelism) out.push_back(std::move(schedule));
    return out;
}

}  // namespace gdvfs
