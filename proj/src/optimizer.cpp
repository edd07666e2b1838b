#include "gdvfs/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "gdvfs/numerics.hpp"

namespace gdvfs {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument(what);
}

struct LevelTerms {
    int level;       // 0-based
    double cycles;   // w_m
    PowerPolynomial poly;  // rhs holds the c3 part; lambda is added on top
};

std::vector<LevelTerms> active_terms(const DeadlineProblem& problem, EnergyScope scope) {
    std::vector<LevelTerms> terms;
    terms.reserve(problem.active_levels().size());
    for (int i : problem.active_levels())
        terms.push_back({i, problem.parallelism().cycles[i],
                         level_stationarity(problem.platform(), problem.data_ratio(), i + 1, scope)});
    return terms;
}

double invert_stationarity(const PowerPolynomial& poly, double lambda) {
    PowerPolynomial shifted = poly;
    shifted.rhs += lambda;
    return shifted.positive_root();
}

FrequencyAssignment blank_assignment(const DeadlineProblem& problem) {
    FrequencyAssignment f;
    f.hz.assign(problem.parallelism().cycles.size(), FrequencyAssignment::unused());
    return f;
}

OptimizationResult finish(const DeadlineProblem& problem, FrequencyAssignment f,
                          bool binding, double lambda) {
    OptimizationResult out;
    out.energy = total_energy(problem, f);
    out.completion_time = completion_time(problem, f);
    out.frequencies = std::move(f);
    out.deadline_binding = binding;
    out.dual_multiplier = lambda;
    if (!std::isfinite(out.energy.total) || !std::isfinite(out.completion_time))
        throw NumericError("non-finite energy or time at the solved frequencies");
    return out;
}

}  // namespace

PowerPolynomial level_stationarity(const Platform& platform, double data_ratio,
                                   int active_cores, EnergyScope scope) {
    platform.validate();
    require(std::isfinite(data_ratio) && data_ratio >= 0.0, "d must be >= 0");
    const double mp = platform.effective_cores(active_cores);
    const double stall = data_ratio * platform.mem_latency;
    const double alpha = platform.dyn_exponent;

    PowerPolynomial poly;
    poly.exponent = alpha;
    poly.a_top = mp * platform.dyn_coeff * stall * alpha;
    poly.a_mid = mp * platform.dyn_coeff * (alpha - 1.0);
    if (scope == EnergyScope::Total) {
        poly.a_quad = platform.static_slope * stall;
        poly.rhs = platform.static_offset;
    }
    return poly;
}

double unconstrained_level_frequency(const Platform& platform, double data_ratio,
                                     int active_cores) {
    const PowerPolynomial poly = level_stationarity(platform, data_ratio, active_cores);
    if (poly.rhs == 0.0)
        throw NoInteriorMinimum(
            "c3 = 0: no interior minimizer; the unconstrained optimum is f -> 0");
    return poly.positive_root();
}

OptimizationResult solve_constrained(const DeadlineProblem& problem,
                                     const SolveOptions& options) {
    const double budget = problem.time_budget();
    const double cap = options.frequency_cap.value_or(0.0);
    if (options.frequency_cap) require(std::isfinite(cap) && cap > 0.0, "frequency cap must be > 0");

    const std::vector<LevelTerms> terms = active_terms(problem, options.scope);

    auto assignment_at = [&](auto&& level_freq) {
        FrequencyAssignment f = blank_assignment(problem);
        for (const LevelTerms& t : terms) {
            double freq = level_freq(t);
            if (options.frequency_cap) freq = std::min(freq, cap);
            f.hz[t.level] = freq;
        }
        return f;
    };
    auto time_of = [&](const FrequencyAssignment& f) { return completion_time(problem, f); };

    // The capped time is the lambda -> infinity limit; if even that misses the
    // budget the cap makes the instance infeasible.
    if (options.frequency_cap) {
        FrequencyAssignment at_cap = assignment_at([&](const LevelTerms&) { return cap; });
        if (time_of(at_cap) > budget)
            throw InfeasibleDeadline(problem.memory_floor(), budget,
                                     "unreachable under the frequency cap");
    }

    // Interior optimum exists only when the static offset pulls energy up as
    // f -> 0; otherwise energy increases monotonically and the deadline binds.
    if (terms.front().poly.rhs > 0.0) {
        FrequencyAssignment best =
            assignment_at([&](const LevelTerms& t) { return t.poly.positive_root(); });
        if (time_of(best) <= budget) return finish(problem, std::move(best), false, 0.0);
    }

    // Dual bisection: per-level stationarity with multiplier lambda reads
    // P_m(f_m) = lambda; P_m is strictly increasing, so f_m(lambda) is a
    // bracketed root and the completion time decreases strictly in lambda.
    auto freqs_at = [&](double lambda) {
        return assignment_at(
            [&](const LevelTerms& t) { return invert_stationarity(t.poly, lambda); });
    };

    double hi = 1.0;
    FrequencyAssignment f_hi = freqs_at(hi);
    for (int i = 0; i < 400 && time_of(f_hi) > budget; ++i) {
        hi *= 10.0;
        if (!std::isfinite(hi)) throw NumericError("dual bracket growth overflowed");
        f_hi = freqs_at(hi);
    }

    double lo = 0.0;
    double lambda = hi;
    FrequencyAssignment f_best = std::move(f_hi);  // feasible side
    for (int i = 0; i < 300; ++i) {
        const double mid = 0.5 * (lo + hi);
        FrequencyAssignment f_mid = freqs_at(mid);
        const double t_mid = time_of(f_mid);
        if (t_mid > budget) {
            lo = mid;
        } else {
            hi = mid;
            lambda = mid;
            f_best = std::move(f_mid);
            if (std::abs(t_mid - budget) <= 1e-13 * budget) break;
        }
        if (hi - lo <= 1e-15 * hi) break;
    }

    return finish(problem, std::move(f_best), true, lambda);
}

double ratio_relation_residual(const Platform& platform, double data_ratio,
                               int m, int n, double f_m, double f_n) {
    platform.validate();
    require(std::isfinite(data_ratio) && data_ratio >= 0.0, "d must be >= 0");
    require(std::isfinite(f_m) && f_m > 0.0 && std::isfinite(f_n) && f_n > 0.0,
            "frequencies must be > 0");
    const double alpha = platform.dyn_exponent;
    const double stall = data_ratio * platform.mem_latency;
    auto side = [&](int count, double f) {
        const double mp = platform.effective_cores(count);
        return std::pow(mp * (alpha - 1.0 + alpha * stall * f), 1.0 / alpha) * f;
    };
    const double left = side(m, f_m);
    const double right = side(n, f_n);
    return (left - right) / left;
}

RatioBounds ratio_bounds(const Platform& platform, int m, int n) {
    platform.validate();
    require(m >= n, "ratio bounds need m >= n");
    const double np_over_mp = platform.effective_cores(n) / platform.effective_cores(m);
    RatioBounds out;
    out.lower = std::pow(np_over_mp, 1.0 / platform.dyn_exponent);
    out.upper_total = 1.0;
    out.upper_dynamic = std::pow(np_over_mp, 1.0 / (platform.dyn_exponent + 1.0));
    return out;
}

double max_ratio_bound_violation(const Platform& platform, const ParallelismVector& w,
                                 const FrequencyAssignment& f, EnergyScope scope) {
    f.validate_for(w);
    const std::vector<int> active = w.active();
    double worst = -1.0;
    for (std::size_t a = 0; a < active.size(); ++a) {
        for (std::size_t b = a + 1; b < active.size(); ++b) {
            const int n = active[a] + 1;  // fewer active cores
            const int m = active[b] + 1;
            const RatioBounds bounds = ratio_bounds(platform, m, n);
            const double upper =
                scope == EnergyScope::DynamicOnly ? bounds.upper_dynamic : bounds.upper_total;
            const double ratio = f.hz[m - 1] / f.hz[n - 1];
            worst = std::max(worst, std::max(bounds.lower - ratio, ratio - upper));
        }
    }
    return worst;
}

double cubic_ratio_from_overload(const Platform& platform, int active_cores,
                                 double overload) {
    platform.validate();
    if (platform.dyn_exponent != 2.0)
        throw Unsupported("the serial-ratio cubic requires alpha = 2");
    require(std::isfinite(overload) && overload >= 0.0, "overload factor must be >= 0");
    const double serial_weight =
        platform.idle_ratio * platform.core_count + (1.0 - platform.idle_ratio);  // 1'
    const double relative = platform.effective_cores(active_cores) / serial_weight;

    PowerPolynomial cubic;
    cubic.exponent = 2.0;
    cubic.a_top = relative * overload;
    cubic.a_mid = relative;
    cubic.rhs = overload + 1.0;
    return cubic.positive_root();
}

double cubic_ratio(const Platform& platform, double data_ratio, int active_cores,
                   double serial_frequency) {
    require(std::isfinite(serial_frequency) && serial_frequency > 0.0, "f_1 must be > 0");
    require(std::isfinite(data_ratio) && data_ratio >= 0.0, "d must be >= 0");
    const double overload = 2.0 * data_ratio * platform.mem_latency * serial_frequency;
    return cubic_ratio_from_overload(platform, active_cores, overload);
}

CubicLimits cubic_ratio_limits(const Platform& platform, int active_cores) {
    platform.validate();
    const double serial_weight =
        platform.idle_ratio * platform.core_count + (1.0 - platform.idle_ratio);
    const double inv = serial_weight / platform.effective_cores(active_cores);
    return {std::pow(inv, 1.0 / 2.0), std::pow(inv, 1.0 / 3.0)};
}

std::vector<SweepPoint> sweep_ratio_vs_overload(const Platform& platform, int active_cores,
                                                std::span<const double> overloads) {
    std::vector<SweepPoint> table;
    table.reserve(overloads.size());
    for (double g : overloads)
        table.push_back({g, cubic_ratio_from_overload(platform, active_cores, g)});
    return table;
}

double reference_frequency_dynamic(const DeadlineProblem& problem) {
    KahanSum weighted;
    for (int i : problem.active_levels())
        weighted.add(problem.platform().parallelism_weight(i + 1) *
                     problem.parallelism().cycles[i]);
    return weighted.value() / (problem.time_budget() - problem.memory_floor());
}

double reference_frequency_total(const DeadlineProblem& problem) {
    const Platform& p = problem.platform();
    const double stall = problem.data_ratio() * p.mem_latency;
    const double alpha = p.dyn_exponent;

    KahanSum pi_w, pi2_w, w_over_pi, w_pi;
    for (int i : problem.active_levels()) {
        const double w = problem.parallelism().cycles[i];
        const double pi = p.parallelism_weight(i + 1);
        pi_w.add(pi * w);
        pi2_w.add(pi * pi * w);
        w_over_pi.add(w / pi);
        w_pi.add(w * pi);
    }

    const double forced = reference_frequency_dynamic(problem);
    if (p.static_offset == 0.0) return forced;  // energy increasing: left limit is 0

    // d/df' of the expanded family energy, scaled by f'^2.
    PowerPolynomial derivative;
    derivative.exponent = alpha;
    derivative.a_top = p.dyn_coeff * stall * alpha * pi_w.value();
    derivative.a_mid = p.dyn_coeff * (alpha - 1.0) * pi2_w.value();
    derivative.a_quad = p.static_slope * stall * w_over_pi.value();
    derivative.rhs = p.static_offset * w_pi.value();
    return std::max(derivative.positive_root(), forced);
}

FrequencyAssignment reference_assignment(const Platform& platform,
                                         const ParallelismVector& w,
                                         double reference_frequency) {
    platform.validate();
    w.validate(platform.core_count);
    require(std::isfinite(reference_frequency) && reference_frequency > 0.0,
            "reference frequency must be > 0");
    FrequencyAssignment f;
    f.hz.assign(w.cycles.size(), FrequencyAssignment::unused());
    for (int i : w.active())
        f.hz[i] = reference_frequency / platform.parallelism_weight(i + 1);
    return f;
}

}  // namespace gdvfs
