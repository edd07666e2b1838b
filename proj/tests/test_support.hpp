#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gdvfs/model.hpp"

namespace testing {

/// Deterministic uniform draws from explicit bit mixing; keeps reports
/// byte-identical across runs of the same binary.
struct Rng {
    std::mt19937_64 gen;

    explicit Rng(std::uint64_t seed) : gen(seed) {}

    double uniform(double lo, double hi) {
        const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
        return lo + u * (hi - lo);
    }

    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(gen() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    bool chance(double p) { return uniform(0.0, 1.0) < p; }
};

struct Instance {
    gdvfs::Platform platform;
    gdvfs::ParallelismVector w;
    double d = 0.0;
    double budget = 0.0;

    gdvfs::DeadlineProblem problem() const {
        return gdvfs::DeadlineProblem(platform, w, d, budget);
    }
};

struct InstanceOptions {
    int cores_min = 2, cores_max = 8;
    double alpha_min = 2.0, alpha_max = 3.0;
    double k_min = 0.0, k_max = 0.5;
    double stall_min = 0.0, stall_max = 10.0;  // d * t_a (t_a fixed at 1)
    bool with_static = true;                   // c2, c3 possibly nonzero
    int min_active = 2;
    double budget_freq_min = 0.2, budget_freq_max = 5.0;  // slack = sum(w) / f
};

inline Instance random_instance(Rng& rng, const InstanceOptions& opt = {}) {
    Instance inst;
    gdvfs::Platform& p = inst.platform;
    p.core_count = rng.uniform_int(opt.cores_min, opt.cores_max);
    p.dyn_coeff = rng.uniform(0.5, 2.0);
    p.dyn_exponent = rng.uniform(opt.alpha_min, opt.alpha_max);
    p.idle_ratio = rng.uniform(opt.k_min, opt.k_max);
    p.mem_latency = 1.0;
    if (opt.with_static) {
        p.static_slope = rng.chance(0.3) ? 0.0 : rng.uniform(0.0, 1.0);
        p.static_offset = rng.chance(0.3) ? 0.0 : rng.uniform(0.1, 2.0);
    }
    inst.d = rng.uniform(opt.stall_min, opt.stall_max);

    inst.w.cycles.assign(p.core_count, 0.0);
    double total = 0.0;
    int active = 0;
    for (int i = 0; i < p.core_count; ++i) {
        if (!rng.chance(0.7)) continue;
        inst.w.cycles[i] = rng.uniform(0.1, 10.0);
        total += inst.w.cycles[i];
        ++active;
    }
    while (active < opt.min_active) {
        const int i = rng.uniform_int(0, p.core_count - 1);
        if (inst.w.cycles[i] > 0.0) continue;
        inst.w.cycles[i] = rng.uniform(0.1, 10.0);
        total += inst.w.cycles[i];
        ++active;
    }

    const double slack = total / rng.log_uniform(opt.budget_freq_min, opt.budget_freq_max);
    inst.budget = gdvfs::memory_floor(inst.w, inst.d, p.mem_latency) + slack;
    return inst;
}

/// Memory-intensive instance: the stall product is sized so that
/// alpha * d * t_a * f' stays around `overload`, the regime of the
/// closed-form reference frequency.
inline Instance memory_intensive_instance(Rng& rng, double overload = 3e4) {
    InstanceOptions opt;
    opt.with_static = false;
    Instance inst = random_instance(rng, opt);

    double weighted = 0.0, total = 0.0;
    for (int i = 0; i < inst.platform.core_count; ++i) {
        if (inst.w.cycles[i] <= 0.0) continue;
        weighted += inst.platform.parallelism_weight(i + 1) * inst.w.cycles[i];
        total += inst.w.cycles[i];
    }
    const double slack = rng.uniform(0.5, 2.0);
    const double reference = weighted / slack;
    inst.d = overload / (inst.platform.dyn_exponent * reference);
    inst.budget = inst.d * inst.platform.mem_latency * total + slack;
    return inst;
}

/// Independent bisection on a monotone-increasing function; the oracle used
/// to freeze expected root values.
template <typename Fn>
double bisect_increasing(Fn&& fn, double lo, double hi, int iterations = 200) {
    for (int i = 0; i < iterations; ++i) {
        const double mid = 0.5 * (lo + hi);
        (fn(mid) > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

inline gdvfs::TaskGraph random_dag(Rng& rng, int tasks, double edge_prob, double d,
                                   std::uint64_t max_cycles = 20) {
    std::vector<gdvfs::Task> nodes;
    for (int i = 0; i < tasks; ++i)
        nodes.push_back({"t" + std::to_string(i + 1),
                         static_cast<std::uint64_t>(rng.uniform_int(1, static_cast<int>(max_cycles)))});
    std::vector<std::pair<std::string, std::string>> edges;
    for (int i = 0; i < tasks; ++i)
        for (int j = i + 1; j < tasks; ++j)
            if (rng.chance(edge_prob)) edges.emplace_back(nodes[i].id, nodes[j].id);
    return gdvfs::TaskGraph(std::move(nodes), edges, d);
}

}  // namespace testing
