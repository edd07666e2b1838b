// Command-line front end of the gdvfs shared library. Every printed number
// comes out of a library call; the CLI only parses inputs and formats output.
//
// Exit codes: 0 success, 1 input error, 2 infeasible deadline, 3 validation
// failure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gdvfs.h"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitValidation = 3;

struct CliError {
    int code;
    std::string message;
};

[[noreturn]] void fail(int code, const std::string& message) {
    throw CliError{code, message};
}

int exit_code_for(gdvfs_status status) {
    return status == GDVFS_ERR_INFEASIBLE ? kExitInfeasible : kExitInput;
}

void check(gdvfs_status status) {
    if (status != GDVFS_OK) fail(exit_code_for(status), gdvfs_last_error());
}

std::string sci9(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.8e", x);
    return buf;
}

std::string full17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

template <typename T>
using Handle = std::unique_ptr<T, void (*)(T*)>;

using PlatformHandle = Handle<gdvfs_platform>;
using ProblemHandle = Handle<gdvfs_problem>;
using ResultHandle = Handle<gdvfs_result>;
using GraphHandle = Handle<gdvfs_graph>;
using ScheduleHandle = Handle<gdvfs_schedule>;
using RankingHandle = Handle<gdvfs_ranking>;
using WSetHandle = Handle<gdvfs_w_set>;

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(kExitInput, "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        fail(kExitInput, path + ": " + e.what());
    }
}

double require_number(const json& doc, const std::string& key, const std::string& where) {
    if (!doc.contains(key)) fail(kExitInput, where + ": missing key '" + key + "'");
    if (!doc[key].is_number()) fail(kExitInput, where + ": '" + key + "' must be a number");
    return doc[key].get<double>();
}

struct LoadedPlatform {
    PlatformHandle handle;
    gdvfs_platform_params params;
};

LoadedPlatform load_platform(const std::string& path) {
    const json doc = read_json(path);
    if (!doc.is_object()) fail(kExitInput, path + ": platform file must be a JSON object");
    static const std::set<std::string> known = {"c1", "c2", "c3", "alpha", "K", "M", "t_a"};
    for (const auto& [key, value] : doc.items())
        if (!known.count(key)) fail(kExitInput, path + ": unknown key '" + key + "'");

    gdvfs_platform_params params{};
    params.c1 = require_number(doc, "c1", path);
    params.c2 = require_number(doc, "c2", path);
    params.c3 = require_number(doc, "c3", path);
    params.alpha = require_number(doc, "alpha", path);
    params.idle_ratio = require_number(doc, "K", path);
    params.mem_latency = require_number(doc, "t_a", path);
    if (!doc.contains("M") || !doc["M"].is_number_integer())
        fail(kExitInput, path + ": 'M' must be an integer");
    params.core_count = doc["M"].get<int32_t>();

    gdvfs_platform* raw = nullptr;
    check(gdvfs_platform_create(&params, &raw));
    return {PlatformHandle(raw, gdvfs_platform_destroy), params};
}

struct LoadedGraph {
    GraphHandle handle;
    double d = 0.0;
};

LoadedGraph load_graph(const std::string& path) {
    const json doc = read_json(path);
    if (!doc.is_object()) fail(kExitInput, path + ": graph file must be a JSON object");
    static const std::set<std::string> known = {"d", "tasks", "edges"};
    for (const auto& [key, value] : doc.items())
        if (!known.count(key)) fail(kExitInput, path + ": unknown key '" + key + "'");

    const double d = require_number(doc, "d", path);
    if (!doc.contains("tasks") || !doc["tasks"].is_array())
        fail(kExitInput, path + ": 'tasks' must be an array");

    gdvfs_graph* raw = nullptr;
    check(gdvfs_graph_create(d, &raw));
    GraphHandle handle(raw, gdvfs_graph_destroy);

    for (const json& task : doc["tasks"]) {
        if (!task.is_object()) fail(kExitInput, path + ": each task must be an object");
        for (const auto& [key, value] : task.items())
            if (key != "id" && key != "cw")
                fail(kExitInput, path + ": unknown task key '" + key + "'");
        if (!task.contains("id") || !task["id"].is_string())
            fail(kExitInput, path + ": task 'id' must be a string");
        if (!task.contains("cw") || !task["cw"].is_number_integer() ||
            task["cw"].get<std::int64_t>() <= 0)
            fail(kExitInput, path + ": task 'cw' must be a positive integer");
        check(gdvfs_graph_add_task(handle.get(), task["id"].get<std::string>().c_str(),
                                   task["cw"].get<std::uint64_t>()));
    }
    if (doc.contains("edges")) {
        if (!doc["edges"].is_array()) fail(kExitInput, path + ": 'edges' must be an array");
        for (const json& edge : doc["edges"]) {
            if (!edge.is_array() || edge.size() != 2 || !edge[0].is_string() ||
                !edge[1].is_string())
                fail(kExitInput, path + ": each edge must be a pair of task ids");
            check(gdvfs_graph_add_edge(handle.get(), edge[0].get<std::string>().c_str(),
                                       edge[1].get<std::string>().c_str()));
        }
    }
    check(gdvfs_graph_validate(handle.get()));
    return {std::move(handle), d};
}

std::vector<double> parse_w_list(const std::string& text, int cores) {
    std::vector<double> w;
    std::string token;
    std::stringstream stream(text);
    while (std::getline(stream, token, ',')) {
        try {
            std::size_t used = 0;
            w.push_back(std::stod(token, &used));
            if (used != token.size()) throw std::invalid_argument(token);
        } catch (const std::exception&) {
            fail(kExitInput, "bad entry '" + token + "' in -w list");
        }
    }
    if (static_cast<int>(w.size()) != cores)
        fail(kExitInput, "-w needs exactly M=" + std::to_string(cores) + " entries");
    return w;
}

gdvfs_policy parse_policy(const std::string& name) {
    if (name == "cp" || name == "critical-path" || name == "critical_path")
        return GDVFS_POLICY_CRITICAL_PATH;
    if (name == "lwf" || name == "largest-work" || name == "largest_work")
        return GDVFS_POLICY_LARGEST_WORK;
    if (name == "fifo") return GDVFS_POLICY_FIFO;
    fail(kExitInput, "unknown policy '" + name + "' (use cp, lwf or fifo)");
}

const char* policy_name(gdvfs_policy policy) {
    switch (policy) {
        case GDVFS_POLICY_CRITICAL_PATH: return "critical_path";
        case GDVFS_POLICY_LARGEST_WORK: return "largest_work";
        case GDVFS_POLICY_FIFO: return "fifo";
    }
    return "?";
}

json frequencies_to_json(const std::vector<double>& f) {
    json out = json::array();
    for (double hz : f) {
        if (std::isfinite(hz))
            out.push_back(hz);
        else
            out.push_back(nullptr);  // unused level
    }
    return out;
}

json energy_to_json(const gdvfs_energy_breakdown& e) {
    return {{"memory_dynamic", e.memory_dynamic},
            {"instruction_dynamic", e.instruction_dynamic},
            {"static", e.static_energy},
            {"total", e.total}};
}

struct Solution {
    std::vector<double> frequencies;
    gdvfs_energy_breakdown energy{};
    double completion_time = 0.0;
    double lambda = 0.0;
    bool binding = false;
};

Solution run_solver(const gdvfs_problem* problem, int cores, bool dynamic_only,
                    double frequency_cap) {
    gdvfs_solve_options options{};
    options.dynamic_only = dynamic_only ? 1 : 0;
    options.frequency_cap = frequency_cap;
    gdvfs_result* raw = nullptr;
    check(gdvfs_solve(problem, &options, &raw));
    ResultHandle result(raw, gdvfs_result_destroy);

    Solution out;
    out.frequencies.resize(cores);
    check(gdvfs_result_frequencies(result.get(), out.frequencies.data(), cores));
    check(gdvfs_result_energy(result.get(), &out.energy));
    out.completion_time = gdvfs_result_completion_time(result.get());
    out.lambda = gdvfs_result_dual_multiplier(result.get());
    out.binding = gdvfs_result_deadline_binding(result.get()) != 0;
    return out;
}

void print_levels(const std::vector<double>& w, const std::vector<double>& f) {
    std::printf("  %5s  %15s  %15s\n", "level", "w_cycles", "f_hz");
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] > 0.0)
            std::printf("  %5zu  %15s  %15s\n", i + 1, sci9(w[i]).c_str(),
                        sci9(f[i]).c_str());
        else
            std::printf("  %5zu  %15s  %15s\n", i + 1, sci9(w[i]).c_str(), "-");
    }
}

void print_solution(const Solution& s, const std::vector<double>& w) {
    print_levels(w, s.frequencies);
    std::printf("  completion_time_s: %s  deadline_binding: %s  lambda: %s\n",
                sci9(s.completion_time).c_str(), s.binding ? "yes" : "no",
                sci9(s.lambda).c_str());
    std::printf("  energy_J: memory_dynamic=%s instruction_dynamic=%s static=%s total=%s\n",
                sci9(s.energy.memory_dynamic).c_str(),
                sci9(s.energy.instruction_dynamic).c_str(),
                sci9(s.energy.static_energy).c_str(), sci9(s.energy.total).c_str());
}

json solution_to_json(const Solution& s) {
    return {{"frequencies", frequencies_to_json(s.frequencies)},
            {"completion_time", s.completion_time},
            {"deadline_binding", s.binding},
            {"lambda", s.lambda},
            {"energy", energy_to_json(s.energy)}};
}

// ---------------------------------------------------------------- optimize

struct OptimizeArgs {
    std::string platform_path;
    std::string graph_path;
    std::string w_list;
    std::string policy = "cp";
    double d = 0.0;
    double budget = 0.0;
    double f_max = 0.0;
    bool dynamic_only = false;
    bool as_json = false;
};

int run_optimize(const OptimizeArgs& args) {
    const LoadedPlatform platform = load_platform(args.platform_path);
    const int cores = gdvfs_platform_cores(platform.handle.get());

    std::vector<double> w;
    double d = args.d;
    if (!args.graph_path.empty()) {
        const LoadedGraph graph = load_graph(args.graph_path);
        d = graph.d;
        gdvfs_schedule* raw = nullptr;
        check(gdvfs_list_schedule(graph.handle.get(), platform.handle.get(),
                                  parse_policy(args.policy), &raw));
        ScheduleHandle schedule(raw, gdvfs_schedule_destroy);
        w.resize(cores);
        check(gdvfs_schedule_parallelism(schedule.get(), w.data(), cores));
    } else {
        w = parse_w_list(args.w_list, cores);
    }

    gdvfs_problem* raw = nullptr;
    check(gdvfs_problem_create(platform.handle.get(), w.data(), w.size(), d, args.budget,
                               &raw));
    ProblemHandle problem(raw, gdvfs_problem_destroy);
    const double floor = gdvfs_problem_memory_floor(problem.get());

    const Solution total = run_solver(problem.get(), cores, false, args.f_max);

    json doc = {{"platform",
                 {{"M", platform.params.core_count},
                  {"alpha", platform.params.alpha},
                  {"K", platform.params.idle_ratio},
                  {"c1", platform.params.c1},
                  {"c2", platform.params.c2},
                  {"c3", platform.params.c3},
                  {"t_a", platform.params.mem_latency}}},
                {"w", w},
                {"d", d},
                {"t_budget", args.budget},
                {"memory_floor", floor},
                {"solution", solution_to_json(total)}};

    if (args.dynamic_only) {
        const Solution dynamic = run_solver(problem.get(), cores, true, args.f_max);

        double reference = 0.0;
        check(gdvfs_reference_frequency_dynamic(problem.get(), &reference));
        std::vector<double> induced(cores);
        check(gdvfs_reference_assignment(problem.get(), reference, induced.data(), cores));
        gdvfs_energy_breakdown induced_energy{};
        check(gdvfs_total_energy(problem.get(), induced.data(), cores, &induced_energy));
        double induced_time = 0.0;
        check(gdvfs_completion_time(problem.get(), induced.data(), cores, &induced_time));

        doc["dynamic_only"] = {{"solver", solution_to_json(dynamic)},
                               {"reference",
                                {{"f_prime", reference},
                                 {"frequencies", frequencies_to_json(induced)},
                                 {"completion_time", induced_time},
                                 {"energy", energy_to_json(induced_energy)}}}};
        if (!args.as_json) {
            std::printf("problem: d=%s t_budget=%s memory_floor=%s\n", sci9(d).c_str(),
                        sci9(args.budget).c_str(), sci9(floor).c_str());
            std::printf("solution (total energy):\n");
            print_solution(total, w);
            std::printf("solution (dynamic energy only):\n");
            print_solution(dynamic, w);
            std::printf("reference closed form (dynamic regime):\n");
            std::printf("  f_prime_hz: %s\n", sci9(reference).c_str());
            Solution ref;
            ref.frequencies = induced;
            ref.energy = induced_energy;
            ref.completion_time = induced_time;
            ref.binding = true;
            ref.lambda = 0.0;
            print_levels(w, induced);
            std::printf("  completion_time_s: %s\n", sci9(induced_time).c_str());
            std::printf(
                "  energy_J: memory_dynamic=%s instruction_dynamic=%s static=%s total=%s\n",
                sci9(induced_energy.memory_dynamic).c_str(),
                sci9(induced_energy.instruction_dynamic).c_str(),
                sci9(induced_energy.static_energy).c_str(),
                sci9(induced_energy.total).c_str());
            return kExitOk;
        }
    }

    if (args.as_json) {
        std::printf("%s\n", doc.dump(2).c_str());
    } else {
        std::printf("problem: d=%s t_budget=%s memory_floor=%s\n", sci9(d).c_str(),
                    sci9(args.budget).c_str(), sci9(floor).c_str());
        std::printf("solution (total energy):\n");
        print_solution(total, w);
    }
    return kExitOk;
}

// ---------------------------------------------------------------- schedule

struct ScheduleArgs {
    std::string platform_path;
    std::string graph_path;
    std::string policies = "cp,lwf,fifo";
    double budget = 0.0;
    bool rank = false;
    bool as_json = false;
};

int run_schedule(const ScheduleArgs& args) {
    const LoadedPlatform platform = load_platform(args.platform_path);
    const LoadedGraph graph = load_graph(args.graph_path);
    const int cores = gdvfs_platform_cores(platform.handle.get());

    std::vector<gdvfs_policy> policies;
    std::string token;
    std::stringstream stream(args.policies);
    while (std::getline(stream, token, ',')) policies.push_back(parse_policy(token));
    if (policies.empty()) fail(kExitInput, "--policies must name at least one policy");

    gdvfs_ranking* raw = nullptr;
    check(gdvfs_rank_schedules(graph.handle.get(), platform.handle.get(), args.budget,
                               policies.data(), policies.size(), &raw));
    RankingHandle ranking(raw, gdvfs_ranking_destroy);

    const std::size_t rows = gdvfs_ranking_size(ranking.get());
    std::vector<std::size_t> order(rows);
    for (std::size_t i = 0; i < rows; ++i) order[i] = i;
    if (!args.rank) {
        // Restore the caller's policy order; the library sorts by criterion.
        std::vector<std::size_t> by_policy;
        for (gdvfs_policy wanted : policies)
            for (std::size_t i = 0; i < rows; ++i) {
                gdvfs_policy got;
                check(gdvfs_ranking_policy(ranking.get(), i, &got));
                if (got == wanted) by_policy.push_back(i);
            }
        order = std::move(by_policy);
    }

    json out = {{"ranked", args.rank}, {"rows", json::array()}};
    if (!args.as_json)
        std::printf("%-14s %15s %15s %15s %15s %8s\n", "policy", "S_cycles", "S_bar",
                    "criterion", "energy_total_J", "binding");
    for (std::size_t i : order) {
        gdvfs_policy policy;
        check(gdvfs_ranking_policy(ranking.get(), i, &policy));
        gdvfs_schedule_metrics metrics{};
        check(gdvfs_ranking_metrics(ranking.get(), i, &metrics));
        gdvfs_energy_breakdown energy{};
        check(gdvfs_ranking_energy(ranking.get(), i, &energy));
        std::vector<double> freqs(cores), w(cores);
        double time = 0.0, lambda = 0.0;
        int32_t binding = 0;
        check(gdvfs_ranking_solution(ranking.get(), i, freqs.data(), cores, &time, &lambda,
                                     &binding));
        check(gdvfs_ranking_parallelism(ranking.get(), i, w.data(), cores));

        if (args.as_json) {
            out["rows"].push_back({{"policy", policy_name(policy)},
                                   {"w", w},
                                   {"S", metrics.cycle_makespan},
                                   {"S_bar", metrics.weighted_makespan},
                                   {"criterion", metrics.criterion},
                                   {"energy", energy_to_json(energy)},
                                   {"frequencies", frequencies_to_json(freqs)},
                                   {"completion_time", time},
                                   {"lambda", lambda},
                                   {"deadline_binding", binding != 0}});
        } else {
            std::printf("%-14s %15s %15s %15s %15s %8s\n", policy_name(policy),
                        sci9(metrics.cycle_makespan).c_str(),
                        sci9(metrics.weighted_makespan).c_str(),
                        sci9(metrics.criterion).c_str(), sci9(energy.total).c_str(),
                        binding ? "yes" : "no");
        }
    }
    if (args.as_json) std::printf("%s\n", out.dump(2).c_str());
    return kExitOk;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
    std::string platform_path;
    std::string out_path;
    int active = 0;
    double g_min = 0.0;
    double g_max = 100.0;
    int points = 101;
};

int run_sweep(const SweepArgs& args) {
    const LoadedPlatform platform = load_platform(args.platform_path);
    if (args.points < 1) fail(kExitInput, "--points must be >= 1");
    if (args.g_min < 0.0 || args.g_max < args.g_min)
        fail(kExitInput, "need 0 <= g-min <= g-max");

    std::vector<double> overload(args.points);
    for (int i = 0; i < args.points; ++i)
        overload[i] = args.points == 1
                          ? args.g_min
                          : args.g_min + (args.g_max - args.g_min) * i / (args.points - 1);

    std::vector<double> ratio(args.points);
    check(gdvfs_sweep_ratio_vs_overload(platform.handle.get(), args.active, overload.data(),
                                        ratio.data(), overload.size()));
    double at_zero = 0.0, at_high = 0.0;
    check(gdvfs_cubic_ratio_limits(platform.handle.get(), args.active, &at_zero, &at_high));

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!args.out_path.empty()) {
        file.open(args.out_path);
        if (!file) fail(kExitInput, "cannot write '" + args.out_path + "'");
        out = &file;
    }
    *out << "g,x_m\n";
    for (int i = 0; i < args.points; ++i)
        *out << full17(overload[i]) << "," << full17(ratio[i]) << "\n";
    *out << "# quadratic_limit," << full17(at_zero) << "\n";
    *out << "# cubic_limit," << full17(at_high) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- validate

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    double uniform(double lo, double hi) {
        return lo + (static_cast<double>(gen() >> 11) * 0x1.0p-53) * (hi - lo);
    }
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(gen() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    bool chance(double p) { return uniform(0.0, 1.0) < p; }
};

struct RandomInstance {
    gdvfs_platform_params params{};
    PlatformHandle platform{nullptr, gdvfs_platform_destroy};
    std::vector<double> w;
    double d = 0.0;
    double budget = 0.0;
};

RandomInstance random_instance(Rng& rng, int cores_min, int cores_max, bool with_static,
                               int max_active = 8) {
    RandomInstance inst;
    inst.params.core_count = rng.uniform_int(cores_min, cores_max);
    inst.params.c1 = rng.uniform(0.5, 2.0);
    inst.params.alpha = rng.uniform(2.0, 3.0);
    inst.params.idle_ratio = rng.uniform(0.0, 0.5);
    inst.params.mem_latency = 1.0;
    if (with_static) {
        inst.params.c2 = rng.chance(0.3) ? 0.0 : rng.uniform(0.0, 1.0);
        inst.params.c3 = rng.chance(0.3) ? 0.0 : rng.uniform(0.1, 2.0);
    }
    inst.d = rng.uniform(0.0, 10.0);

    inst.w.assign(inst.params.core_count, 0.0);
    double total = 0.0;
    int active = 0;
    for (int i = 0; i < inst.params.core_count && active < max_active; ++i) {
        if (!rng.chance(0.7)) continue;
        inst.w[i] = rng.uniform(0.1, 10.0);
        total += inst.w[i];
        ++active;
    }
    while (active < 2) {
        const int i = rng.uniform_int(0, inst.params.core_count - 1);
        if (inst.w[i] > 0.0) continue;
        inst.w[i] = rng.uniform(0.1, 10.0);
        total += inst.w[i];
        ++active;
    }
    inst.budget = inst.d * total + total / rng.log_uniform(0.2, 5.0);

    gdvfs_platform* raw = nullptr;
    check(gdvfs_platform_create(&inst.params, &raw));
    inst.platform = PlatformHandle(raw, gdvfs_platform_destroy);
    return inst;
}

ProblemHandle make_problem(const RandomInstance& inst) {
    gdvfs_problem* raw = nullptr;
    check(gdvfs_problem_create(inst.platform.get(), inst.w.data(), inst.w.size(), inst.d,
                               inst.budget, &raw));
    return ProblemHandle(raw, gdvfs_problem_destroy);
}

struct SuiteReport {
    std::string name;
    int passed = 0;
    int total = 0;
    std::string note;

    bool ok() const { return passed == total; }
};

SuiteReport suite_oracle_equivalence(Rng& rng, int instances) {
    SuiteReport report{"oracle_equivalence", 0, instances, ""};
    double worst = 0.0;
    for (int i = 0; i < instances; ++i) {
        const RandomInstance inst = random_instance(rng, 3, 3, true, 3);
        const ProblemHandle problem = make_problem(inst);
        const Solution solved =
            run_solver(problem.get(), inst.params.core_count, false, 0.0);
        double grid_energy = 0.0;
        check(gdvfs_grid_minimize_energy(problem.get(), nullptr, nullptr, 0, &grid_energy));
        const double gap = (grid_energy - solved.energy.total) / solved.energy.total;
        worst = std::max(worst, std::abs(gap));
        if (gap >= -1e-9 && gap <= 1e-4) ++report.passed;
    }
    char note[64];
    std::snprintf(note, sizeof(note), "max_rel_gap=%.1e", worst);
    report.note = note;
    return report;
}

SuiteReport suite_theorem1(Rng& rng, int instances) {
    SuiteReport report{"theorem1_membership", 0, instances, ""};
    double worst = -1.0;
    for (int i = 0; i < instances; ++i) {
        const RandomInstance inst = random_instance(rng, 2, 8, true);
        const ProblemHandle problem = make_problem(inst);
        const int cores = inst.params.core_count;
        bool inside = true;
        for (int dynamic_only = 0; dynamic_only <= 1; ++dynamic_only) {
            const Solution s = run_solver(problem.get(), cores, dynamic_only != 0, 0.0);
            double violation = 0.0;
            check(gdvfs_max_ratio_bound_violation(inst.platform.get(), inst.w.data(),
                                                  s.frequencies.data(), cores, dynamic_only,
                                                  &violation));
            worst = std::max(worst, violation);
            inside = inside && violation <= 1e-8;
        }
        if (inside) ++report.passed;
    }
    char note[64];
    std::snprintf(note, sizeof(note), "worst_violation=%.1e", worst);
    report.note = note;
    return report;
}

SuiteReport suite_lemma2(Rng& rng, int instances) {
    SuiteReport report{"lemma2_residual", 0, instances, ""};
    double worst = 0.0;
    for (int i = 0; i < instances; ++i) {
        const RandomInstance inst = random_instance(rng, 2, 8, false);
        const ProblemHandle problem = make_problem(inst);
        const int cores = inst.params.core_count;
        const Solution s = run_solver(problem.get(), cores, true, 0.0);
        double max_res = 0.0;
        for (int a = 0; a < cores; ++a) {
            if (inst.w[a] <= 0.0) continue;
            for (int b = a + 1; b < cores; ++b) {
                if (inst.w[b] <= 0.0) continue;
                double residual = 0.0;
                check(gdvfs_ratio_relation_residual(inst.platform.get(), inst.d, b + 1,
                                                    a + 1, s.frequencies[b],
                                                    s.frequencies[a], &residual));
                max_res = std::max(max_res, std::abs(residual));
            }
        }
        worst = std::max(worst, max_res);
        if (max_res < 1e-8) ++report.passed;
    }
    char note[64];
    std::snprintf(note, sizeof(note), "max_residual=%.1e", worst);
    report.note = note;
    return report;
}

SuiteReport suite_ranking(Rng& rng, int instances) {
    SuiteReport report{"criterion_ranking", 0, instances, ""};
    for (int i = 0; i < instances; ++i) {
        const int tasks = rng.uniform_int(3, 6);
        const int cores = rng.uniform_int(2, 3);
        const double stall = 2e3;

        gdvfs_graph* raw_graph = nullptr;
        check(gdvfs_graph_create(stall, &raw_graph));
        GraphHandle graph(raw_graph, gdvfs_graph_destroy);
        double total_cw = 0.0;
        std::vector<std::string> ids;
        for (int t = 0; t < tasks; ++t) {
            ids.push_back("t" + std::to_string(t + 1));
            const int cw = rng.uniform_int(1, 9);
            total_cw += cw;
            check(gdvfs_graph_add_task(graph.get(), ids.back().c_str(), cw));
        }
        for (int a = 0; a < tasks; ++a)
            for (int b = a + 1; b < tasks; ++b)
                if (rng.chance(0.3))
                    check(gdvfs_graph_add_edge(graph.get(), ids[a].c_str(), ids[b].c_str()));

        gdvfs_platform_params params{};
        params.core_count = cores;
        params.c1 = 1.0;
        params.alpha = 2.0;
        params.idle_ratio = rng.chance(0.5) ? 0.0 : 0.2;
        params.mem_latency = 1.0;
        gdvfs_platform* raw_platform = nullptr;
        check(gdvfs_platform_create(&params, &raw_platform));
        PlatformHandle platform(raw_platform, gdvfs_platform_destroy);

        const double budget = total_cw * stall + total_cw;  // serial floor plus slack

        gdvfs_w_set* raw_set = nullptr;
        check(gdvfs_enumerate_parallelism(graph.get(), cores, &raw_set));
        WSetHandle set(raw_set, gdvfs_w_set_destroy);

        double best_criterion = 0.0, crit_min_energy = 0.0, min_energy = 0.0;
        for (std::size_t s = 0; s < gdvfs_w_set_size(set.get()); ++s) {
            std::vector<double> w(cores);
            check(gdvfs_w_set_get(set.get(), s, w.data(), cores));
            gdvfs_schedule_metrics metrics{};
            check(gdvfs_metrics_from_parallelism(platform.get(), w.data(), cores, stall,
                                                 budget, &metrics));
            gdvfs_problem* raw_problem = nullptr;
            check(gdvfs_problem_create(platform.get(), w.data(), cores, stall, budget,
                                       &raw_problem));
            ProblemHandle problem(raw_problem, gdvfs_problem_destroy);
            const Solution dyn = run_solver(problem.get(), cores, true, 0.0);
            const double energy =
                dyn.energy.memory_dynamic + dyn.energy.instruction_dynamic;
            if (s == 0 || metrics.criterion < best_criterion) {
                best_criterion = metrics.criterion;
                crit_min_energy = energy;
            }
            if (s == 0 || energy < min_energy) min_energy = energy;
        }
        if (crit_min_energy <= min_energy * (1.0 + 1e-9)) ++report.passed;
    }
    return report;
}

struct ValidateArgs {
    std::uint64_t seed = 12345;
    int instances = 200;
};

int run_validate(const ValidateArgs& args) {
    std::printf("validate: seed=%llu instances=%d\n",
                static_cast<unsigned long long>(args.seed), args.instances);
    Rng rng(args.seed);
    const std::vector<SuiteReport> reports = {
        suite_oracle_equivalence(rng, std::min(50, args.instances / 8)),
        suite_theorem1(rng, args.instances),
        suite_lemma2(rng, args.instances),
        suite_ranking(rng, std::min(12, args.instances / 16)),
    };
    bool all_ok = true;
    for (const SuiteReport& report : reports) {
        std::printf("%s: %d/%d ok%s%s\n", report.name.c_str(), report.passed, report.total,
                    report.note.empty() ? "" : " ", report.note.c_str());
        all_ok = all_ok && report.ok();
    }
    std::printf("%s\n", all_ok ? "PASS" : "FAIL");
    return all_ok ? kExitOk : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"global DVFS frequency selection for memory intensive workloads"};
    app.require_subcommand(1);

    OptimizeArgs optimize_args;
    CLI::App* optimize = app.add_subcommand(
        "optimize", "solve the deadline-constrained frequency selection problem");
    optimize->add_option("-p,--platform", optimize_args.platform_path, "platform JSON file")
        ->required();
    auto* graph_opt =
        optimize->add_option("-g,--graph", optimize_args.graph_path, "task graph JSON file");
    auto* w_opt = optimize->add_option("-w", optimize_args.w_list,
                                       "parallelism vector, comma separated cycles");
    graph_opt->excludes(w_opt);
    w_opt->excludes(graph_opt);
    optimize->add_option("--d", optimize_args.d, "data-to-CPU quotient for the -w form");
    optimize->add_option("-t,--budget", optimize_args.budget, "deadline in seconds")
        ->required();
    optimize->add_option("--policy", optimize_args.policy,
                         "schedule policy when -g is given (cp, lwf, fifo)");
    optimize->add_option("--f-max", optimize_args.f_max, "optional frequency cap in Hz");
    optimize->add_flag("--dynamic-only", optimize_args.dynamic_only,
                       "also solve for dynamic energy and print the closed form");
    optimize->add_flag("--json", optimize_args.as_json, "machine readable output");

    ScheduleArgs schedule_args;
    CLI::App* schedule =
        app.add_subcommand("schedule", "compare list schedules by the energy criterion");
    schedule->add_option("-p,--platform", schedule_args.platform_path, "platform JSON file")
        ->required();
    schedule->add_option("-g,--graph", schedule_args.graph_path, "task graph JSON file")
        ->required();
    schedule->add_option("-t,--budget", schedule_args.budget, "deadline in seconds")
        ->required();
    schedule->add_option("--policies", schedule_args.policies,
                         "comma separated policies (cp, lwf, fifo)");
    schedule->add_flag("--rank", schedule_args.rank, "sort rows by the criterion");
    schedule->add_flag("--json", schedule_args.as_json, "machine readable output");

    SweepArgs sweep_args;
    CLI::App* sweep = app.add_subcommand(
        "sweep", "serial-to-parallel frequency ratio versus memory overload (alpha = 2)");
    sweep->add_option("-p,--platform", sweep_args.platform_path, "platform JSON file")
        ->required();
    sweep->add_option("-m", sweep_args.active, "active core count of the parallel region")
        ->required();
    sweep->add_option("--g-min", sweep_args.g_min, "smallest overload factor");
    sweep->add_option("--g-max", sweep_args.g_max, "largest overload factor");
    sweep->add_option("--points", sweep_args.points, "number of sweep rows");
    sweep->add_option("-o,--output", sweep_args.out_path, "CSV output file (default stdout)");

    ValidateArgs validate_args;
    CLI::App* validate =
        app.add_subcommand("validate", "run the randomized property suites");
    validate->add_option("--seed", validate_args.seed, "RNG seed");
    validate->add_option("--instances", validate_args.instances, "instances per suite")
        ->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (optimize->parsed()) {
            if (optimize_args.graph_path.empty() && optimize_args.w_list.empty())
                fail(kExitInput, "optimize needs either -g or -w");
            return run_optimize(optimize_args);
        }
        if (schedule->parsed()) return run_schedule(schedule_args);
        if (sweep->parsed()) return run_sweep(sweep_args);
        if (validate->parsed()) return run_validate(validate_args);
    } catch (const CliError& e) {
        std::fprintf(stderr, "error: %s\n", e.message.c_str());
        return e.code;
    }
    return kExitInput;
}
