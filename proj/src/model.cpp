#include "gdvfs/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>
#include <set>

#include "gdvfs/numerics.hpp"

namespace gdvfs {

namespace {

bool finite(double x) { return std::isfinite(x); }

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument(what);
}

}  // namespace

void Platform::validate() const {
    require(core_count >= 2, "core_count must be >= 2");
    require(finite(dyn_coeff) && dyn_coeff > 0.0, "c1 must be > 0");
    require(finite(static_slope) && static_slope >= 0.0, "c2 must be >= 0");
    require(finite(static_offset) && static_offset >= 0.0, "c3 must be >= 0");
    require(finite(dyn_exponent) && dyn_exponent >= 2.0, "alpha must be >= 2");
    require(finite(idle_ratio) && idle_ratio >= 0.0 && idle_ratio < 1.0,
            "K must lie in [0, 1)");
    require(finite(mem_latency) && mem_latency >= 0.0, "t_a must be >= 0");
}

double Platform::effective_cores(int active) const {
    require(active >= 1 && active <= core_count, "active core count out of range");
    return active + idle_ratio * (core_count - active);
}

double Platform::parallelism_weight(int active) const {
    return std::pow(effective_cores(active), 1.0 / (dyn_exponent + 1.0));
}

TaskGraph::TaskGraph(std::vector<Task> tasks,
                     const std::vector<std::pair<std::string, std::string>>& edges,
                     double data_ratio)
    : tasks_(std::move(tasks)), data_ratio_(data_ratio) {
    require(!tasks_.empty(), "graph needs at least one task");
    require(finite(data_ratio_) && data_ratio_ >= 0.0, "d must be >= 0");

    std::map<std::string, int, std::less<>> by_id;
    for (int i = 0; i < static_cast<int>(tasks_.size()); ++i) {
        require(tasks_[i].cycles > 0, "task '" + tasks_[i].id + "' needs cw > 0");
        auto [it, inserted] = by_id.emplace(tasks_[i].id, i);
        require(inserted, "duplicate task id '" + tasks_[i].id + "'");
    }

    succ_.resize(tasks_.size());
    pred_.resize(tasks_.size());
    std::set<std::pair<int, int>> seen;
    for (const auto& [from, to] : edges) {
        auto a = by_id.find(from);
        auto b = by_id.find(to);
        require(a != by_id.end(), "edge references unknown task '" + from + "'");
        require(b != by_id.end(), "edge references unknown task '" + to + "'");
        require(seen.emplace(a->second, b->second).second,
                "duplicate edge " + from + " -> " + to);
        edges_.emplace_back(a->second, b->second);
        succ_[a->second].push_back(b->second);
        pred_[b->second].push_back(a->second);
    }

    // Acyclicity; also fixes the member adjacency used by schedulers.
    if (topological_order().size() != tasks_.size())
        throw InvalidArgument("task graph contains a cycle");
}

int TaskGraph::index_of(std::string_view id) const {
    for (int i = 0; i < static_cast<int>(tasks_.size()); ++i)
        if (tasks_[i].id == id) return i;
    return -1;
}

std::vector<int> TaskGraph::topological_order() const {
    const int n = static_cast<int>(tasks_.size());
    std::vector<int> indegree(n, 0);
    for (int v = 0; v < n; ++v) indegree[v] = static_cast<int>(pred_[v].size());

    auto id_greater = [&](int a, int b) { return tasks_[a].id > tasks_[b].id; };
    std::priority_queue<int, std::vector<int>, decltype(id_greater)> ready(id_greater);
    for (int v = 0; v < n; ++v)
        if (indegree[v] == 0) ready.push(v);

    std::vector<int> order;
    order.reserve(n);
    while (!ready.empty()) {
        const int v = ready.top();
        ready.pop();
        order.push_back(v);
        for (int s : succ_[v])
            if (--indegree[s] == 0) ready.push(s);
    }
    return order;  // shorter than n iff cyclic
}

std::uint64_t TaskGraph::total_cycles() const noexcept {
    std::uint64_t total = 0;
    for (const Task& t : tasks_) total += t.cycles;
    return total;
}

std::vector<int> ParallelismVector::active() const {
    std::vector<int> idx;
    for (int i = 0; i < levels(); ++i)
        if (cycles[i] > 0.0) idx.push_back(i);
    return idx;
}

void ParallelismVector::validate(int core_count) const {
    require(levels() == core_count, "parallelism vector length must equal core count");
    bool any = false;
    for (double w : cycles) {
        require(finite(w) && w >= 0.0, "parallelism entries must be finite and >= 0");
        any = any || w > 0.0;
    }
    require(any, "parallelism vector needs at least one positive entry");
}

double FrequencyAssignment::unused() noexcept {
    return std::numeric_limits<double>::quiet_NaN();
}

bool FrequencyAssignment::used(int level_index) const noexcept {
    return level_index >= 0 && level_index < static_cast<int>(hz.size()) &&
           std::isfinite(hz[level_index]);
}

void FrequencyAssignment::validate_for(const ParallelismVector& w) const {
    require(hz.size() == w.cycles.size(), "frequency and parallelism lengths differ");
    for (int i = 0; i < w.levels(); ++i)
        if (w.cycles[i] > 0.0)
            require(finite(hz[i]) && hz[i] > 0.0,
                    "active level " + std::to_string(i + 1) + " needs f > 0");
}

double memory_floor(const ParallelismVector& w, double data_ratio, double mem_latency) {
    KahanSum floor;
    for (double cycles : w.cycles) floor.add(cycles * data_ratio * mem_latency);
    return floor.value();
}

DeadlineProblem::DeadlineProblem(Platform platform, ParallelismVector parallelism,
                                 double data_ratio, double time_budget)
    : platform_(std::move(platform)),
      parallelism_(std::move(parallelism)),
      data_ratio_(data_ratio),
      time_budget_(time_budget) {
    platform_.validate();
    parallelism_.validate(platform_.core_count);
    require(finite(data_ratio_) && data_ratio_ >= 0.0, "d must be >= 0");
    require(finite(time_budget_) && time_budget_ > 0.0, "t_budget must be > 0");
    memory_floor_ = gdvfs::memory_floor(parallelism_, data_ratio_, platform_.mem_latency);
    if (time_budget_ <= memory_floor_)
        throw InfeasibleDeadline(memory_floor_, time_budget_);
    active_ = parallelism_.active();
}

double chip_power(const Platform& platform, int active_cores, double freq) {
    require(finite(freq) && freq > 0.0, "frequency must be > 0");
    const double mp = platform.effective_cores(active_cores);
    return mp * platform.dyn_coeff * std::pow(freq, platform.dyn_exponent) +
           platform.static_slope * freq + platform.static_offset;
}

double energy_per_cycle(const Platform& platform, int active_cores, double freq) {
    require(finite(freq) && freq > 0.0, "frequency must be > 0");
    const double mp = platform.effective_cores(active_cores);
    return mp * platform.dyn_coeff * std::pow(freq, platform.dyn_exponent - 1.0) +
           platform.static_slope + platform.static_offset / freq;
}

EnergyBreakdown total_energy(const DeadlineProblem& problem, const FrequencyAssignment& f) {
    f.validate_for(problem.parallelism());
    const Platform& p = problem.platform();
    const double stall = problem.data_ratio() * p.mem_latency;  // d * t_a

    KahanSum mem, instr, stat;
    for (int i : problem.active_levels()) {
        const double w = problem.parallelism().cycles[i];
        const double freq = f.hz[i];
        const double mp = p.effective_cores(i + 1);
        mem.add(mp * p.dyn_coeff * w * stall * std::pow(freq, p.dyn_exponent));
        instr.add(mp * p.dyn_coeff * w * std::pow(freq, p.dyn_exponent - 1.0));
        stat.add(p.static_slope * w * stall * freq + p.static_offset * w / freq +
                 p.static_slope * w + p.static_offset * w * stall);
    }

    EnergyBreakdown out;
    out.memory_dynamic = mem.value();
    out.instruction_dynamic = instr.value();
    out.static_energy = stat.value();
    out.total = out.memory_dynamic + out.instruction_dynamic + out.static_energy;
    return out;
}

double completion_time(const DeadlineProblem& problem, const FrequencyAssignment& f) {
    f.validate_for(problem.parallelism());
    KahanSum compute;
    for (int i : problem.active_levels())
        compute.add(problem.parallelism().cycles[i] / f.hz[i]);
    return compute.value() + problem.memory_floor();
}

}  // namespace gdvfs
