#include <hetsched/baseline.hpp>

#include <hetsched/unweighted.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace hetsched {

void AssignmentMap::validate(const Instance& instance) const {
    if (machine_for_job.size() != instance.jobs.size()) {
        throw std::invalid_argument("assignment map must cover every job");
    }
    for (int machine : machine_for_job) {
        if (machine < 0 ||
            machine >= static_cast<int>(instance.machines.size())) {
            throw std::invalid_argument("assignment map machine out of range");
        }
    }
}

namespace {

MachineChooser chooser_for(const std::vector<int>& map) {
    return [&map](const std::vector<MachineState>&, const Job&,
                  std::size_t job_index) { return map.at(job_index); };
}

}  // namespace

Metrics simulate_fixed_assignment(const Instance& instance,
                                  const AssignmentMap& map) {
    map.validate(instance);
    if (instance.mode == Mode::Weighted) {
        WeightedConfig config;  // speedup 1, default threshold
        return simulate_weighted(instance, config,
                                 chooser_for(map.machine_for_job),
                                 /*record_trace=*/false)
            .metrics;
    }
    UnweightedConfig config;
    return simulate_unweighted(instance, config,
                               chooser_for(map.machine_for_job),
                               /*record_trace=*/false)
        .metrics;
}

std::int64_t assignment_count(const Instance& instance, std::int64_t cap) {
    const std::int64_t m = static_cast<std::int64_t>(instance.machines.size());
    std::int64_t total = 1;
    for (std::size_t j = 0; j < instance.jobs.size(); ++j) {
        if (total > cap / std::max<std::int64_t>(m, 1)) {
            return cap + 1;
        }
        total *= m;
    }
    return total;
}

ProxyResult exhaustive_offline_proxy(const Instance& instance,
                                     std::int64_t cap, Exec exec) {
    instance.validate();
    const std::int64_t m = static_cast<std::int64_t>(instance.machines.size());
    const std::int64_t total = assignment_count(instance, cap);
    if (total > cap) {
        throw EnumerationCapExceeded(
            "assignment enumeration exceeds the cap of " + std::to_string(cap) +
            " maps; use the round-robin or greedy-weight baselines instead");
    }

    auto map_for_index = [&](std::int64_t index) {
        AssignmentMap map;
        map.machine_for_job.resize(instance.jobs.size());
        for (std::size_t j = 0; j < instance.jobs.size(); ++j) {
            map.machine_for_job[j] = static_cast<int>(index % m);
            index /= m;
        }
        return map;
    };

    std::vector<double> objectives(static_cast<std::size_t>(total));
    parallel_for(total, exec, [&](std::int64_t k) {
        const AssignmentMap map = map_for_index(k);
        objectives[static_cast<std::size_t>(k)] =
            simulate_fixed_assignment(instance, map).objective(instance.mode);
    });

    std::int64_t best = 0;
    for (std::int64_t k = 1; k < total; ++k) {
        if (objectives[static_cast<std::size_t>(k)] <
            objectives[static_cast<std::size_t>(best)]) {
            best = k;
        }
    }
    ProxyResult result;
    result.best = map_for_index(best);
    result.metrics = simulate_fixed_assignment(instance, result.best);
    return result;
}

AssignmentMap round_robin_assignment(const Instance& instance) {
    AssignmentMap map;
    map.machine_for_job.resize(instance.jobs.size());
    const int m = static_cast<int>(instance.machines.size());
    for (std::size_t j = 0; j < instance.jobs.size(); ++j) {
        map.machine_for_job[j] = static_cast<int>(j) % m;
    }
    return map;
}

AssignmentMap greedy_total_weight_assignment(const Instance& instance) {
    AssignmentMap map;
    map.machine_for_job.resize(instance.jobs.size());
    std::vector<double> load(instance.machines.size(), 0.0);
    for (std::size_t j = 0; j < instance.jobs.size(); ++j) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < load.size(); ++i) {
            if (load[i] < load[best]) {
                best = i;
            }
        }
        map.machine_for_job[j] = static_cast<int>(best);
        load[best] += instance.jobs[j].weight;
    }
    return map;
}

}  // namespace hetsched
