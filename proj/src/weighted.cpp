#include <hetsched/weighted.hpp>

#include "event_loop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hetsched {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// HDF pick: lowest inverse density, ties by lowest id.
std::size_t densest_job_index(const MachineState& state) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < state.queue.size(); ++i) {
        const double di = state.queue[i].job.inverse_density();
        const double db = state.queue[best].job.inverse_density();
        if (di < db || (di == db && state.queue[i].job.id < state.queue[best].job.id)) {
            best = i;
        }
    }
    return best;
}

struct RunningJob {
    std::size_t index;
    double inv_density;
    double frac_weight;     // current fractional weight of the running job
    double frac_threshold;  // completion threshold in weight units
    double rest_weight;     // fractional weight of everything else queued
    double time_to_threshold;
};

RunningJob running_job(const MachineState& state, const WeightedConfig& config) {
    RunningJob r{};
    r.index = densest_job_index(state);
    const QueuedJob& qj = state.queue[r.index];
    r.inv_density = qj.job.inverse_density();
    r.frac_weight = qj.fractional_weight();
    r.frac_threshold = config.completion_threshold * qj.job.weight;
    r.rest_weight = state.total_fractional_weight() - r.frac_weight;
    if (r.frac_weight <= r.frac_threshold) {
        r.time_to_threshold = 0.0;
    } else {
        r.time_to_threshold =
            r.inv_density / config.speedup *
            state.power->integral_inv_q(r.rest_weight, r.frac_threshold,
                                        r.frac_weight);
    }
    return r;
}

}  // namespace

void WeightedConfig::validate() const {
    if (!(speedup >= 1.0) || !std::isfinite(speedup)) {
        throw std::invalid_argument("speedup must be >= 1");
    }
    if (!(completion_threshold > 0.0) || !(completion_threshold < 1e-3)) {
        throw std::invalid_argument(
            "completion threshold must be in (0, 1e-3)");
    }
}

double shadow_potential_weighted(const MachineState& state) {
    const ResidualProfile profile = ResidualProfile::weighted(state);
    double total = 0.0;
    double prev = 0.0;
    for (double key : profile.distinct_keys()) {
        total += (key - prev) *
                 state.power->integral_x_over_q(0.0, profile.value_above(key));
        prev = key;
    }
    return total;
}

double assignment_delta_weighted(const MachineState& state, const Job& job) {
    const double d_j = job.inverse_density();
    const double w_j = job.weight;
    const ResidualProfile profile = ResidualProfile::weighted(state);
    double total = 0.0;
    double prev = 0.0;
    for (double key : profile.distinct_keys()) {
        if (key >= d_j) {
            break;
        }
        const double w = profile.value_above(key);
        total += (key - prev) * state.power->integral_x_over_q(w, w + w_j);
        prev = key;
    }
    if (d_j > prev) {
        const double w = profile.value_above(d_j);
        total += (d_j - prev) * state.power->integral_x_over_q(w, w + w_j);
    }
    return total;
}

int choose_machine_weighted(const std::vector<MachineState>& machines,
                            const Job& job) {
    if (machines.empty()) {
        throw std::invalid_argument("no machines");
    }
    int best = 0;
    double best_delta = assignment_delta_weighted(machines[0], job);
    for (std::size_t i = 1; i < machines.size(); ++i) {
        const double delta = assignment_delta_weighted(machines[i], job);
        if (delta < best_delta) {
            best_delta = delta;
            best = static_cast<int>(i);
        }
    }
    return best;
}

int assign_weighted(std::vector<MachineState>& machines, const Job& job) {
    const int machine = choose_machine_weighted(machines, job);
    machines[static_cast<std::size_t>(machine)].queue.push_back(
        QueuedJob{job, job.size});
    return machine;
}

double future_cost_weighted(const MachineState& state) {
    return 2.0 * shadow_potential_weighted(state);
}

double time_to_next_completion_weighted(const MachineState& state,
                                        const WeightedConfig& config) {
    if (state.idle()) {
        return kInf;
    }
    return running_job(state, config).time_to_threshold;
}

StepResult advance_weighted(MachineState& state, const WeightedConfig& config,
                            double horizon) {
    if (horizon < 0.0) {
        throw std::domain_error("horizon must be nonnegative");
    }
    StepResult result;
    if (state.idle()) {
        result.elapsed = horizon;
        return result;
    }

    const RunningJob run = running_job(state, config);
    const PowerFunction& pf = *state.power;
    const double unfinished_weight = state.total_weight();

    if (run.time_to_threshold <= horizon) {
        if (run.time_to_threshold == kInf) {
            throw NonTerminatingSegment(
                "non-terminating segment with infinite horizon; use a "
                "positive completion threshold");
        }
        // Fractional flow and energy both accrue as the integral of the
        // total fractional weight over the step; power is charged at the
        // unaugmented level P(Q(w)) = w.
        const double cost = run.inv_density / config.speedup *
                            pf.integral_x_over_q(run.rest_weight + run.frac_threshold,
                                                 run.rest_weight + run.frac_weight);
        result.accrued.fractional_weighted_flow += cost;
        result.accrued.energy += cost;
        result.accrued.integer_weighted_flow +=
            unfinished_weight * run.time_to_threshold;
        result.completed_job = state.queue[run.index].job.id;
        result.elapsed = run.time_to_threshold;
        state.queue.erase(state.queue.begin() +
                          static_cast<std::ptrdiff_t>(run.index));
        return result;
    }

    if (horizon == 0.0) {
        return result;
    }
    const double target = horizon * config.speedup / run.inv_density;
    double w_end = pf.invert_inv_q(run.rest_weight, run.frac_weight, target);
    w_end = std::clamp(w_end, run.frac_threshold, run.frac_weight);
    const double cost = run.inv_density / config.speedup *
                        pf.integral_x_over_q(run.rest_weight + w_end,
                                             run.rest_weight + run.frac_weight);
    result.accrued.fractional_weighted_flow += cost;
    result.accrued.energy += cost;
    result.accrued.integer_weighted_flow += unfinished_weight * horizon;
    result.elapsed = horizon;
    state.queue[run.index].remaining = w_end * run.inv_density;
    return result;
}

SimulationResult simulate_weighted(const Instance& instance,
                                   const WeightedConfig& config,
                                   const MachineChooser& chooser,
                                   bool record_trace) {
    if (instance.mode != Mode::Weighted) {
        throw std::invalid_argument("instance mode must be weighted");
    }
    config.validate();
    instance.validate();
    return detail::run_event_loop(
        instance, chooser, Mode::Weighted, config.speedup,
        config.completion_threshold,
        [&config](const MachineState& state) {
            return time_to_next_completion_weighted(state, config);
        },
        [&config](MachineState& state, double horizon) {
            return advance_weighted(state, config, horizon);
        },
        record_trace);
}

SimulationResult simulate_weighted(const Instance& instance,
                                   const WeightedConfig& config) {
    return simulate_weighted(
        instance, config,
        [](const std::vector<MachineState>& machines, const Job& job,
           std::size_t) { return choose_machine_weighted(machines, job); });
}

SimulationResult simulate_weighted(const Instance& instance,
                                   const WeightedConfig& config,
                                   const std::vector<int>& assignment) {
    return simulate_weighted(
        instance, config,
        detail::fixed_assignment_chooser(assignment, instance.jobs.size()));
}

}  // namespace hetsched
