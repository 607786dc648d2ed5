#include <hetsched/unweighted.hpp>

#include "event_loop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hetsched {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// SRPT pick: smallest remaining work, ties by lowest id.
std::size_t srpt_job_index(const MachineState& state) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < state.queue.size(); ++i) {
        const double ri = state.queue[i].remaining;
        const double rb = state.queue[best].remaining;
        if (ri < rb || (ri == rb && state.queue[i].job.id < state.queue[best].job.id)) {
            best = i;
        }
    }
    return best;
}

}  // namespace

std::vector<double> count_cost_prefix_sums(const PowerFunction& pf, int up_to) {
    std::vector<double> sums(static_cast<std::size_t>(up_to) + 1, 0.0);
    for (int j = 1; j <= up_to; ++j) {
        const double dj = static_cast<double>(j);
        sums[static_cast<std::size_t>(j)] =
            sums[static_cast<std::size_t>(j) - 1] +
            dj / pf.speed_for_power(dj);
    }
    return sums;
}

void UnweightedConfig::validate() const {
    if (!(speedup >= 1.0) || !std::isfinite(speedup)) {
        throw std::invalid_argument("speedup must be >= 1");
    }
}

double shadow_potential_unweighted(const MachineState& state) {
    const ResidualProfile profile = ResidualProfile::unweighted(state);
    const auto prefix =
        count_cost_prefix_sums(*state.power, state.unfinished_count());
    double total = 0.0;
    double prev = 0.0;
    for (double key : profile.distinct_keys()) {
        const int n = static_cast<int>(std::lround(profile.value_above(key)));
        total += (key - prev) * prefix[static_cast<std::size_t>(n)];
        prev = key;
    }
    return total;
}

double assignment_delta_unweighted(const MachineState& state, const Job& job) {
    const double p = job.size;
    const ResidualProfile profile = ResidualProfile::unweighted(state);
    const PowerFunction& pf = *state.power;
    double total = 0.0;
    double prev = 0.0;
    auto marginal = [&pf](int n_plus_one) {
        const double v = static_cast<double>(n_plus_one);
        return v / pf.speed_for_power(v);
    };
    for (double key : profile.distinct_keys()) {
        if (key >= p) {
            break;
        }
        const int n = static_cast<int>(std::lround(profile.value_above(key)));
        total += (key - prev) * marginal(n + 1);
        prev = key;
    }
    if (p > prev) {
        const int n = static_cast<int>(std::lround(profile.value_above(p)));
        total += (p - prev) * marginal(n + 1);
    }
    return total;
}

int choose_machine_unweighted(const std::vector<MachineState>& machines,
                              const Job& job) {
    if (machines.empty()) {
        throw std::invalid_argument("no machines");
    }
    int best = 0;
    double best_delta = assignment_delta_unweighted(machines[0], job);
    for (std::size_t i = 1; i < machines.size(); ++i) {
        const double delta = assignment_delta_unweighted(machines[i], job);
        if (delta < best_delta) {
            best_delta = delta;
            best = static_cast<int>(i);
        }
    }
    return best;
}

int assign_unweighted(std::vector<MachineState>& machines, const Job& job) {
    const int machine = choose_machine_unweighted(machines, job);
    machines[static_cast<std::size_t>(machine)].queue.push_back(
        QueuedJob{job, job.size});
    return machine;
}

double future_cost_unweighted(const MachineState& state) {
    return 2.0 * shadow_potential_unweighted(state);
}

double time_to_next_completion_unweighted(const MachineState& state,
                                          const UnweightedConfig& config) {
    if (state.idle()) {
        return kInf;
    }
    const std::size_t run = srpt_job_index(state);
    const double n = static_cast<double>(state.unfinished_count());
    const double speed = config.speedup * state.power->speed_for_power(n);
    return state.queue[run].remaining / speed;
}

StepResult advance_unweighted(MachineState& state,
                              const UnweightedConfig& config, double horizon) {
    if (horizon < 0.0) {
        throw std::domain_error("horizon must be nonnegative");
    }
    StepResult result;
    if (state.idle()) {
        result.elapsed = horizon;
        return result;
    }

    const std::size_t run = srpt_job_index(state);
    const double n = static_cast<double>(state.unfinished_count());
    const double speed = config.speedup * state.power->speed_for_power(n);
    const double to_completion = state.queue[run].remaining / speed;
    const bool completes = to_completion <= horizon;
    if (!completes && horizon == 0.0) {
        return result;
    }
    const double dt = completes ? to_completion : horizon;

    // Flow accrues fractionally for the fractional metric (the running job's
    // remaining work shrinks linearly) and at the job count for the integer
    // metric; energy is charged at the unaugmented power n.
    double frac = 0.0;
    for (std::size_t i = 0; i < state.queue.size(); ++i) {
        if (i == run) {
            continue;
        }
        frac += state.queue[i].fractional_weight();
    }
    const double r0 = state.queue[run].remaining;
    const double r1 = completes ? 0.0 : r0 - speed * dt;
    frac += 0.5 * (r0 + r1) / state.queue[run].job.size;  // unit weight
    result.accrued.accrue(dt, frac, n, n);
    result.elapsed = dt;

    if (completes) {
        result.completed_job = state.queue[run].job.id;
        state.queue.erase(state.queue.begin() +
                          static_cast<std::ptrdiff_t>(run));
    } else {
        state.queue[run].remaining = r1;
    }
    return result;
}

SimulationResult simulate_unweighted(const Instance& instance,
                                     const UnweightedConfig& config,
                                     const MachineChooser& chooser,
                                     bool record_trace) {
    if (instance.mode != Mode::Unweighted) {
        throw std::invalid_argument("instance mode must be unweighted");
    }
    config.validate();
    instance.validate();
    return detail::run_event_loop(
        instance, chooser, Mode::Unweighted, config.speedup,
        /*completion_threshold=*/0.0,
        [&config](const MachineState& state) {
            return time_to_next_completion_unweighted(state, config);
        },
        [&config](MachineState& state, double horizon) {
            return advance_unweighted(state, config, horizon);
        },
        record_trace);
}

SimulationResult simulate_unweighted(const Instance& instance,
                                     const UnweightedConfig& config) {
    return simulate_unweighted(
        instance, config,
        [](const std::vector<MachineState>& machines, const Job& job,
           std::size_t) { return choose_machine_unweighted(machines, job); });
}

SimulationResult simulate_unweighted(const Instance& instance,
                                     const UnweightedConfig& config,
                                     const std::vector<int>& assignment) {
    return simulate_unweighted(
        instance, config,
        detail::fixed_assignment_chooser(assignment, instance.jobs.size()));
}

}  // namespace hetsched
