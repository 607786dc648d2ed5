#pragma once

#include <hetsched/model.hpp>
#include <hetsched/weighted.hpp>

#include <vector>

namespace hetsched {

struct UnweightedConfig {
    double speedup = 1.0;

    void validate() const;
};

/// Prefix sums H[k] = sum_{j=1..k} j / Q(j) for k in [0, up_to].
std::vector<double> count_cost_prefix_sums(const PowerFunction& pf, int up_to);

/// Sum over remaining-size segments of sum_{j=1..n(q)} j/Q(j). Equals half
/// the future objective (flow + energy) of running the queue to completion
/// with no arrivals at speedup 1.
double shadow_potential_unweighted(const MachineState& state);

/// Increase in the shadow potential caused by enqueueing a job of size
/// job.size: integral over [0, size] of (n(q)+1)/Q(n(q)+1).
double assignment_delta_unweighted(const MachineState& state, const Job& job);

int choose_machine_unweighted(const std::vector<MachineState>& machines,
                              const Job& job);

int assign_unweighted(std::vector<MachineState>& machines, const Job& job);

double future_cost_unweighted(const MachineState& state);

/// Time until the SRPT job finishes at speed speedup * Q(n); infinity when
/// idle. Speeds are piecewise constant, so completions are exact.
double time_to_next_completion_unweighted(const MachineState& state,
                                          const UnweightedConfig& config);

StepResult advance_unweighted(MachineState& state,
                              const UnweightedConfig& config, double horizon);

/// Online algorithm: greedy shadow-potential assignment, SRPT + power equal
/// to the number of unfinished jobs per machine.
SimulationResult simulate_unweighted(const Instance& instance,
                                     const UnweightedConfig& config);

SimulationResult simulate_unweighted(const Instance& instance,
                                     const UnweightedConfig& config,
                                     const std::vector<int>& assignment);

SimulationResult simulate_unweighted(const Instance& instance,
                                     const UnweightedConfig& config,
                                     const MachineChooser& chooser,
                                     bool record_trace = true);

}  // namespace hetsched
