#pragma once

#include <hetsched/model.hpp>

#include <functional>
#include <optional>
#include <vector>

namespace hetsched {

struct WeightedConfig {
    /// Speed augmentation factor: the machine runs at speedup * Q(w) while
    /// being charged power w.
    double speedup = 1.0;
    /// A job completes once its fractional weight falls below this fraction
    /// of its original weight. Exact completion can take unbounded time for
    /// power curves with Q linear near 0.
    double completion_threshold = 1e-9;

    void validate() const;
};

/// Future fractional weighted flow of the queue if no further jobs arrive:
/// sum over inverse-density segments of integral_x_over_q(0, w(q)).
double shadow_potential_weighted(const MachineState& state);

/// Increase in the shadow potential caused by enqueueing `job`, evaluated
/// piecewise-exactly over the profile's breakpoints restricted to
/// [0, inverse density of the job].
double assignment_delta_weighted(const MachineState& state, const Job& job);

/// Index of the machine with the smallest assignment delta (ties go to the
/// lowest index). Does not modify the states.
int choose_machine_weighted(const std::vector<MachineState>& machines,
                            const Job& job);

/// choose_machine_weighted + insertion into the chosen queue.
int assign_weighted(std::vector<MachineState>& machines, const Job& job);

/// Closed-form objective (fractional flow + energy) of running the queue to
/// completion with no arrivals at speedup 1: twice the shadow potential.
double future_cost_weighted(const MachineState& state);

/// Time until the densest queued job reaches its completion threshold;
/// infinity for an idle machine.
double time_to_next_completion_weighted(const MachineState& state,
                                        const WeightedConfig& config);

struct StepResult {
    double elapsed = 0.0;
    Metrics accrued;
    std::optional<int> completed_job;
};

/// Runs the densest job (ties by lowest id) for at most `horizon`, stopping
/// early at its completion threshold. Time and cost are integrated in closed
/// form / quadrature over the job's fractional weight; nothing is
/// discretized.
StepResult advance_weighted(MachineState& state, const WeightedConfig& config,
                            double horizon);

struct SimulationResult {
    Trace trace;
    Metrics metrics;
};

/// Chooses the machine for an arriving job. `job_index` is the position in
/// the instance's release-ordered job list.
using MachineChooser = std::function<int(
    const std::vector<MachineState>&, const Job&, std::size_t job_index)>;

/// Online algorithm: greedy shadow-potential assignment, HDF + power equal
/// to the fractional weight per machine.
SimulationResult simulate_weighted(const Instance& instance,
                                   const WeightedConfig& config);

/// Same per-machine policy with a fixed job -> machine assignment.
SimulationResult simulate_weighted(const Instance& instance,
                                   const WeightedConfig& config,
                                   const std::vector<int>& assignment);

/// record_trace=false skips event materialization (metrics only), which the
/// exhaustive enumeration uses.
SimulationResult simulate_weighted(const Instance& instance,
                                   const WeightedConfig& config,
                                   const MachineChooser& chooser,
                                   bool record_trace = true);

}  // namespace hetsched
