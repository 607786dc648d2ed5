#pragma once

#include <hetsched/model.hpp>
#include <hetsched/weighted.hpp>

#include <limits>
#include <stdexcept>
#include <vector>

namespace hetsched::detail {

// Shared continuous-time event loop. Machines are independent between
// arrivals, but every completion is materialized as a global event so trace
// snapshots show all machines at the event instant. Completions at the same
// instant as an arrival are recorded first.
//
// TimeToCompletion: (const MachineState&) -> double (infinity when idle)
// Advance:          (MachineState&, double horizon) -> StepResult
template <typename TimeToCompletion, typename Advance>
SimulationResult run_event_loop(const Instance& instance,
                                const MachineChooser& chooser, Mode mode,
                                double speedup, double completion_threshold,
                                TimeToCompletion&& time_to_completion,
                                Advance&& advance, bool record_trace = true) {
    constexpr double kInf = std::numeric_limits<double>::infinity();

    SimulationResult result;
    result.trace.mode = mode;
    result.trace.speedup = speedup;
    result.trace.completion_threshold = completion_threshold;

    std::vector<MachineState> states = initial_states(instance);
    double now = 0.0;
    std::size_t next_job = 0;

    while (true) {
        const bool jobs_pending = next_job < instance.jobs.size();
        const double next_arrival =
            jobs_pending ? instance.jobs[next_job].release : kInf;

        // Advance all machines to the next arrival, emitting completion
        // events along the way.
        while (true) {
            double min_completion = kInf;
            for (const MachineState& state : states) {
                min_completion = std::min(min_completion, time_to_completion(state));
            }
            if (now >= next_arrival) {
                break;
            }
            const bool reach_arrival = next_arrival - now <= min_completion;
            const double step =
                reach_arrival ? next_arrival - now : min_completion;
            if (step == kInf) {
                break;  // idle forever: no queued work, no arrivals
            }
            std::vector<std::pair<int, int>> completions;  // (machine, job id)
            for (std::size_t m = 0; m < states.size(); ++m) {
                StepResult r = advance(states[m], step);
                result.metrics += r.accrued;
                if (r.completed_job) {
                    completions.emplace_back(static_cast<int>(m),
                                             *r.completed_job);
                }
            }
            now = reach_arrival ? next_arrival : now + step;
            for (const auto& [machine, job_id] : completions) {
                result.trace.end_time = now;
                if (!record_trace) {
                    continue;
                }
                TraceEvent ev;
                ev.time = now;
                ev.kind = EventKind::Completion;
                ev.job_id = job_id;
                ev.machine = machine;
                ev.snapshot = states;
                result.trace.events.push_back(std::move(ev));
            }
            if (reach_arrival) {
                break;
            }
        }

        if (!jobs_pending) {
            break;  // the inner loop drained every queue
        }

        // Arrivals at this instant, in increasing job-id order; each sees the
        // queues updated by its predecessors.
        while (next_job < instance.jobs.size() &&
               instance.jobs[next_job].release == next_arrival) {
            const Job& job = instance.jobs[next_job];
            const int machine = chooser(states, job, next_job);
            if (machine < 0 || machine >= static_cast<int>(states.size())) {
                throw std::out_of_range("machine index out of range");
            }
            states[static_cast<std::size_t>(machine)].queue.push_back(
                QueuedJob{job, job.size});
            if (record_trace) {
                TraceEvent ev;
                ev.time = next_arrival;
                ev.kind = EventKind::Arrival;
                ev.job_id = job.id;
                ev.machine = machine;
                ev.snapshot = states;
                result.trace.events.push_back(std::move(ev));
            }
            ++next_job;
        }
        now = next_arrival;
    }

    return result;
}

inline MachineChooser fixed_assignment_chooser(const std::vector<int>& map,
                                               std::size_t job_count) {
    if (map.size() != job_count) {
        throw std::invalid_argument(
            "assignment map must cover every job exactly once");
    }
    return [map](const std::vector<MachineState>&, const Job&,
                 std::size_t job_index) { return map.at(job_index); };
}

}  // namespace hetsched::detail
