#pragma once

#include <hetsched/power.hpp>

#include <utility>
#include <vector>

namespace hetsched {

enum class Mode { Weighted, Unweighted };

struct Job {
    int id = 0;
    double release = 0.0;
    double size = 1.0;    // total work p_j > 0
    double weight = 1.0;  // importance w_j > 0

    double density() const { return weight / size; }
    double inverse_density() const { return size / weight; }
    void validate() const;
};

/// A workload: one power function per machine and the release-ordered jobs.
/// Unweighted instances must have unit weights.
struct Instance {
    std::vector<PowerFunction> machines;
    std::vector<Job> jobs;  // sorted by (release, id); normalize() enforces
    Mode mode = Mode::Weighted;

    void normalize();
    void validate() const;
};

struct QueuedJob {
    Job job;
    double remaining = 0.0;  // unprocessed work p_j(t), in (0, p_j]

    double fractional_weight() const {
        return job.weight * remaining / job.size;
    }
};

/// One machine's queue. Holds a non-owning pointer to its power function;
/// the Instance must outlive every state (and trace snapshot) derived from
/// it. Totals are computed from the queue so they can never drift.
struct MachineState {
    const PowerFunction* power = nullptr;
    std::vector<QueuedJob> queue;

    double total_fractional_weight() const;
    double total_weight() const;
    int unfinished_count() const { return static_cast<int>(queue.size()); }
    bool idle() const { return queue.empty(); }
};

std::vector<MachineState> initial_states(const Instance& instance);

/// Step function q -> total mass of queued jobs with key >= q. In weighted
/// mode the key is a job's (static) inverse density and the mass its current
/// fractional weight; in unweighted mode the key is the remaining processing
/// time and each job has mass 1. Entries are kept per job and aggregated on
/// query so ties stay exact.
class ResidualProfile {
public:
    static ResidualProfile weighted(const MachineState& state);
    static ResidualProfile unweighted(const MachineState& state);

    /// Sum of masses with key >= q.
    double value_above(double q) const;
    double total() const { return suffix_.empty() ? 0.0 : suffix_.front(); }
    bool empty() const { return entries_.empty(); }

    /// Distinct keys, ascending.
    std::vector<double> distinct_keys() const;

    const std::vector<std::pair<double, double>>& entries() const {
        return entries_;
    }

private:
    void finalize();

    std::vector<std::pair<double, double>> entries_;  // (key, mass) ascending
    std::vector<double> suffix_;                      // suffix mass sums
};

/// Sorted union of both profiles' keys plus 0.
std::vector<double> merge_breakpoints(const ResidualProfile& a,
                                      const ResidualProfile& b);

struct Metrics {
    double fractional_weighted_flow = 0.0;
    double integer_weighted_flow = 0.0;
    double energy = 0.0;

    /// Weighted mode: fractional weighted flow + energy (the analysis
    /// objective). Unweighted mode: integer flow + energy.
    double objective(Mode mode) const;

    /// Linear accrual over an interval of length dt at constant rates.
    void accrue(double dt, double fractional_weight, double unfinished_weight,
                double power);

    Metrics& operator+=(const Metrics& other);
};

enum class EventKind { Arrival, Completion, Sample };

struct TraceEvent {
    double time = 0.0;
    EventKind kind = EventKind::Sample;
    int job_id = -1;
    int machine = -1;
    std::vector<MachineState> snapshot;  // all machines just after the event
};

struct Trace {
    Mode mode = Mode::Weighted;
    double speedup = 1.0;
    double completion_threshold = 1e-9;  // weighted runs only
    double end_time = 0.0;
    std::vector<TraceEvent> events;
};

}  // namespace hetsched
