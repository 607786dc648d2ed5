#pragma once

#include <hetsched/model.hpp>
#include <hetsched/unweighted.hpp>
#include <hetsched/weighted.hpp>

#include <vector>

namespace hetsched {

/// Constants of the local-competitiveness conditions as functions of the
/// augmentation epsilon (online speedup = 1 + epsilon).
struct CompetitiveParams {
    double epsilon;
    double c_weighted;    // 1 + 1/eps
    double d_weighted;    // 4 / eps
    double c_unweighted;  // 4
    double d_unweighted;  // 4 / eps

    explicit CompetitiveParams(double eps);
};

/// The online greedy run (speedup 1 + epsilon) coupled with an adversary
/// that uses a fixed job -> machine assignment and the same per-machine
/// policy at speedup 1. The condition checks hold against any fixed
/// assignment, so the adversary does not have to be optimal.
struct CoupledTrace {
    const Instance* instance = nullptr;
    double epsilon = 0.0;
    std::vector<int> adversary_assignment;
    SimulationResult online;
    SimulationResult adversary;
};

CoupledTrace make_coupled_trace(const Instance& instance, double epsilon,
                                const std::vector<int>& adversary_assignment,
                                double completion_threshold = 1e-12,
                                const SimulationResult* online_cached = nullptr);

/// Potential (2/eps) * sum_i over merged breakpoints of
/// integral_x_over_q(0, (w_a(q) - w_o(q))_+), evaluated piecewise exactly.
double potential_weighted(const std::vector<MachineState>& online,
                          const std::vector<MachineState>& adversary,
                          double epsilon);

/// Potential (4/eps) * sum_i over merged breakpoints of
/// sum_{j=1..(n_a(q)-n_o(q))_+} j/Q(j).
double potential_unweighted(const std::vector<MachineState>& online,
                            const std::vector<MachineState>& adversary,
                            double epsilon);

double potential(Mode mode, const std::vector<MachineState>& online,
                 const std::vector<MachineState>& adversary, double epsilon);

/// Machine states of a finished trace at an arbitrary time: the snapshot at
/// the last event before t advanced forward by the trace's own dynamics.
std::vector<MachineState> states_at(const Trace& trace,
                                    const Instance& instance, double t);

struct ArrivalCheck {
    double time = 0.0;
    int job_id = -1;
    double delta_phi = 0.0;
    double bound = 0.0;  // d * adversary assignment delta
    bool pass = true;
};

struct ArrivalReport {
    std::vector<ArrivalCheck> rows;
    bool all_pass = true;
    double worst_margin = 0.0;  // min over rows of bound - delta_phi
};

/// Per arrival: Phi evaluated just before and just after the job is inserted
/// on both sides; passes iff the increase is at most d times the adversary's
/// own assignment delta (plus a small relative tolerance).
ArrivalReport check_arrival_condition(const CoupledTrace& coupled,
                                      const CompetitiveParams& params);

struct RunningCheck {
    double time = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double tolerance = 0.0;
    bool pass = true;
};

struct RunningReport {
    std::vector<RunningCheck> rows;
    long skipped = 0;
    bool all_pass = true;
    double worst_margin = 0.0;  // min over rows of rhs + tol - lhs
};

/// Samples non-event times and checks G_A + dPhi/dt <= c * G_OPT with a
/// central finite difference (step h = 1e-6 * span) and a curvature-aware
/// tolerance. Weighted: 2 w_a + Phi' <= (1 + 1/eps) 2 w_o. Unweighted:
/// 4 n_a + Phi' <= 4 n_o.
RunningReport check_running_condition(const CoupledTrace& coupled,
                                      const CompetitiveParams& params,
                                      int samples);

struct BoundaryReport {
    double phi_start = 0.0;
    double phi_end = 0.0;
    long completion_events = 0;
    double worst_jump = 0.0;  // max Phi increase across completions
    bool all_pass = true;
};

/// Phi must be 0 before any release, nonnegative at the end, and must not
/// increase at completion events (beyond 1e-9 absolute).
BoundaryReport check_boundary_completion(const CoupledTrace& coupled);

struct InequalityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = true;
};

/// Subadditive-function inequality with g(x) = x/Q(x):
/// int_{w_a}^{w_a+w_j} g - int_{(w_a-w_o-w_j)_+}^{(w_a-w_o)_+} g
///   <= 2 int_0^{w_j} g(w_o + x) dx.
InequalityCheck check_subadditive_inequality(const PowerFunction& pf, double w_a, double w_o,
                          double w_j);

}  // namespace hetsched
