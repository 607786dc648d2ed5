#include <hetsched/analysis.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace hetsched {

namespace {

constexpr double kArrivalRelTol = 1e-7;
constexpr double kRunningRelTol = 1e-4;
constexpr double kCompletionJumpTol = 1e-9;

void require_matching_machines(const std::vector<MachineState>& online,
                               const std::vector<MachineState>& adversary) {
    if (online.size() != adversary.size()) {
        throw std::invalid_argument("mismatched machine counts");
    }
    for (std::size_t i = 0; i < online.size(); ++i) {
        if (online[i].power != adversary[i].power) {
            throw std::invalid_argument(
                "online and adversary states must come from the same "
                "instance");
        }
    }
}

// Advances states in place from `from` to `to` using the trace's dynamics.
void advance_states(std::vector<MachineState>& states, Mode mode,
                    double speedup, double completion_threshold, double from,
                    double to) {
    if (to <= from) {
        return;
    }
    if (mode == Mode::Weighted) {
        WeightedConfig cfg;
        cfg.speedup = speedup;
        cfg.completion_threshold = completion_threshold;
        for (MachineState& state : states) {
            double remaining = to - from;
            while (remaining > 0.0 && !state.idle()) {
                const StepResult r = advance_weighted(state, cfg, remaining);
                remaining -= r.elapsed;
                if (r.elapsed == 0.0 && !r.completed_job) {
                    break;
                }
            }
        }
    } else {
        UnweightedConfig cfg;
        cfg.speedup = speedup;
        for (MachineState& state : states) {
            double remaining = to - from;
            while (remaining > 0.0 && !state.idle()) {
                const StepResult r = advance_unweighted(state, cfg, remaining);
                remaining -= r.elapsed;
                if (r.elapsed == 0.0 && !r.completed_job) {
                    break;
                }
            }
        }
    }
}

double trace_span(const CoupledTrace& coupled) {
    return std::max(coupled.online.trace.end_time,
                    coupled.adversary.trace.end_time);
}

// Walks both traces in merged event order, maintaining each side's states
// just before the next event. Completions sort before arrivals at equal
// times; arrivals are consumed as online/adversary pairs since both sides
// see the same job at the same instant.
class CoupledWalker {
public:
    explicit CoupledWalker(const CoupledTrace& coupled)
        : coupled_(coupled),
          online_states_(initial_states(*coupled.instance)),
          adversary_states_(initial_states(*coupled.instance)) {
        for (const Job& job : coupled.instance->jobs) {
            jobs_by_id_.emplace(job.id, &job);
        }
    }

    double phi() const {
        return potential(coupled_.instance->mode, online_states_,
                         adversary_states_, coupled_.epsilon);
    }

    // Visitors:
    //   on_arrival(time, job, adversary_machine, phi_before, phi_after,
    //              adversary_delta)
    //   on_completion(time, job_id, side, phi_before, phi_after)
    template <typename OnArrival, typename OnCompletion>
    void walk(OnArrival&& on_arrival, OnCompletion&& on_completion) {
        const auto& online_events = coupled_.online.trace.events;
        const auto& adversary_events = coupled_.adversary.trace.events;
        std::size_t oi = 0;
        std::size_t ai = 0;
        const Mode mode = coupled_.instance->mode;

        while (oi < online_events.size() || ai < adversary_events.size()) {
            const TraceEvent* oe =
                oi < online_events.size() ? &online_events[oi] : nullptr;
            const TraceEvent* ae =
                ai < adversary_events.size() ? &adversary_events[ai] : nullptr;
            const bool take_online = pick_online(oe, ae);
            const TraceEvent& ev = take_online ? *oe : *ae;

            if (ev.kind == EventKind::Arrival) {
                // Arrivals exist on both sides; consume the pair.
                if (!oe || !ae || oe->kind != EventKind::Arrival ||
                    ae->kind != EventKind::Arrival ||
                    oe->job_id != ae->job_id || oe->time != ae->time) {
                    throw std::logic_error(
                        "coupled traces disagree on the arrival sequence");
                }
                advance_online_to(ev.time);
                advance_adversary_to(ev.time);
                const double phi_before = phi();
                const Job& job = *jobs_by_id_.at(ae->job_id);
                const double adversary_delta =
                    mode == Mode::Weighted
                        ? assignment_delta_weighted(
                              adversary_states_[static_cast<std::size_t>(
                                  ae->machine)],
                              job)
                        : assignment_delta_unweighted(
                              adversary_states_[static_cast<std::size_t>(
                                  ae->machine)],
                              job);
                online_states_ = oe->snapshot;
                adversary_states_ = ae->snapshot;
                online_time_ = adversary_time_ = ev.time;
                ++oi;
                ++ai;
                const double phi_after = phi();
                on_arrival(ev.time, job, ae->machine, phi_before, phi_after,
                           adversary_delta);
                continue;
            }

            // Single completion on one side. The pre-completion state is the
            // stored post snapshot with the finished job put back at its
            // completion-threshold residual, which isolates this event's
            // potential jump exactly.
            const double tau = ev.time;
            std::vector<MachineState>& own =
                take_online ? online_states_ : adversary_states_;
            double& own_time = take_online ? online_time_ : adversary_time_;
            if (take_online) {
                advance_adversary_to(tau);
            } else {
                advance_online_to(tau);
            }
            const Job& job = *jobs_by_id_.at(ev.job_id);
            const double threshold =
                take_online ? coupled_.online.trace.completion_threshold
                            : coupled_.adversary.trace.completion_threshold;
            own = ev.snapshot;
            own_time = tau;
            const double residual =
                mode == Mode::Weighted ? threshold * job.size : 0.0;
            own[static_cast<std::size_t>(ev.machine)].queue.push_back(
                QueuedJob{job, residual});
            const double phi_before = phi();
            own[static_cast<std::size_t>(ev.machine)].queue.pop_back();
            const double phi_after = phi();
            if (take_online) {
                ++oi;
            } else {
                ++ai;
            }
            on_completion(tau, ev.job_id, take_online ? 0 : 1, phi_before,
                          phi_after);
        }
    }

    void advance_both_to(double t) {
        advance_online_to(t);
        advance_adversary_to(t);
    }

private:
    bool pick_online(const TraceEvent* oe, const TraceEvent* ae) const {
        if (!ae) {
            return true;
        }
        if (!oe) {
            return false;
        }
        if (oe->time != ae->time) {
            return oe->time < ae->time;
        }
        const int orank = oe->kind == EventKind::Completion ? 0 : 1;
        const int arank = ae->kind == EventKind::Completion ? 0 : 1;
        return orank <= arank;
    }

    void advance_online_to(double t) {
        advance_states(online_states_, coupled_.instance->mode,
                       coupled_.online.trace.speedup,
                       coupled_.online.trace.completion_threshold,
                       online_time_, t);
        online_time_ = std::max(online_time_, t);
    }

    void advance_adversary_to(double t) {
        advance_states(adversary_states_, coupled_.instance->mode,
                       coupled_.adversary.trace.speedup,
                       coupled_.adversary.trace.completion_threshold,
                       adversary_time_, t);
        adversary_time_ = std::max(adversary_time_, t);
    }

    const CoupledTrace& coupled_;
    std::vector<MachineState> online_states_;
    std::vector<MachineState> adversary_states_;
    double online_time_ = 0.0;
    double adversary_time_ = 0.0;
    std::unordered_map<int, const Job*> jobs_by_id_;
};

}  // namespace

CompetitiveParams::CompetitiveParams(double eps)
    : epsilon(eps),
      c_weighted(1.0 + 1.0 / eps),
      d_weighted(4.0 / eps),
      c_unweighted(4.0),
      d_unweighted(4.0 / eps) {
    if (!(eps > 0.0) || !std::isfinite(eps)) {
        throw std::invalid_argument("epsilon must be positive");
    }
}

CoupledTrace make_coupled_trace(const Instance& instance, double epsilon,
                                const std::vector<int>& adversary_assignment,
                                double completion_threshold,
                                const SimulationResult* online_cached) {
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("epsilon must be positive");
    }
    CoupledTrace coupled;
    coupled.instance = &instance;
    coupled.epsilon = epsilon;
    coupled.adversary_assignment = adversary_assignment;
    if (instance.mode == Mode::Weighted) {
        WeightedConfig online_cfg;
        online_cfg.speedup = 1.0 + epsilon;
        online_cfg.completion_threshold = completion_threshold;
        coupled.online = online_cached ? *online_cached
                                       : simulate_weighted(instance, online_cfg);
        WeightedConfig adversary_cfg;
        adversary_cfg.speedup = 1.0;
        adversary_cfg.completion_threshold = completion_threshold;
        coupled.adversary =
            simulate_weighted(instance, adversary_cfg, adversary_assignment);
    } else {
        UnweightedConfig online_cfg;
        online_cfg.speedup = 1.0 + epsilon;
        coupled.online = online_cached
                             ? *online_cached
                             : simulate_unweighted(instance, online_cfg);
        UnweightedConfig adversary_cfg;
        coupled.adversary =
            simulate_unweighted(instance, adversary_cfg, adversary_assignment);
    }
    return coupled;
}

double potential_weighted(const std::vector<MachineState>& online,
                          const std::vector<MachineState>& adversary,
                          double epsilon) {
    require_matching_machines(online, adversary);
    double total = 0.0;
    for (std::size_t i = 0; i < online.size(); ++i) {
        const ResidualProfile pa = ResidualProfile::weighted(online[i]);
        const ResidualProfile po = ResidualProfile::weighted(adversary[i]);
        const std::vector<double> keys = merge_breakpoints(pa, po);
        double machine_phi = 0.0;
        for (std::size_t k = 1; k < keys.size(); ++k) {
            const double diff =
                pa.value_above(keys[k]) - po.value_above(keys[k]);
            if (diff <= 0.0) {
                continue;
            }
            machine_phi += (keys[k] - keys[k - 1]) *
                           online[i].power->integral_x_over_q(0.0, diff);
        }
        total += machine_phi;
    }
    return 2.0 / epsilon * total;
}

double potential_unweighted(const std::vector<MachineState>& online,
                            const std::vector<MachineState>& adversary,
                            double epsilon) {
    require_matching_machines(online, adversary);
    double total = 0.0;
    for (std::size_t i = 0; i < online.size(); ++i) {
        const ResidualProfile pa = ResidualProfile::unweighted(online[i]);
        const ResidualProfile po = ResidualProfile::unweighted(adversary[i]);
        const std::vector<double> keys = merge_breakpoints(pa, po);
        const auto prefix = count_cost_prefix_sums(
            *online[i].power, online[i].unfinished_count());
        double machine_phi = 0.0;
        for (std::size_t k = 1; k < keys.size(); ++k) {
            const int diff =
                static_cast<int>(std::lround(pa.value_above(keys[k]))) -
                static_cast<int>(std::lround(po.value_above(keys[k])));
            if (diff <= 0) {
                continue;
            }
            machine_phi +=
                (keys[k] - keys[k - 1]) * prefix[static_cast<std::size_t>(diff)];
        }
        total += machine_phi;
    }
    return 4.0 / epsilon * total;
}

double potential(Mode mode, const std::vector<MachineState>& online,
                 const std::vector<MachineState>& adversary, double epsilon) {
    return mode == Mode::Weighted
               ? potential_weighted(online, adversary, epsilon)
               : potential_unweighted(online, adversary, epsilon);
}

std::vector<MachineState> states_at(const Trace& trace,
                                    const Instance& instance, double t) {
    std::vector<MachineState> states = initial_states(instance);
    double from = 0.0;
    auto it = std::upper_bound(
        trace.events.begin(), trace.events.end(), t,
        [](double v, const TraceEvent& ev) { return v < ev.time; });
    if (it != trace.events.begin()) {
        const TraceEvent& ev = *(it - 1);
        states = ev.snapshot;
        from = ev.time;
    }
    advance_states(states, trace.mode, trace.speedup,
                   trace.completion_threshold, from, t);
    return states;
}

ArrivalReport check_arrival_condition(const CoupledTrace& coupled,
                                      const CompetitiveParams& params) {
    if (params.epsilon != coupled.epsilon) {
        throw std::invalid_argument(
            "params epsilon does not match the coupled trace");
    }
    const double d = coupled.instance->mode == Mode::Weighted
                         ? params.d_weighted
                         : params.d_unweighted;
    ArrivalReport report;
    report.worst_margin = std::numeric_limits<double>::infinity();
    CoupledWalker walker(coupled);
    walker.walk(
        [&](double time, const Job& job, int, double phi_before,
            double phi_after, double adversary_delta) {
            ArrivalCheck row;
            row.time = time;
            row.job_id = job.id;
            row.delta_phi = phi_after - phi_before;
            row.bound = d * adversary_delta;
            row.pass = row.delta_phi <=
                       row.bound + kArrivalRelTol * std::max(1.0, row.bound);
            report.rows.push_back(row);
            report.all_pass = report.all_pass && row.pass;
            report.worst_margin =
                std::min(report.worst_margin, row.bound - row.delta_phi);
        },
        [](double, int, int, double, double) {});
    if (report.rows.empty()) {
        report.worst_margin = 0.0;
    }
    return report;
}

RunningReport check_running_condition(const CoupledTrace& coupled,
                                      const CompetitiveParams& params,
                                      int samples) {
    if (params.epsilon != coupled.epsilon) {
        throw std::invalid_argument(
            "params epsilon does not match the coupled trace");
    }
    RunningReport report;
    report.worst_margin = std::numeric_limits<double>::infinity();
    const double span = trace_span(coupled);
    if (span <= 0.0 || samples <= 0) {
        report.worst_margin = 0.0;
        return report;  // nothing ever ran; trivially holds
    }
    const Mode mode = coupled.instance->mode;
    const double h = 1e-6 * span;

    std::vector<double> event_times;
    for (const TraceEvent& ev : coupled.online.trace.events) {
        event_times.push_back(ev.time);
    }
    for (const TraceEvent& ev : coupled.adversary.trace.events) {
        event_times.push_back(ev.time);
    }
    std::sort(event_times.begin(), event_times.end());
    auto near_event = [&](double t) {
        auto it = std::lower_bound(event_times.begin(), event_times.end(), t);
        if (it != event_times.end() && std::abs(*it - t) <= 2.0 * h) {
            return true;
        }
        if (it != event_times.begin() && std::abs(*(it - 1) - t) <= 2.0 * h) {
            return true;
        }
        return false;
    };

    const int candidates = samples + samples / 5 + 8;
    int accepted = 0;
    for (int k = 0; k < candidates && accepted < samples; ++k) {
        const double t = span * (k + 0.5) / candidates;
        if (t - h <= 0.0 || near_event(t)) {
            ++report.skipped;
            continue;
        }
        const auto onl_m = states_at(coupled.online.trace, *coupled.instance, t - h);
        const auto onl_0 = states_at(coupled.online.trace, *coupled.instance, t);
        const auto onl_p = states_at(coupled.online.trace, *coupled.instance, t + h);
        const auto adv_m = states_at(coupled.adversary.trace, *coupled.instance, t - h);
        const auto adv_0 = states_at(coupled.adversary.trace, *coupled.instance, t);
        const auto adv_p = states_at(coupled.adversary.trace, *coupled.instance, t + h);
        const double phi_m = potential(mode, onl_m, adv_m, coupled.epsilon);
        const double phi_0 = potential(mode, onl_0, adv_0, coupled.epsilon);
        const double phi_p = potential(mode, onl_p, adv_p, coupled.epsilon);
        const double dphi = (phi_p - phi_m) / (2.0 * h);
        const double curvature = std::abs(phi_p - 2.0 * phi_0 + phi_m) / (h * h);

        RunningCheck row;
        row.time = t;
        if (mode == Mode::Weighted) {
            double w_a = 0.0;
            double w_o = 0.0;
            for (const MachineState& s : onl_0) {
                w_a += s.total_fractional_weight();
            }
            for (const MachineState& s : adv_0) {
                w_o += s.total_fractional_weight();
            }
            row.lhs = 2.0 * w_a + dphi;
            row.rhs = params.c_weighted * 2.0 * w_o;
        } else {
            double n_a = 0.0;
            double n_o = 0.0;
            for (const MachineState& s : onl_0) {
                n_a += s.unfinished_count();
            }
            for (const MachineState& s : adv_0) {
                n_o += s.unfinished_count();
            }
            row.lhs = 4.0 * n_a + dphi;
            row.rhs = 4.0 * n_o;
        }
        row.tolerance =
            kRunningRelTol * std::max(1.0, row.rhs) + 10.0 * h * curvature;
        row.pass = row.lhs <= row.rhs + row.tolerance;
        report.rows.push_back(row);
        report.all_pass = report.all_pass && row.pass;
        report.worst_margin = std::min(report.worst_margin,
                                       row.rhs + row.tolerance - row.lhs);
        ++accepted;
    }
    if (report.rows.empty()) {
        report.worst_margin = 0.0;
    }
    return report;
}

BoundaryReport check_boundary_completion(const CoupledTrace& coupled) {
    BoundaryReport report;
    CoupledWalker walker(coupled);
    report.phi_start = walker.phi();
    double worst_jump = 0.0;
    long completions = 0;
    walker.walk(
        [](double, const Job&, int, double, double, double) {},
        [&](double, int, int, double phi_before, double phi_after) {
            ++completions;
            worst_jump = std::max(worst_jump, phi_after - phi_before);
        });
    walker.advance_both_to(trace_span(coupled));
    report.phi_end = walker.phi();
    report.completion_events = completions;
    report.worst_jump = worst_jump;
    report.all_pass = report.phi_start == 0.0 && report.phi_end >= 0.0 &&
                      worst_jump <= kCompletionJumpTol;
    return report;
}

InequalityCheck check_subadditive_inequality(const PowerFunction& pf, double w_a, double w_o,
                          double w_j) {
    if (w_a < 0.0 || w_o < 0.0 || w_j < 0.0) {
        throw std::domain_error("inequality arguments must be nonnegative");
    }
    const double hi = std::max(0.0, w_a - w_o);
    const double lo = std::max(0.0, w_a - w_o - w_j);
    InequalityCheck result;
    result.lhs = pf.integral_x_over_q(w_a, w_a + w_j) -
                 pf.integral_x_over_q(lo, hi);
    result.rhs = 2.0 * pf.integral_x_over_q(w_o, w_o + w_j);
    result.pass = result.lhs <= result.rhs + 1e-9;
    return result;
}

}  // namespace hetsched
