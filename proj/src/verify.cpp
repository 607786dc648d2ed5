#include <hetsched/verify.hpp>

#include <hetsched/unweighted.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace hetsched {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    // splitmix64 round
    std::uint64_t z = seed + salt * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<int> random_assignment(std::mt19937_64& rng, std::size_t jobs,
                                   std::size_t machines) {
    std::vector<int> map(jobs);
    for (std::size_t j = 0; j < jobs; ++j) {
        map[j] = static_cast<int>(rng() % machines);
    }
    return map;
}

ConditionTotals fresh_totals() {
    ConditionTotals t;
    t.arrival_worst_margin = kInf;
    t.running_worst_margin = kInf;
    t.worst_completion_jump = -kInf;
    return t;
}

void fold_coupling(ConditionTotals& totals, const CoupledTrace& coupled,
                   const CompetitiveParams& params, int running_samples) {
    const ArrivalReport arrivals = check_arrival_condition(coupled, params);
    totals.arrival_checks += static_cast<long>(arrivals.rows.size());
    for (const ArrivalCheck& row : arrivals.rows) {
        totals.arrival_failures += row.pass ? 0 : 1;
    }
    if (!arrivals.rows.empty()) {
        totals.arrival_worst_margin =
            std::min(totals.arrival_worst_margin, arrivals.worst_margin);
    }

    const RunningReport running =
        check_running_condition(coupled, params, running_samples);
    totals.running_checks += static_cast<long>(running.rows.size());
    totals.running_skipped += running.skipped;
    for (const RunningCheck& row : running.rows) {
        totals.running_failures += row.pass ? 0 : 1;
    }
    if (!running.rows.empty()) {
        totals.running_worst_margin =
            std::min(totals.running_worst_margin, running.worst_margin);
    }

    const BoundaryReport boundary = check_boundary_completion(coupled);
    totals.boundary_checks += 1;
    totals.boundary_failures += boundary.all_pass ? 0 : 1;
    totals.worst_completion_jump =
        std::max(totals.worst_completion_jump, boundary.worst_jump);

    totals.couplings += 1;
}

}  // namespace

void ConditionTotals::merge(const ConditionTotals& other) {
    arrival_checks += other.arrival_checks;
    arrival_failures += other.arrival_failures;
    arrival_worst_margin =
        std::min(arrival_worst_margin, other.arrival_worst_margin);
    running_checks += other.running_checks;
    running_failures += other.running_failures;
    running_skipped += other.running_skipped;
    running_worst_margin =
        std::min(running_worst_margin, other.running_worst_margin);
    boundary_checks += other.boundary_checks;
    boundary_failures += other.boundary_failures;
    worst_completion_jump =
        std::max(worst_completion_jump, other.worst_completion_jump);
    ratio_checks += other.ratio_checks;
    ratio_failures += other.ratio_failures;
    max_ratio = std::max(max_ratio, other.max_ratio);
    ratio_bound = std::max(ratio_bound, other.ratio_bound);
    couplings += other.couplings;
}

bool ConditionTotals::all_pass() const {
    return arrival_failures == 0 && running_failures == 0 &&
           boundary_failures == 0 && ratio_failures == 0;
}

std::vector<CheckSummary> ConditionTotals::check_summaries() const {
    std::vector<CheckSummary> out;
    out.push_back(CheckSummary{"arrival", arrival_checks - arrival_failures,
                               arrival_checks, 0,
                               std::isfinite(arrival_worst_margin)
                                   ? arrival_worst_margin
                                   : 0.0});
    out.push_back(CheckSummary{"running", running_checks - running_failures,
                               running_checks, running_skipped,
                               std::isfinite(running_worst_margin)
                                   ? running_worst_margin
                                   : 0.0});
    out.push_back(CheckSummary{"boundary", boundary_checks - boundary_failures,
                               boundary_checks, 0,
                               std::isfinite(worst_completion_jump)
                                   ? -worst_completion_jump
                                   : 0.0});
    if (ratio_checks > 0) {
        out.push_back(CheckSummary{"ratio", ratio_checks - ratio_failures,
                                   ratio_checks, 0, ratio_bound - max_ratio});
    }
    return out;
}

ConditionTotals verify_instance(const Instance& instance,
                                const VerifyOptions& options) {
    instance.validate();
    const CompetitiveParams params(options.epsilon);
    ConditionTotals totals = fresh_totals();
    const double threshold =
        options.completion_threshold * std::min(1.0, options.epsilon);

    // The online run is shared by every coupling.
    SimulationResult online;
    if (instance.mode == Mode::Weighted) {
        WeightedConfig cfg;
        cfg.speedup = 1.0 + options.epsilon;
        cfg.completion_threshold = threshold;
        online = simulate_weighted(instance, cfg);
    } else {
        UnweightedConfig cfg;
        cfg.speedup = 1.0 + options.epsilon;
        online = simulate_unweighted(instance, cfg);
    }

    std::vector<std::vector<int>> adversaries;
    if (options.with_proxy && !instance.jobs.empty() &&
        assignment_count(instance, kDefaultEnumerationCap) <=
            kDefaultEnumerationCap) {
        const ProxyResult proxy =
            exhaustive_offline_proxy(instance, kDefaultEnumerationCap,
                                     options.exec);
        adversaries.push_back(proxy.best.machine_for_job);

        const double proxy_objective = proxy.metrics.objective(instance.mode);
        const double online_objective = online.metrics.objective(instance.mode);
        const double c = instance.mode == Mode::Weighted ? params.c_weighted
                                                         : params.c_unweighted;
        const double d = instance.mode == Mode::Weighted ? params.d_weighted
                                                         : params.d_unweighted;
        const double bound = 2.0 * (c + d);
        if (proxy_objective > 0.0) {
            const double ratio = online_objective / proxy_objective;
            totals.ratio_checks += 1;
            totals.ratio_failures += ratio <= bound ? 0 : 1;
            totals.max_ratio = std::max(totals.max_ratio, ratio);
            totals.ratio_bound = bound;
        }
    }

    std::mt19937_64 rng(mix_seed(options.seed, 0x61647673ULL));
    for (int k = 0; k < options.random_adversaries; ++k) {
        adversaries.push_back(random_assignment(rng, instance.jobs.size(),
                                                instance.machines.size()));
    }

    for (const std::vector<int>& map : adversaries) {
        const CoupledTrace coupled = make_coupled_trace(
            instance, options.epsilon, map, threshold, &online);
        fold_coupling(totals, coupled, params, options.running_samples);
    }
    return totals;
}

VerifySummary verify_random_suite(const VerifyOptions& options) {
    std::vector<ConditionTotals> results(
        static_cast<std::size_t>(options.instances));
    parallel_for(options.instances, options.exec, [&](std::int64_t i) {
        const std::uint64_t instance_seed =
            mix_seed(options.seed, static_cast<std::uint64_t>(i) + 1);
        std::mt19937_64 rng(instance_seed);
        GenOptions gen;
        gen.seed = instance_seed;
        gen.mode = options.mode;
        gen.family = options.family;
        gen.machines =
            1 + static_cast<int>(rng() % static_cast<std::uint64_t>(
                                           options.max_machines));
        gen.jobs = options.min_jobs +
                   static_cast<int>(rng() % static_cast<std::uint64_t>(
                                              options.max_jobs -
                                              options.min_jobs + 1));
        const Instance instance = generate_instance(gen);

        VerifyOptions per_instance = options;
        per_instance.seed = instance_seed;
        // Couplings for one instance run serially; the suite parallelizes
        // across instances.
        per_instance.exec = Exec::Serial;
        results[static_cast<std::size_t>(i)] =
            verify_instance(instance, per_instance);
    });

    VerifySummary summary;
    summary.totals = fresh_totals();
    for (const ConditionTotals& t : results) {
        summary.totals.merge(t);
    }
    summary.instances = options.instances;
    summary.pass = summary.totals.all_pass();
    return summary;
}

SampleStats check_g_properties(const PowerFunction& pf, std::uint64_t seed,
                               long samples, Exec exec) {
    std::vector<double> slacks(static_cast<std::size_t>(samples));
    parallel_for(samples, exec, [&](std::int64_t i) {
        std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
        const double x = 100.0 * uniform01(rng);
        const double y = 100.0 * uniform01(rng);
        // monotone slack: g(max) - g(min); subadditive slack:
        // g(x) + g(y) - g(x+y). Both must be >= -1e-9.
        const double lo = std::min(x, y);
        const double hi = std::max(x, y);
        const double mono = pf.g(hi) - pf.g(lo);
        const double subadd = pf.g(x) + pf.g(y) - pf.g(x + y);
        slacks[static_cast<std::size_t>(i)] = std::min(mono, subadd);
    });
    SampleStats stats;
    stats.samples = samples;
    stats.worst = kInf;
    for (double s : slacks) {
        stats.worst = std::min(stats.worst, s);
        if (s < -1e-9) {
            ++stats.violations;
        }
    }
    if (samples == 0) {
        stats.worst = 0.0;
    }
    return stats;
}

SampleStats subadditive_inequality_fuzz(const PowerFunction& pf, std::uint64_t seed,
                        long samples, Exec exec) {
    std::vector<double> slacks(static_cast<std::size_t>(samples));
    parallel_for(samples, exec, [&](std::int64_t i) {
        std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
        const double w_a = 10.0 * uniform01(rng);
        const double w_o = 10.0 * uniform01(rng);
        const double w_j = 10.0 * uniform01(rng);
        const InequalityCheck r = check_subadditive_inequality(pf, w_a, w_o, w_j);
        slacks[static_cast<std::size_t>(i)] = r.rhs - r.lhs;
    });
    SampleStats stats;
    stats.samples = samples;
    stats.worst = kInf;
    for (double s : slacks) {
        stats.worst = std::min(stats.worst, s);
        if (s < -1e-9) {
            ++stats.violations;
        }
    }
    if (samples == 0) {
        stats.worst = 0.0;
    }
    return stats;
}

namespace {

// Objective (flow + energy) of draining one machine with no arrivals at
// speedup 1.
double drain_objective(MachineState state, Mode mode) {
    Metrics metrics;
    if (mode == Mode::Weighted) {
        WeightedConfig cfg;  // speedup 1, default threshold
        while (!state.idle()) {
            metrics += advance_weighted(state, cfg, kInf).accrued;
        }
    } else {
        UnweightedConfig cfg;
        while (!state.idle()) {
            metrics += advance_unweighted(state, cfg, kInf).accrued;
        }
    }
    return metrics.objective(mode);
}

}  // namespace

IdentityStats future_cost_identity(Mode mode, std::uint64_t seed,
                                   long target_states, double rel_tol,
                                   Exec exec) {
    // Generous instance budget: each instance contributes up to 4 states.
    const long instance_count = target_states / 2 + 4;
    std::vector<IdentityStats> results(
        static_cast<std::size_t>(instance_count));
    parallel_for(instance_count, exec, [&](std::int64_t i) {
        const std::uint64_t instance_seed =
            mix_seed(seed, static_cast<std::uint64_t>(i));
        std::mt19937_64 rng(instance_seed);
        GenOptions gen;
        gen.seed = instance_seed;
        gen.mode = mode;
        gen.family = (i % 3 == 0) ? PowerFamily::Table : PowerFamily::PolyMix;
        gen.machines = 1 + static_cast<int>(rng() % 2);
        gen.jobs = 1 + static_cast<int>(rng() % 6);
        const Instance instance = generate_instance(gen);

        SimulationResult sim;
        if (mode == Mode::Weighted) {
            WeightedConfig cfg;
            sim = simulate_weighted(instance, cfg);
        } else {
            UnweightedConfig cfg;
            sim = simulate_unweighted(instance, cfg);
        }

        IdentityStats& local = results[static_cast<std::size_t>(i)];
        for (const TraceEvent& ev : sim.trace.events) {
            if (local.checked >= 4) {
                break;
            }
            for (const MachineState& state : ev.snapshot) {
                if (state.idle() || local.checked >= 4) {
                    continue;
                }
                const double expected =
                    mode == Mode::Weighted ? future_cost_weighted(state)
                                           : future_cost_unweighted(state);
                const double actual = drain_objective(state, mode);
                const double rel_err = std::abs(actual - expected) /
                                       std::max(std::abs(expected), 1e-12);
                ++local.checked;
                local.worst_rel_err = std::max(local.worst_rel_err, rel_err);
                if (rel_err > rel_tol) {
                    ++local.failures;
                }
            }
        }
    });

    IdentityStats stats;
    for (const IdentityStats& local : results) {
        stats.checked += local.checked;
        stats.failures += local.failures;
        stats.worst_rel_err = std::max(stats.worst_rel_err, local.worst_rel_err);
    }
    return stats;
}

}  // namespace hetsched
