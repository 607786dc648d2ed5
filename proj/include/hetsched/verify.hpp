#pragma once

#include <hetsched/analysis.hpp>
#include <hetsched/baseline.hpp>
#include <hetsched/generator.hpp>
#include <hetsched/io.hpp>
#include <hetsched/parallel.hpp>

#include <cstdint>
#include <vector>

namespace hetsched {

struct VerifyOptions {
    Mode mode = Mode::Weighted;
    double epsilon = 0.5;
    std::uint64_t seed = 1;
    int instances = 100;
    int max_machines = 3;
    int min_jobs = 2;
    int max_jobs = 8;
    PowerFamily family = PowerFamily::PolyTableMix;
    /// Adversaries per instance: the exhaustive proxy assignment (when
    /// enabled and feasible) plus this many random fixed assignments.
    int random_adversaries = 20;
    int running_samples = 100;
    bool with_proxy = true;
    /// Tight threshold so adversary-side completion jumps of Phi stay below
    /// the 1e-9 completion-condition tolerance. The jump scales like
    /// threshold / epsilon, so couplings use this value scaled by
    /// min(1, epsilon).
    double completion_threshold = 1e-12;
    Exec exec = Exec::Parallel;
};

/// Aggregated outcomes of the local-competitiveness checks over one or many
/// coupled traces.
struct ConditionTotals {
    long arrival_checks = 0;
    long arrival_failures = 0;
    double arrival_worst_margin = 0.0;  // min of bound - delta_phi

    long running_checks = 0;
    long running_failures = 0;
    long running_skipped = 0;
    double running_worst_margin = 0.0;  // min of rhs + tol - lhs

    long boundary_checks = 0;
    long boundary_failures = 0;
    double worst_completion_jump = 0.0;  // max Phi increase at completions

    long ratio_checks = 0;
    long ratio_failures = 0;
    double max_ratio = 0.0;
    double ratio_bound = 0.0;

    long couplings = 0;

    void merge(const ConditionTotals& other);
    bool all_pass() const;
    std::vector<CheckSummary> check_summaries() const;
};

/// Runs every adversary coupling for one instance and aggregates the
/// arrival/running/boundary checks plus the empirical competitive ratio
/// (online at speedup 1+epsilon vs the exhaustive proxy, bound
/// 2 * (c + d)).
ConditionTotals verify_instance(const Instance& instance,
                                const VerifyOptions& options);

struct VerifySummary {
    ConditionTotals totals;
    long instances = 0;
    bool pass = false;
};

/// Generates `options.instances` random instances (m <= max_machines,
/// jobs in [min_jobs, max_jobs]) and verifies each; instances are processed
/// in parallel under options.exec, with per-instance results merged in a
/// fixed order so the summary is deterministic.
VerifySummary verify_random_suite(const VerifyOptions& options);

struct SampleStats {
    long samples = 0;
    long violations = 0;
    double worst = 0.0;  // most negative slack observed
};

/// Pointwise properties of g(x) = x/Q(x): non-decreasing and subadditive,
/// sampled over pairs in [0, 100]^2 (tolerance 1e-9).
SampleStats check_g_properties(const PowerFunction& pf, std::uint64_t seed,
                               long samples, Exec exec);

/// Random (w_a, w_o, w_j) triples in [0, 10]^3 through check_subadditive_inequality.
SampleStats subadditive_inequality_fuzz(const PowerFunction& pf, std::uint64_t seed,
                        long samples, Exec exec);

struct IdentityStats {
    long checked = 0;
    long failures = 0;
    double worst_rel_err = 0.0;
};

/// Harvests reachable machine states from random simulations and checks
/// that draining each state with no further arrivals at speedup 1 costs
/// exactly future_cost (2x the shadow potential), within rel_tol.
IdentityStats future_cost_identity(Mode mode, std::uint64_t seed,
                                   long target_states, double rel_tol,
                                   Exec exec);

}  // namespace hetsched
