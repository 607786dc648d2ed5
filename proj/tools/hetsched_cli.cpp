#include <hetsched/analysis.hpp>
#include <hetsched/baseline.hpp>
#include <hetsched/generator.hpp>
#include <hetsched/io.hpp>
#include <hetsched/unweighted.hpp>
#include <hetsched/verify.hpp>
#include <hetsched/weighted.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace hetsched;

constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) {
        throw std::runtime_error("cannot write output file: " + out_path);
    }
    out << text;
}

Mode resolve_mode(const Instance& instance, const std::string& mode_flag) {
    if (mode_flag.empty()) {
        return instance.mode;
    }
    return mode_from_string(mode_flag);
}

struct GenArgs {
    std::uint64_t seed = 1;
    int machines = 2;
    int jobs = 4;
    std::string mode = "weighted";
    std::string family = "poly-table";
    double size_min = 0.1, size_max = 10.0;
    double weight_min = 0.1, weight_max = 10.0;
    double release_max = -1.0;
    std::string out;
};

int run_gen(const GenArgs& args) {
    GenOptions options;
    options.seed = args.seed;
    options.machines = args.machines;
    options.jobs = args.jobs;
    options.mode = mode_from_string(args.mode);
    options.family = power_family_from_string(args.family);
    options.size_min = args.size_min;
    options.size_max = args.size_max;
    options.weight_min = args.weight_min;
    options.weight_max = args.weight_max;
    options.release_max = args.release_max;
    const Instance instance = generate_instance(options);
    write_output(instance_to_json(instance), args.out);
    return 0;
}

struct RunArgs {
    std::string instance_path;
    std::string mode;
    double speedup = 1.0;
    std::vector<std::string> policies;
    std::string out;
    std::string format = "json";
    int samples = 200;
    bool timing = false;
    bool serial = false;
};

int run_run(const RunArgs& args) {
    const auto start = std::chrono::steady_clock::now();
    Instance instance = load_instance(args.instance_path);
    const Mode mode = resolve_mode(instance, args.mode);
    if (mode != instance.mode) {
        instance.mode = mode;
        instance.validate();  // rejects non-unit weights in unweighted mode
    }
    if (args.speedup < 1.0) {
        throw std::invalid_argument("--speedup must be >= 1");
    }

    std::vector<std::string> policies = args.policies;
    if (policies.empty()) {
        policies = {"online", "proxy", "round_robin", "greedy_weight"};
    }

    const Exec exec = args.serial ? Exec::Serial : Exec::Parallel;
    RunReport report;
    report.instance_digest = instance_digest(instance);
    report.mode = instance.mode;
    report.speedup = args.speedup;

    SimulationResult online;
    bool have_online = false;
    std::optional<Metrics> proxy_metrics;
    for (const std::string& policy : policies) {
        if (policy == "online") {
            if (instance.mode == Mode::Weighted) {
                WeightedConfig cfg;
                cfg.speedup = args.speedup;
                online = simulate_weighted(instance, cfg);
            } else {
                UnweightedConfig cfg;
                cfg.speedup = args.speedup;
                online = simulate_unweighted(instance, cfg);
            }
            have_online = true;
            report.policies.push_back(PolicyResult{"online", online.metrics});
        } else if (policy == "proxy") {
            try {
                const ProxyResult proxy = exhaustive_offline_proxy(
                    instance, kDefaultEnumerationCap, exec);
                proxy_metrics = proxy.metrics;
                report.policies.push_back(PolicyResult{"proxy", proxy.metrics});
            } catch (const EnumerationCapExceeded& e) {
                std::cerr << "proxy skipped: " << e.what() << "\n";
            }
        } else if (policy == "round_robin") {
            report.policies.push_back(PolicyResult{
                "round_robin",
                simulate_fixed_assignment(instance,
                                          round_robin_assignment(instance))});
        } else if (policy == "greedy_weight") {
            report.policies.push_back(PolicyResult{
                "greedy_weight",
                simulate_fixed_assignment(
                    instance, greedy_total_weight_assignment(instance))});
        } else {
            throw std::invalid_argument("unknown policy: " + policy);
        }
    }

    if (have_online && proxy_metrics) {
        const double proxy_objective = proxy_metrics->objective(instance.mode);
        if (proxy_objective > 0.0) {
            report.ratio_computed = true;
            report.ratio_online_vs_proxy =
                online.metrics.objective(instance.mode) / proxy_objective;
            if (args.speedup > 1.0) {
                const CompetitiveParams params(args.speedup - 1.0);
                const double c = instance.mode == Mode::Weighted
                                     ? params.c_weighted
                                     : params.c_unweighted;
                const double d = instance.mode == Mode::Weighted
                                     ? params.d_weighted
                                     : params.d_unweighted;
                report.ratio_bound = 2.0 * (c + d);
            }
        }
    }

    if (args.timing) {
        report.wall_clock_sec = seconds_since(start);
    }

    if (args.format == "csv") {
        if (!have_online) {
            throw std::invalid_argument(
                "csv output needs the online policy trajectory");
        }
        write_output(trajectory_csv(instance, online.trace, args.samples),
                     args.out);
    } else {
        write_output(report_to_json(report), args.out);
    }
    return 0;
}

struct VerifyArgs {
    std::string instance_path;
    std::vector<std::uint64_t> random;  // seed count
    std::string mode = "weighted";
    double epsilon = 0.5;
    int adversaries = 20;
    int running_samples = 100;
    bool no_proxy = false;
    bool serial = false;
    bool timing = false;
    std::string out;
};

void print_summary(const ConditionTotals& totals) {
    for (const CheckSummary& cs : totals.check_summaries()) {
        std::printf("%-10s %6ld/%-6ld passed", cs.name.c_str(), cs.passed,
                    cs.total);
        if (cs.skipped > 0) {
            std::printf("  (%ld samples skipped near events)", cs.skipped);
        }
        std::printf("  worst margin % .3e\n", cs.worst_margin);
    }
    if (totals.ratio_checks > 0) {
        std::printf("max observed online/proxy ratio %.4f (bound %.4f)\n",
                    totals.max_ratio, totals.ratio_bound);
    }
}

int run_verify(const VerifyArgs& args) {
    const auto start = std::chrono::steady_clock::now();
    if (!(args.epsilon > 0.0)) {
        throw std::invalid_argument("--epsilon must be positive");
    }
    VerifyOptions options;
    options.mode = mode_from_string(args.mode);
    options.epsilon = args.epsilon;
    options.random_adversaries = args.adversaries;
    options.running_samples = args.running_samples;
    options.with_proxy = !args.no_proxy;
    options.exec = args.serial ? Exec::Serial : Exec::Parallel;

    ConditionTotals totals;
    std::string digest;
    long instances = 0;
    if (!args.instance_path.empty()) {
        const Instance instance = load_instance(args.instance_path);
        if (instance.mode != options.mode) {
            throw std::invalid_argument(
                "instance mode does not match --mode; re-generate or adjust "
                "the flag");
        }
        digest = instance_digest(instance);
        instances = 1;

        // For small instances, show the per-arrival numbers against the
        // first adversary before the aggregate summary.
        if (instance.jobs.size() <= 20 && !instance.jobs.empty()) {
            std::vector<int> map;
            if (options.with_proxy &&
                assignment_count(instance, kDefaultEnumerationCap) <=
                    kDefaultEnumerationCap) {
                map = exhaustive_offline_proxy(instance,
                                               kDefaultEnumerationCap,
                                               options.exec)
                          .best.machine_for_job;
            } else {
                map = round_robin_assignment(instance).machine_for_job;
            }
            const CoupledTrace coupled = make_coupled_trace(
                instance, options.epsilon, map,
                options.completion_threshold * std::min(1.0, options.epsilon));
            const CompetitiveParams params(options.epsilon);
            const ArrivalReport arrivals =
                check_arrival_condition(coupled, params);
            for (const ArrivalCheck& row : arrivals.rows) {
                std::printf(
                    "arrival t=%-10.6g job=%-4d dPhi=%-12.6g bound=%-12.6g "
                    "%s\n",
                    row.time, row.job_id, row.delta_phi, row.bound,
                    row.pass ? "ok" : "FAIL");
            }
        }
        totals = verify_instance(instance, options);
    } else if (args.random.size() == 2) {
        options.seed = args.random[0];
        options.instances = static_cast<int>(args.random[1]);
        const VerifySummary summary = verify_random_suite(options);
        totals = summary.totals;
        instances = summary.instances;
    } else {
        throw std::invalid_argument(
            "verify needs an instance file or --random SEED COUNT");
    }

    std::printf("verified %ld instance(s), %ld coupling(s)\n", instances,
                totals.couplings);
    print_summary(totals);
    const bool pass = totals.all_pass();
    std::printf("%s\n", pass ? "all checks passed" : "CHECK FAILURES");

    if (!args.out.empty()) {
        RunReport report;
        report.instance_digest = digest;
        report.mode = options.mode;
        report.speedup = 1.0 + options.epsilon;
        report.checks = totals.check_summaries();
        report.checks_pass = pass;
        if (totals.ratio_checks > 0) {
            report.ratio_computed = true;
            report.ratio_online_vs_proxy = totals.max_ratio;
            report.ratio_bound = totals.ratio_bound;
        }
        if (args.timing) {
            report.wall_clock_sec = seconds_since(start);
        }
        save_report(report, args.out);
    }
    return pass ? 0 : kExitCheckFailure;
}

struct CompareArgs {
    std::string instance_path;
    std::vector<std::uint64_t> random;
    std::string mode = "weighted";
    double speedup = 1.0;
    bool serial = false;
};

int run_compare(const CompareArgs& args) {
    std::vector<Instance> instances;
    if (!args.instance_path.empty()) {
        instances.push_back(load_instance(args.instance_path));
    } else if (args.random.size() == 2) {
        for (std::uint64_t i = 0; i < args.random[1]; ++i) {
            GenOptions gen;
            gen.seed = args.random[0] + i;
            gen.mode = mode_from_string(args.mode);
            gen.machines = 2 + static_cast<int>(i % 2);
            gen.jobs = 4 + static_cast<int>(i % 4);
            instances.push_back(generate_instance(gen));
        }
    } else {
        throw std::invalid_argument(
            "compare needs an instance file or --random SEED COUNT");
    }

    const Exec exec = args.serial ? Exec::Serial : Exec::Parallel;
    std::printf("%-18s %-10s %-10s %-10s %-10s %-8s\n", "instance", "online",
                "proxy", "rrobin", "greedyw", "ratio");
    for (const Instance& instance : instances) {
        Metrics online;
        if (instance.mode == Mode::Weighted) {
            WeightedConfig cfg;
            cfg.speedup = args.speedup;
            online = simulate_weighted(instance, cfg).metrics;
        } else {
            UnweightedConfig cfg;
            cfg.speedup = args.speedup;
            online = simulate_unweighted(instance, cfg).metrics;
        }
        const Metrics rr = simulate_fixed_assignment(
            instance, round_robin_assignment(instance));
        const Metrics gw = simulate_fixed_assignment(
            instance, greedy_total_weight_assignment(instance));
        double proxy_objective = -1.0;
        try {
            proxy_objective =
                exhaustive_offline_proxy(instance, kDefaultEnumerationCap, exec)
                    .metrics.objective(instance.mode);
        } catch (const EnumerationCapExceeded&) {
        }
        const double online_objective = online.objective(instance.mode);
        std::printf("%-18s %-10.4g ", instance_digest(instance).c_str(),
                    online_objective);
        if (proxy_objective >= 0.0) {
            std::printf("%-10.4g ", proxy_objective);
        } else {
            std::printf("%-10s ", "n/a");
        }
        std::printf("%-10.4g %-10.4g ", rr.objective(instance.mode),
                    gw.objective(instance.mode));
        if (proxy_objective > 0.0) {
            std::printf("%-8.4f\n", online_objective / proxy_objective);
        } else {
            std::printf("%-8s\n", "n/a");
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Continuous-time simulator for flow-plus-energy scheduling "
                 "on power-heterogeneous multiprocessors"};
    app.require_subcommand(1);

    GenArgs gen_args;
    CLI::App* gen = app.add_subcommand(
        "gen", "Generate a random instance file");
    gen->add_option("--seed", gen_args.seed, "RNG seed");
    gen->add_option("--machines", gen_args.machines, "number of machines");
    gen->add_option("--jobs", gen_args.jobs, "number of jobs");
    gen->add_option("--mode", gen_args.mode, "weighted|unweighted");
    gen->add_option("--power-family", gen_args.family,
                    "poly2|poly3|poly-mix|table|affine|poly-table|mixed");
    gen->add_option("--size-min", gen_args.size_min, "min job size");
    gen->add_option("--size-max", gen_args.size_max, "max job size");
    gen->add_option("--weight-min", gen_args.weight_min, "min job weight");
    gen->add_option("--weight-max", gen_args.weight_max, "max job weight");
    gen->add_option("--release-max", gen_args.release_max,
                    "max release time (default jobs/2)");
    gen->add_option("--out", gen_args.out, "output path (default stdout)");

    RunArgs run_args;
    CLI::App* run = app.add_subcommand(
        "run", "Simulate policies on an instance and emit a report");
    run->add_option("instance", run_args.instance_path, "instance JSON file")
        ->required();
    run->add_option("--mode", run_args.mode,
                    "override the instance mode (weighted|unweighted)");
    run->add_option("--speedup", run_args.speedup,
                    "online speed augmentation (>= 1)");
    run->add_option("--policies", run_args.policies,
                    "subset of online proxy round_robin greedy_weight");
    run->add_option("--out", run_args.out, "output path (default stdout)");
    run->add_option("--format", run_args.format, "json|csv");
    run->add_option("--samples", run_args.samples, "csv sample rows");
    run->add_flag("--timing", run_args.timing,
                  "include wall-clock in the report (breaks byte-for-byte "
                  "reproducibility)");
    run->add_flag("--serial", run_args.serial, "disable OpenMP");

    VerifyArgs verify_args;
    CLI::App* verify = app.add_subcommand(
        "verify",
        "Check the arrival/running/boundary conditions and ratio bounds");
    verify->add_option("instance", verify_args.instance_path,
                       "instance JSON file");
    verify->add_option("--random", verify_args.random,
                       "SEED COUNT: verify COUNT random instances")
        ->expected(2);
    verify->add_option("--mode", verify_args.mode, "weighted|unweighted");
    verify->add_option("--epsilon", verify_args.epsilon,
                       "augmentation epsilon (> 0)");
    verify->add_option("--adversaries", verify_args.adversaries,
                       "random adversary assignments per instance");
    verify->add_option("--running-samples", verify_args.running_samples,
                       "running-condition samples per coupling");
    verify->add_flag("--no-proxy", verify_args.no_proxy,
                     "skip the exhaustive proxy adversary");
    verify->add_flag("--serial", verify_args.serial, "disable OpenMP");
    verify->add_flag("--timing", verify_args.timing,
                     "include wall-clock in the report");
    verify->add_option("--out", verify_args.out, "write a JSON report");

    CompareArgs compare_args;
    CLI::App* compare = app.add_subcommand(
        "compare", "Objective table: online vs baselines");
    compare->add_option("instance", compare_args.instance_path,
                        "instance JSON file");
    compare->add_option("--random", compare_args.random, "SEED COUNT")
        ->expected(2);
    compare->add_option("--mode", compare_args.mode, "weighted|unweighted");
    compare->add_option("--speedup", compare_args.speedup,
                        "online speed augmentation");
    compare->add_flag("--serial", compare_args.serial, "disable OpenMP");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (gen->parsed()) {
            return run_gen(gen_args);
        }
        if (run->parsed()) {
            return run_run(run_args);
        }
        if (verify->parsed()) {
            return run_verify(verify_args);
        }
        if (compare->parsed()) {
            return run_compare(compare_args);
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailure;
    }
    return 0;
}
