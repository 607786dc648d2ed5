#include <hetsched/weighted.hpp>

#include <hetsched/generator.hpp>

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace hetsched;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Instance make_instance(int machines, std::vector<Job> jobs,
                       double alpha = 2.0) {
    Instance instance;
    for (int i = 0; i < machines; ++i) {
        instance.machines.push_back(PowerFunction::polynomial(alpha));
    }
    instance.jobs = std::move(jobs);
    instance.normalize();
    instance.mode = Mode::Weighted;
    return instance;
}

MachineState state_with_jobs(const Instance& instance,
                             std::vector<QueuedJob> queue, int machine = 0) {
    MachineState state;
    state.power = &instance.machines[static_cast<std::size_t>(machine)];
    state.queue = std::move(queue);
    return state;
}

// closed-form ∫_a^b x^{1 - 1/alpha} dx
double poly_I(double alpha, double a, double b) {
    const double e = 2.0 - 1.0 / alpha;
    return (std::pow(b, e) - std::pow(a, e)) / e;
}

}  // namespace

TEST_CASE("shadow potential closed forms") {
    const Instance inst = make_instance(1, {});
    CHECK(shadow_potential_weighted(state_with_jobs(inst, {})) == 0.0);

    const MachineState one = state_with_jobs(
        inst, {QueuedJob{Job{0, 0.0, 1.0, 1.0}, 1.0}});
    CHECK(shadow_potential_weighted(one) == doctest::Approx(2.0 / 3.0));

    // w(q) = 2 on (0,1], 1 on (1,2]: I(0,2) + I(0,1)
    const MachineState two = state_with_jobs(
        inst, {QueuedJob{Job{0, 0.0, 1.0, 1.0}, 1.0},
               QueuedJob{Job{1, 0.0, 2.0, 1.0}, 2.0}});
    const double expected = poly_I(2.0, 0.0, 2.0) + poly_I(2.0, 0.0, 1.0);
    CHECK(expected == doctest::Approx(2.55229).epsilon(1e-5));
    CHECK(shadow_potential_weighted(two) == doctest::Approx(expected));
}

TEST_CASE("assignment delta") {
    const Instance inst = make_instance(1, {});
    const Job unit{7, 0.0, 1.0, 1.0};

    CHECK(assignment_delta_weighted(state_with_jobs(inst, {}), unit) ==
          doctest::Approx(2.0 / 3.0));

    // degenerate zero-weight limit: delta -> 0 as weight -> 0
    Job feather = unit;
    feather.weight = 1e-12;
    CHECK(assignment_delta_weighted(state_with_jobs(inst, {}), feather) <=
          1e-6);

    const MachineState busy = state_with_jobs(
        inst, {QueuedJob{Job{0, 0.0, 1.0, 1.0}, 1.0}});
    const double expected = poly_I(2.0, 1.0, 2.0);
    CHECK(expected == doctest::Approx(1.21895).epsilon(1e-5));
    CHECK(assignment_delta_weighted(busy, unit) == doctest::Approx(expected));
}

TEST_CASE("machine choice") {
    const Instance two_machines = make_instance(2, {});
    const Job unit{9, 0.0, 1.0, 1.0};

    // identical empty machines tie to index 0
    std::vector<MachineState> machines = initial_states(two_machines);
    CHECK(choose_machine_weighted(machines, unit) == 0);

    // a queued job pushes the delta above an empty machine's 2/3
    machines[0].queue.push_back(QueuedJob{Job{0, 0.0, 1.0, 1.0}, 1.0});
    CHECK(choose_machine_weighted(machines, unit) == 1);

    // s^2 empty (delta 2/3) vs s^3 empty (delta 3/5): the s^3 machine wins
    Instance hetero;
    hetero.machines.push_back(PowerFunction::polynomial(2.0));
    hetero.machines.push_back(PowerFunction::polynomial(3.0));
    hetero.mode = Mode::Weighted;
    std::vector<MachineState> hm = initial_states(hetero);
    CHECK(assignment_delta_weighted(hm[0], unit) == doctest::Approx(2.0 / 3.0));
    CHECK(assignment_delta_weighted(hm[1], unit) == doctest::Approx(3.0 / 5.0));
    CHECK(choose_machine_weighted(hm, unit) == 1);

    const int chosen = assign_weighted(hm, unit);
    CHECK(chosen == 1);
    CHECK(hm[1].queue.size() == 1);
}

TEST_CASE("advance single job closed form") {
    const Instance inst = make_instance(1, {});

    SUBCASE("speedup 1") {
        MachineState state = state_with_jobs(
            inst, {QueuedJob{Job{0, 0.0, 1.0, 1.0}, 1.0}});
        WeightedConfig cfg;
        const StepResult r = advance_weighted(state, cfg, kInf);
        CHECK(r.completed_job == 0);
        CHECK(r.elapsed == doctest::Approx(2.0).epsilon(1e-4));
        CHECK(r.accrued.fractional_weighted_flow ==
              doctest::Approx(2.0 / 3.0).epsilon(1e-6));
        CHECK(r.accrued.energy == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
        CHECK(state.idle());
    }

    SUBCASE("speedup scales everything by 1/speedup") {
        MachineState state = state_with_jobs(
            inst, {QueuedJob{Job{0, 0.0, 1.0, 1.0}, 1.0}});
        WeightedConfig cfg;
        cfg.speedup = 1.5;
        const StepResult r = advance_weighted(state, cfg, kInf);
        CHECK(r.elapsed == doctest::Approx(4.0 / 3.0).epsilon(1e-4));
        CHECK(r.accrued.fractional_weighted_flow ==
              doctest::Approx(4.0 / 9.0).epsilon(1e-6));
        CHECK(r.accrued.energy == doctest::Approx(4.0 / 9.0).epsilon(1e-6));
    }

    SUBCASE("empty machine") {
        MachineState state = state_with_jobs(inst, {});
        WeightedConfig cfg;
        const StepResult r = advance_weighted(state, cfg, 5.0);
        CHECK(r.elapsed == 5.0);
        CHECK(r.accrued.fractional_weighted_flow == 0.0);
        CHECK(!r.completed_job);
    }
}

TEST_CASE("advance respects horizon and resumes") {
    const Instance inst = make_instance(1, {});
    MachineState state = state_with_jobs(
        inst, {QueuedJob{Job{0, 0.0, 1.0, 1.0}, 1.0}});
    WeightedConfig cfg;
    const StepResult first = advance_weighted(state, cfg, 0.5);
    CHECK(first.elapsed == doctest::Approx(0.5));
    CHECK(!first.completed_job);
    const StepResult second = advance_weighted(state, cfg, kInf);
    CHECK(second.completed_job == 0);
    CHECK(first.elapsed + second.elapsed == doctest::Approx(2.0).epsilon(1e-4));
    const double total_flow = first.accrued.fractional_weighted_flow +
                              second.accrued.fractional_weighted_flow;
    CHECK(total_flow == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("simulate single job") {
    const Instance inst = make_instance(1, {Job{0, 0.0, 1.0, 1.0}});
    WeightedConfig cfg;
    const SimulationResult r = simulate_weighted(inst, cfg);
    CHECK(r.metrics.objective(Mode::Weighted) ==
          doctest::Approx(4.0 / 3.0).epsilon(1e-6));
    CHECK(r.trace.end_time == doctest::Approx(2.0).epsilon(1e-4));
    REQUIRE(r.trace.events.size() == 2);
    CHECK(r.trace.events[0].kind == EventKind::Arrival);
    CHECK(r.trace.events[1].kind == EventKind::Completion);
}

TEST_CASE("simulate empty instance") {
    const Instance inst = make_instance(2, {});
    WeightedConfig cfg;
    const SimulationResult r = simulate_weighted(inst, cfg);
    CHECK(r.metrics.fractional_weighted_flow == 0.0);
    CHECK(r.metrics.integer_weighted_flow == 0.0);
    CHECK(r.metrics.energy == 0.0);
    CHECK(r.trace.events.empty());
}

TEST_CASE("greedy separates identical jobs onto identical machines") {
    const Instance inst = make_instance(
        2, {Job{0, 0.0, 1.0, 1.0}, Job{1, 0.0, 1.0, 1.0}});
    WeightedConfig cfg;
    const SimulationResult r = simulate_weighted(inst, cfg);
    CHECK(r.trace.events[0].machine == 0);
    CHECK(r.trace.events[1].machine == 1);
    CHECK(r.metrics.objective(Mode::Weighted) ==
          doctest::Approx(8.0 / 3.0).epsilon(1e-6));
}

TEST_CASE("future cost matches draining simulation") {
    const Instance inst = make_instance(1, {});
    const MachineState two = state_with_jobs(
        inst, {QueuedJob{Job{0, 0.0, 1.0, 1.0}, 1.0},
               QueuedJob{Job{1, 0.0, 2.0, 1.0}, 2.0}});
    CHECK(future_cost_weighted(state_with_jobs(inst, {})) == 0.0);
    CHECK(future_cost_weighted(two) == doctest::Approx(5.10458).epsilon(1e-5));

    MachineState drain = two;
    WeightedConfig cfg;
    Metrics metrics;
    while (!drain.idle()) {
        metrics += advance_weighted(drain, cfg, kInf).accrued;
    }
    CHECK(metrics.objective(Mode::Weighted) ==
          doctest::Approx(future_cost_weighted(two)).epsilon(1e-4));
}

TEST_CASE("integer weighted flow dominates fractional") {
    GenOptions gen;
    gen.seed = 5;
    gen.machines = 2;
    gen.jobs = 6;
    const Instance inst = generate_instance(gen);
    WeightedConfig cfg;
    const SimulationResult r = simulate_weighted(inst, cfg);
    CHECK(r.metrics.integer_weighted_flow >=
          r.metrics.fractional_weighted_flow - 1e-9);
    // energy-flow identity: both accrue the integral of fractional weight
    CHECK(r.metrics.energy ==
          doctest::Approx(r.metrics.fractional_weighted_flow).epsilon(1e-8));
}

TEST_CASE("HDF runs the densest job") {
    const Instance inst = make_instance(1, {});
    MachineState state = state_with_jobs(
        inst, {QueuedJob{Job{0, 0.0, 4.0, 1.0}, 4.0},   // inv density 4
               QueuedJob{Job{1, 0.0, 1.0, 1.0}, 1.0},   // inv density 1
               QueuedJob{Job{2, 0.0, 2.0, 1.0}, 2.0}}); // inv density 2
    WeightedConfig cfg;
    const StepResult r = advance_weighted(state, cfg, kInf);
    CHECK(r.completed_job == 1);
    // the others are untouched
    CHECK(state.queue[0].remaining == 4.0);
    CHECK(state.queue[1].remaining == 2.0);
}

TEST_CASE("monotone speedup on random instances") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        GenOptions gen;
        gen.seed = seed;
        gen.machines = 2;
        gen.jobs = 5;
        const Instance inst = generate_instance(gen);
        double previous = kInf;
        for (double speedup : {1.0, 1.25, 1.5, 2.0}) {
            WeightedConfig cfg;
            cfg.speedup = speedup;
            const double objective = simulate_weighted(inst, cfg)
                                         .metrics.objective(Mode::Weighted);
            CHECK(objective <= previous * (1.0 + 1e-9));
            previous = objective;
        }
    }
}

TEST_CASE("config validation") {
    WeightedConfig cfg;
    cfg.speedup = 0.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.speedup = 1.0;
    cfg.completion_threshold = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.completion_threshold = 0.1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
