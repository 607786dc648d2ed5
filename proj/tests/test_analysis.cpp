#include <hetsched/analysis.hpp>

#include <hetsched/baseline.hpp>
#include <hetsched/generator.hpp>

#include <doctest.h>

#include <cmath>
#include <random>

using namespace hetsched;

namespace {

Instance make_instance(int machines, std::vector<Job> jobs, Mode mode) {
    Instance instance;
    for (int i = 0; i < machines; ++i) {
        instance.machines.push_back(PowerFunction::polynomial(2.0));
    }
    instance.jobs = std::move(jobs);
    instance.normalize();
    instance.mode = mode;
    return instance;
}

double poly_I(double alpha, double a, double b) {
    const double e = 2.0 - 1.0 / alpha;
    return (std::pow(b, e) - std::pow(a, e)) / e;
}

}  // namespace

TEST_CASE("competitive params") {
    const CompetitiveParams params(0.5);
    CHECK(params.c_weighted == doctest::Approx(3.0));
    CHECK(params.d_weighted == doctest::Approx(8.0));
    CHECK(params.c_unweighted == doctest::Approx(4.0));
    CHECK(params.d_unweighted == doctest::Approx(8.0));
    CHECK_THROWS_AS(CompetitiveParams(0.0), std::invalid_argument);
}

TEST_CASE("weighted potential") {
    const Instance inst = make_instance(1, {}, Mode::Weighted);
    std::vector<MachineState> onl = initial_states(inst);
    std::vector<MachineState> adv = initial_states(inst);

    CHECK(potential_weighted(onl, adv, 0.5) == 0.0);

    onl[0].queue.push_back(QueuedJob{Job{0, 0.0, 1.0, 1.0}, 1.0});
    CHECK(potential_weighted(onl, adv, 0.5) ==
          doctest::Approx(8.0 / 3.0));  // (2/eps) * I(0,1)

    // identical states cancel exactly
    adv[0].queue.push_back(QueuedJob{Job{0, 0.0, 1.0, 1.0}, 1.0});
    CHECK(potential_weighted(onl, adv, 0.5) == 0.0);

    // clamped when the adversary holds more
    onl[0].queue.clear();
    CHECK(potential_weighted(onl, adv, 0.5) == 0.0);
}

TEST_CASE("unweighted potential") {
    const Instance inst = make_instance(1, {}, Mode::Unweighted);
    std::vector<MachineState> onl = initial_states(inst);
    std::vector<MachineState> adv = initial_states(inst);

    CHECK(potential_unweighted(onl, adv, 1.0) == 0.0);

    onl[0].queue.push_back(QueuedJob{Job{0, 0.0, 1.0, 1.0}, 1.0});
    CHECK(potential_unweighted(onl, adv, 1.0) == doctest::Approx(4.0));

    onl[0].queue.push_back(QueuedJob{Job{1, 0.0, 1.0, 1.0}, 1.0});
    adv[0].queue.push_back(QueuedJob{Job{0, 0.0, 1.0, 1.0}, 1.0});
    // difference profile is 1 on (0,1]: (4/eps) * 1/Q(1)
    CHECK(potential_unweighted(onl, adv, 1.0) == doctest::Approx(4.0));
}

TEST_CASE("potential rejects mismatched machines") {
    const Instance a = make_instance(2, {}, Mode::Weighted);
    const Instance b = make_instance(1, {}, Mode::Weighted);
    CHECK_THROWS_AS(potential_weighted(initial_states(a), initial_states(b), 1.0),
                    std::invalid_argument);
}

TEST_CASE("arrival condition closed form") {
    // one job; online picks machine 0 (greedy tie-break), adversary machine 1
    const Instance inst =
        make_instance(2, {Job{0, 0.0, 1.0, 1.0}}, Mode::Weighted);
    const CoupledTrace coupled = make_coupled_trace(inst, 0.5, {1});
    const CompetitiveParams params(0.5);
    const ArrivalReport report = check_arrival_condition(coupled, params);
    REQUIRE(report.rows.size() == 1);
    // dPhi = (2/eps) I(0,1) = 8/3, bound = (4/eps) I(0,1) = 16/3
    CHECK(report.rows[0].delta_phi == doctest::Approx(8.0 / 3.0));
    CHECK(report.rows[0].bound == doctest::Approx(16.0 / 3.0));
    CHECK(report.rows[0].pass);
    CHECK(report.all_pass);
}

TEST_CASE("arrival condition when both pick the same machine") {
    const Instance inst =
        make_instance(2, {Job{0, 0.0, 1.0, 1.0}}, Mode::Weighted);
    const CoupledTrace coupled = make_coupled_trace(inst, 0.5, {0});
    const CompetitiveParams params(0.5);
    const ArrivalReport report = check_arrival_condition(coupled, params);
    REQUIRE(report.rows.size() == 1);
    CHECK(report.rows[0].delta_phi == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(report.all_pass);
}

TEST_CASE("boundary and completion conditions") {
    SUBCASE("empty instance") {
        const Instance inst = make_instance(1, {}, Mode::Weighted);
        const CoupledTrace coupled = make_coupled_trace(inst, 0.5, {});
        const BoundaryReport report = check_boundary_completion(coupled);
        CHECK(report.phi_start == 0.0);
        CHECK(report.phi_end >= 0.0);
        CHECK(report.all_pass);
    }
    SUBCASE("single job") {
        const Instance inst =
            make_instance(1, {Job{0, 0.0, 1.0, 1.0}}, Mode::Weighted);
        const CoupledTrace coupled = make_coupled_trace(inst, 0.5, {0});
        const BoundaryReport report = check_boundary_completion(coupled);
        CHECK(report.phi_start == 0.0);
        CHECK(report.phi_end == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(report.completion_events == 2);
        CHECK(report.all_pass);
    }
}

TEST_CASE("running condition on a single-machine coupling") {
    const Instance inst =
        make_instance(1, {Job{0, 0.0, 1.0, 1.0}}, Mode::Weighted);
    const CoupledTrace coupled = make_coupled_trace(inst, 0.5, {0});
    const CompetitiveParams params(0.5);
    const RunningReport report = check_running_condition(coupled, params, 50);
    CHECK(report.rows.size() >= 40);
    CHECK(report.all_pass);
}

TEST_CASE("states_at reconstructs trajectories") {
    const Instance inst =
        make_instance(1, {Job{0, 0.0, 1.0, 1.0}}, Mode::Weighted);
    WeightedConfig cfg;
    const SimulationResult sim = simulate_weighted(inst, cfg);
    // at t=0 the job has just arrived with full weight
    const auto at0 = states_at(sim.trace, inst, 0.0);
    CHECK(at0[0].total_fractional_weight() == doctest::Approx(1.0));
    // fractional weight w(t) solves t = 2(1 - sqrt(w)): at t=1, w = 1/4
    const auto at1 = states_at(sim.trace, inst, 1.0);
    CHECK(at1[0].total_fractional_weight() ==
          doctest::Approx(0.25).epsilon(1e-6));
    // after the completion the machine is empty
    const auto at3 = states_at(sim.trace, inst, 3.0);
    CHECK(at3[0].idle());
}

TEST_CASE("subadditive integral inequality point checks") {
    const PowerFunction sq = PowerFunction::polynomial(2.0);

    SUBCASE("zero job weight is an equality at zero") {
        const InequalityCheck r = check_subadditive_inequality(sq, 3.0, 1.0, 0.0);
        CHECK(r.lhs == doctest::Approx(0.0));
        CHECK(r.rhs == doctest::Approx(0.0));
        CHECK(r.pass);
    }

    SUBCASE("hand-evaluated point") {
        const InequalityCheck r = check_subadditive_inequality(sq, 2.0, 1.0, 1.0);
        CHECK(r.lhs ==
              doctest::Approx(poly_I(2.0, 2.0, 3.0) - poly_I(2.0, 0.0, 1.0)));
        CHECK(r.rhs == doctest::Approx(2.0 * poly_I(2.0, 1.0, 2.0)));
        CHECK(r.pass);
    }

    SUBCASE("fuzz across kinds") {
        const std::vector<PowerFunction> pfs = {
            PowerFunction::polynomial(2.0),
            PowerFunction::polynomial(1.4),
            PowerFunction::affine_convex({0.0, 1.0, 0.7}),
            PowerFunction::monotone_table({{0.0, 0.0}, {1.0, 1.0}, {2.0, 4.0}}),
        };
        std::mt19937_64 rng(3);
        auto uniform = [&rng](double lo, double hi) {
            return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
        };
        for (const PowerFunction& pf : pfs) {
            for (int i = 0; i < 300; ++i) {
                const InequalityCheck r = check_subadditive_inequality(pf, uniform(0, 10),
                                                    uniform(0, 10),
                                                    uniform(0, 10));
                CHECK(r.pass);
            }
        }
    }
}

TEST_CASE("conditions hold on random weighted couplings") {
    const CompetitiveParams params(0.25);
    std::mt19937_64 rng(99);
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        GenOptions gen;
        gen.seed = seed;
        gen.machines = 2;
        gen.jobs = 5;
        gen.family = PowerFamily::PolyTableMix;
        const Instance inst = generate_instance(gen);
        std::vector<int> map(inst.jobs.size());
        for (int& m : map) {
            m = static_cast<int>(rng() % 2);
        }
        const CoupledTrace coupled = make_coupled_trace(inst, 0.25, map);
        CHECK(check_arrival_condition(coupled, params).all_pass);
        CHECK(check_running_condition(coupled, params, 40).all_pass);
        CHECK(check_boundary_completion(coupled).all_pass);
    }
}

TEST_CASE("greedy assignment is optimal at every arrival, post hoc") {
    GenOptions gen;
    gen.seed = 314;
    gen.machines = 3;
    gen.jobs = 7;
    gen.family = PowerFamily::PolyTableMix;
    const Instance inst = generate_instance(gen);
    WeightedConfig cfg;
    cfg.speedup = 1.25;
    const SimulationResult sim = simulate_weighted(inst, cfg);

    // replay the trace, checking the recorded machine against all deltas
    std::vector<MachineState> states = initial_states(inst);
    double now = 0.0;
    for (const TraceEvent& ev : sim.trace.events) {
        for (MachineState& state : states) {
            double rem = ev.time - now;
            while (rem > 0.0 && !state.idle()) {
                rem -= advance_weighted(state, cfg, rem).elapsed;
            }
        }
        now = ev.time;
        if (ev.kind == EventKind::Arrival) {
            Job job;
            for (const Job& j : inst.jobs) {
                if (j.id == ev.job_id) {
                    job = j;
                }
            }
            const double chosen = assignment_delta_weighted(
                states[static_cast<std::size_t>(ev.machine)], job);
            for (std::size_t m = 0; m < states.size(); ++m) {
                CHECK(chosen <= assignment_delta_weighted(states[m], job) *
                                    (1.0 + 1e-12));
                if (static_cast<int>(m) < ev.machine) {
                    // a strictly lower index can only lose the tie strictly
                    CHECK(assignment_delta_weighted(states[m], job) > chosen);
                }
            }
        }
        states = ev.snapshot;
    }
}

TEST_CASE("total fractional weight only decreases between arrivals") {
    GenOptions gen;
    gen.seed = 2718;
    gen.machines = 2;
    gen.jobs = 6;
    const Instance inst = generate_instance(gen);
    WeightedConfig cfg;
    const SimulationResult sim = simulate_weighted(inst, cfg);
    for (std::size_t e = 1; e < sim.trace.events.size(); ++e) {
        const double t0 = sim.trace.events[e - 1].time;
        const double t1 = sim.trace.events[e].time;
        if (sim.trace.events[e].kind == EventKind::Arrival || t1 <= t0) {
            continue;
        }
        double prev = std::numeric_limits<double>::infinity();
        for (int k = 0; k <= 4; ++k) {
            const double t = t0 + (t1 - t0) * k / 4.0;
            const auto states = states_at(sim.trace, inst, t);
            double total = 0.0;
            for (const MachineState& s : states) {
                total += s.total_fractional_weight();
            }
            CHECK(total <= prev * (1.0 + 1e-12) + 1e-12);
            prev = total;
        }
    }
}

TEST_CASE("conditions hold on a small affine coupling") {
    Instance inst;
    inst.machines.push_back(PowerFunction::affine_convex({0.0, 0.5, 1.0}));
    inst.machines.push_back(PowerFunction::affine_convex({0.0, 0.0, 0.8}));
    inst.jobs = {Job{0, 0.0, 1.0, 1.0}, Job{1, 0.4, 0.8, 2.0}};
    inst.mode = Mode::Weighted;
    inst.normalize();
    const CompetitiveParams params(0.5);
    const CoupledTrace coupled = make_coupled_trace(inst, 0.5, {1, 0});
    CHECK(check_arrival_condition(coupled, params).all_pass);
    CHECK(check_running_condition(coupled, params, 12).all_pass);
    CHECK(check_boundary_completion(coupled).all_pass);
}

TEST_CASE("conditions hold on random unweighted couplings") {
    const CompetitiveParams params(0.5);
    std::mt19937_64 rng(123);
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        GenOptions gen;
        gen.seed = seed;
        gen.machines = 3;
        gen.jobs = 6;
        gen.mode = Mode::Unweighted;
        gen.family = PowerFamily::PolyTableMix;
        const Instance inst = generate_instance(gen);
        std::vector<int> map(inst.jobs.size());
        for (int& m : map) {
            m = static_cast<int>(rng() % 3);
        }
        const CoupledTrace coupled = make_coupled_trace(inst, 0.5, map);
        CHECK(check_arrival_condition(coupled, params).all_pass);
        CHECK(check_running_condition(coupled, params, 40).all_pass);
        CHECK(check_boundary_completion(coupled).all_pass);
    }
}
