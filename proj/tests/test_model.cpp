#include <hetsched/model.hpp>

#include <doctest.h>

#include <cmath>

using namespace hetsched;

namespace {

Instance single_machine_instance() {
    Instance instance;
    instance.machines.push_back(PowerFunction::polynomial(2.0));
    instance.mode = Mode::Weighted;
    return instance;
}

}  // namespace

TEST_CASE("job and instance validation") {
    Job bad;
    bad.size = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad.size = 1.0;
    bad.weight = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    Instance empty;
    CHECK_THROWS_AS(empty.validate(), std::invalid_argument);

    Instance inst = single_machine_instance();
    inst.jobs = {Job{0, 0.0, 1.0, 2.0}, Job{1, 1.0, 1.0, 1.0}};
    CHECK_NOTHROW(inst.validate());

    inst.mode = Mode::Unweighted;
    CHECK_THROWS_AS(inst.validate(), std::invalid_argument);

    inst.mode = Mode::Weighted;
    inst.jobs.push_back(Job{0, 2.0, 1.0, 1.0});  // duplicate id
    CHECK_THROWS_AS(inst.validate(), std::invalid_argument);
}

TEST_CASE("normalize sorts by release then id") {
    Instance inst = single_machine_instance();
    inst.jobs = {Job{2, 1.0, 1.0, 1.0}, Job{1, 1.0, 1.0, 1.0},
                 Job{0, 0.5, 1.0, 1.0}};
    inst.normalize();
    CHECK(inst.jobs[0].id == 0);
    CHECK(inst.jobs[1].id == 1);
    CHECK(inst.jobs[2].id == 2);
}

TEST_CASE("profile value_above") {
    const Instance inst = single_machine_instance();
    MachineState state;
    state.power = &inst.machines[0];

    const ResidualProfile empty = ResidualProfile::weighted(state);
    CHECK(empty.value_above(0.0) == 0.0);

    // two unit-weight jobs with inverse densities 1 and 2
    state.queue.push_back(QueuedJob{Job{0, 0.0, 1.0, 1.0}, 1.0});
    state.queue.push_back(QueuedJob{Job{1, 0.0, 2.0, 1.0}, 2.0});
    const ResidualProfile profile = ResidualProfile::weighted(state);
    CHECK(profile.value_above(1.5) == doctest::Approx(1.0));
    CHECK(profile.value_above(0.0) == doctest::Approx(2.0));
    CHECK(profile.value_above(2.0) == doctest::Approx(1.0));
    CHECK(profile.value_above(2.5) == 0.0);
    CHECK(profile.total() == doctest::Approx(2.0));
}

TEST_CASE("profile reflects partial progress") {
    const Instance inst = single_machine_instance();
    MachineState state;
    state.power = &inst.machines[0];
    state.queue.push_back(QueuedJob{Job{0, 0.0, 4.0, 2.0}, 1.0});
    // fractional weight 2 * 1/4 = 0.5 at static inverse density 2
    const ResidualProfile weighted = ResidualProfile::weighted(state);
    CHECK(weighted.value_above(2.0) == doctest::Approx(0.5));
    // unweighted keys are the remaining size
    const ResidualProfile unweighted = ResidualProfile::unweighted(state);
    CHECK(unweighted.value_above(1.0) == doctest::Approx(1.0));
    CHECK(unweighted.value_above(1.5) == 0.0);
}

TEST_CASE("merge breakpoints") {
    const Instance inst = single_machine_instance();
    MachineState a;
    a.power = &inst.machines[0];
    MachineState b = a;

    CHECK(merge_breakpoints(ResidualProfile::weighted(a),
                            ResidualProfile::weighted(b)) ==
          std::vector<double>{0.0});

    a.queue.push_back(QueuedJob{Job{0, 0.0, 1.0, 1.0}, 1.0});
    b.queue.push_back(QueuedJob{Job{1, 0.0, 2.0, 1.0}, 2.0});
    CHECK(merge_breakpoints(ResidualProfile::weighted(a),
                            ResidualProfile::weighted(b)) ==
          std::vector<double>{0.0, 1.0, 2.0});

    b = a;
    CHECK(merge_breakpoints(ResidualProfile::weighted(a),
                            ResidualProfile::weighted(b)) ==
          std::vector<double>{0.0, 1.0});
}

TEST_CASE("metrics accrual") {
    Metrics m;
    m.accrue(1.0, 2.0, 3.0, 2.0);
    CHECK(m.fractional_weighted_flow == doctest::Approx(2.0));
    CHECK(m.integer_weighted_flow == doctest::Approx(3.0));
    CHECK(m.energy == doctest::Approx(2.0));

    Metrics before = m;
    m.accrue(0.0, 50.0, 50.0, 50.0);
    CHECK(m.fractional_weighted_flow == before.fractional_weighted_flow);
    CHECK(m.integer_weighted_flow == before.integer_weighted_flow);
    CHECK(m.energy == before.energy);

    Metrics half;
    half.accrue(0.5, 4.0, 4.0, 4.0);
    CHECK(half.fractional_weighted_flow == doctest::Approx(2.0));
    CHECK(half.integer_weighted_flow == doctest::Approx(2.0));
    CHECK(half.energy == doctest::Approx(2.0));

    CHECK_THROWS_AS(m.accrue(-1.0, 0.0, 0.0, 0.0), std::domain_error);

    CHECK(half.objective(Mode::Weighted) == doctest::Approx(4.0));
    CHECK(half.objective(Mode::Unweighted) == doctest::Approx(4.0));
}
