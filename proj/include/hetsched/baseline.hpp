#pragma once

#include <hetsched/model.hpp>
#include <hetsched/parallel.hpp>
#include <hetsched/weighted.hpp>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace hetsched {

/// Non-migratory assignment: machine_for_job[k] is the machine of the k-th
/// job in the instance's release-ordered job list.
struct AssignmentMap {
    std::vector<int> machine_for_job;

    void validate(const Instance& instance) const;
};

class EnumerationCapExceeded : public std::runtime_error {
public:
    explicit EnumerationCapExceeded(const std::string& what)
        : std::runtime_error(what) {}
};

/// Runs the per-machine policy (HDF + power = fractional weight, or SRPT +
/// power = count) at speedup 1 with arrivals routed by the map.
Metrics simulate_fixed_assignment(const Instance& instance,
                                  const AssignmentMap& map);

struct ProxyResult {
    AssignmentMap best;
    Metrics metrics;
};

constexpr std::int64_t kDefaultEnumerationCap = 6561;  // 3^8

/// Enumerates every machines^jobs assignment, simulates each with the fixed
/// per-machine policy at speedup 1, and returns the cheapest (ties broken by
/// the first map in base-machines counting order). A stand-in for the
/// offline optimum: the per-machine policy is within a constant factor of
/// machine-local optimal, so bounds asserted against this proxy carry an
/// extra factor-2 cushion.
ProxyResult exhaustive_offline_proxy(
    const Instance& instance, std::int64_t cap = kDefaultEnumerationCap,
    Exec exec = Exec::Parallel);

/// Number of assignment maps (machines^jobs), saturating at cap + 1.
std::int64_t assignment_count(const Instance& instance, std::int64_t cap);

/// Jobs in release order onto machines 0, 1, ..., m-1, 0, 1, ...
AssignmentMap round_robin_assignment(const Instance& instance);

/// Each job goes to the machine with the least total assigned weight so far
/// (ties to the lowest index).
AssignmentMap greedy_total_weight_assignment(const Instance& instance);

}  // namespace hetsched
