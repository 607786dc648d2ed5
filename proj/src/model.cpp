#include <hetsched/model.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace hetsched {

void Job::validate() const {
    if (!(size > 0.0) || !std::isfinite(size)) {
        throw std::invalid_argument("job size must be positive");
    }
    if (!(weight > 0.0) || !std::isfinite(weight)) {
        throw std::invalid_argument("job weight must be positive");
    }
    if (!(release >= 0.0) || !std::isfinite(release)) {
        throw std::invalid_argument("job release must be nonnegative");
    }
}

void Instance::normalize() {
    std::sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) {
        if (a.release != b.release) {
            return a.release < b.release;
        }
        return a.id < b.id;
    });
}

void Instance::validate() const {
    if (machines.empty()) {
        throw std::invalid_argument("instance needs at least one machine");
    }
    std::set<int> ids;
    for (const Job& job : jobs) {
        job.validate();
        if (!ids.insert(job.id).second) {
            throw std::invalid_argument("duplicate job id");
        }
        if (mode == Mode::Unweighted && job.weight != 1.0) {
            throw std::invalid_argument(
                "unweighted instances require unit job weights");
        }
    }
    for (std::size_t i = 1; i < jobs.size(); ++i) {
        if (jobs[i].release < jobs[i - 1].release) {
            throw std::invalid_argument("jobs must be sorted by release time");
        }
    }
}

double MachineState::total_fractional_weight() const {
    double total = 0.0;
    for (const QueuedJob& qj : queue) {
        total += qj.fractional_weight();
    }
    return total;
}

double MachineState::total_weight() const {
    double total = 0.0;
    for (const QueuedJob& qj : queue) {
        total += qj.job.weight;
    }
    return total;
}

std::vector<MachineState> initial_states(const Instance& instance) {
    std::vector<MachineState> states(instance.machines.size());
    for (std::size_t i = 0; i < instance.machines.size(); ++i) {
        states[i].power = &instance.machines[i];
    }
    return states;
}

ResidualProfile ResidualProfile::weighted(const MachineState& state) {
    ResidualProfile profile;
    profile.entries_.reserve(state.queue.size());
    for (const QueuedJob& qj : state.queue) {
        profile.entries_.emplace_back(qj.job.inverse_density(),
                                      qj.fractional_weight());
    }
    profile.finalize();
    return profile;
}

ResidualProfile ResidualProfile::unweighted(const MachineState& state) {
    ResidualProfile profile;
    profile.entries_.reserve(state.queue.size());
    for (const QueuedJob& qj : state.queue) {
        profile.entries_.emplace_back(qj.remaining, 1.0);
    }
    profile.finalize();
    return profile;
}

void ResidualProfile::finalize() {
    std::sort(entries_.begin(), entries_.end());
    suffix_.assign(entries_.size(), 0.0);
    double acc = 0.0;
    for (std::size_t i = entries_.size(); i-- > 0;) {
        acc += entries_[i].second;
        suffix_[i] = acc;
    }
}

double ResidualProfile::value_above(double q) const {
    auto it = std::lower_bound(
        entries_.begin(), entries_.end(), q,
        [](const std::pair<double, double>& e, double v) { return e.first < v; });
    if (it == entries_.end()) {
        return 0.0;
    }
    return suffix_[static_cast<std::size_t>(it - entries_.begin())];
}

std::vector<double> ResidualProfile::distinct_keys() const {
    std::vector<double> keys;
    keys.reserve(entries_.size());
    for (const auto& [key, mass] : entries_) {
        if (keys.empty() || keys.back() != key) {
            keys.push_back(key);
        }
    }
    return keys;
}

std::vector<double> merge_breakpoints(const ResidualProfile& a,
                                      const ResidualProfile& b) {
    std::vector<double> keys{0.0};
    const auto ka = a.distinct_keys();
    const auto kb = b.distinct_keys();
    keys.insert(keys.end(), ka.begin(), ka.end());
    keys.insert(keys.end(), kb.begin(), kb.end());
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return keys;
}

double Metrics::objective(Mode mode) const {
    return (mode == Mode::Weighted ? fractional_weighted_flow
                                   : integer_weighted_flow) +
           energy;
}

void Metrics::accrue(double dt, double fractional_weight,
                     double unfinished_weight, double power) {
    if (dt < 0.0) {
        throw std::domain_error("metrics accrual requires dt >= 0");
    }
    fractional_weighted_flow += fractional_weight * dt;
    integer_weighted_flow += unfinished_weight * dt;
    energy += power * dt;
}

Metrics& Metrics::operator+=(const Metrics& other) {
    fractional_weighted_flow += other.fractional_weighted_flow;
    integer_weighted_flow += other.integer_weighted_flow;
    energy += other.energy;
    return *this;
}

}  // namespace hetsched
