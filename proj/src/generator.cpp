#include <hetsched/generator.hpp>

#include <cmath>
#include <random>
#include <stdexcept>

namespace hetsched {

namespace {

// Distribution helpers on top of mt19937_64 (whose output sequence is fixed
// by the standard), so generated instances are reproducible everywhere.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

PowerFunction random_table(std::mt19937_64& rng) {
    const int segments = 2 + static_cast<int>(rng() % 3);  // 2..4
    std::vector<std::array<double, 2>> points{{0.0, 0.0}};
    double slope = uniform(rng, 0.5, 2.0);
    for (int i = 0; i < segments; ++i) {
        const double ds = uniform(rng, 0.3, 2.0);
        points.push_back({points.back()[0] + ds, points.back()[1] + slope * ds});
        slope *= uniform(rng, 1.1, 2.5);
    }
    return PowerFunction::monotone_table(std::move(points));
}

PowerFunction random_affine(std::mt19937_64& rng) {
    std::vector<double> coeffs{0.0};
    coeffs.push_back(rng() % 2 == 0 ? 0.0 : uniform(rng, 0.1, 1.0));  // s
    coeffs.push_back(uniform(rng, 0.2, 2.0));                         // s^2
    if (rng() % 2 == 0) {
        coeffs.push_back(uniform(rng, 0.05, 0.5));  // s^3
    }
    return PowerFunction::affine_convex(std::move(coeffs));
}

PowerFunction random_machine(std::mt19937_64& rng, PowerFamily family) {
    switch (family) {
        case PowerFamily::Poly2:
            return PowerFunction::polynomial(2.0);
        case PowerFamily::Poly3:
            return PowerFunction::polynomial(3.0);
        case PowerFamily::PolyMix:
            return PowerFunction::polynomial(uniform(rng, 1.3, 3.0));
        case PowerFamily::Table:
            return random_table(rng);
        case PowerFamily::Affine:
            return random_affine(rng);
        case PowerFamily::PolyTableMix:
            return rng() % 2 == 0
                       ? PowerFunction::polynomial(uniform(rng, 1.3, 3.0))
                       : random_table(rng);
        case PowerFamily::Mixed:
            switch (rng() % 3) {
                case 0:
                    return PowerFunction::polynomial(uniform(rng, 1.3, 3.0));
                case 1:
                    return random_table(rng);
                default:
                    return random_affine(rng);
            }
    }
    throw std::logic_error("unknown power family");
}

}  // namespace

PowerFamily power_family_from_string(const std::string& name) {
    if (name == "poly2") return PowerFamily::Poly2;
    if (name == "poly3") return PowerFamily::Poly3;
    if (name == "poly-mix") return PowerFamily::PolyMix;
    if (name == "table") return PowerFamily::Table;
    if (name == "affine") return PowerFamily::Affine;
    if (name == "poly-table") return PowerFamily::PolyTableMix;
    if (name == "mixed") return PowerFamily::Mixed;
    throw std::invalid_argument("unknown power family: " + name);
}

std::string to_string(PowerFamily family) {
    switch (family) {
        case PowerFamily::Poly2: return "poly2";
        case PowerFamily::Poly3: return "poly3";
        case PowerFamily::PolyMix: return "poly-mix";
        case PowerFamily::Table: return "table";
        case PowerFamily::Affine: return "affine";
        case PowerFamily::PolyTableMix: return "poly-table";
        case PowerFamily::Mixed: return "mixed";
    }
    return "unknown";
}

void GenOptions::validate() const {
    if (machines < 1) {
        throw std::invalid_argument("need at least one machine");
    }
    if (jobs < 0) {
        throw std::invalid_argument("job count must be nonnegative");
    }
    if (!(size_min > 0.0) || !(size_max >= size_min)) {
        throw std::invalid_argument("invalid size distribution bounds");
    }
    if (!(weight_min > 0.0) || !(weight_max >= weight_min)) {
        throw std::invalid_argument("invalid weight distribution bounds");
    }
}

Instance generate_instance(const GenOptions& options) {
    options.validate();
    std::mt19937_64 rng(options.seed);
    Instance instance;
    instance.mode = options.mode;
    instance.machines.reserve(static_cast<std::size_t>(options.machines));
    for (int i = 0; i < options.machines; ++i) {
        instance.machines.push_back(random_machine(rng, options.family));
    }
    const double release_max = options.release_max >= 0.0
                                   ? options.release_max
                                   : options.jobs / 2.0;
    instance.jobs.reserve(static_cast<std::size_t>(options.jobs));
    for (int j = 0; j < options.jobs; ++j) {
        Job job;
        job.id = j;
        job.release = release_max > 0.0 ? uniform(rng, 0.0, release_max) : 0.0;
        job.size = log_uniform(rng, options.size_min, options.size_max);
        job.weight = options.mode == Mode::Unweighted
                         ? 1.0
                         : log_uniform(rng, options.weight_min,
                                       options.weight_max);
        instance.jobs.push_back(job);
    }
    instance.normalize();
    instance.validate();
    return instance;
}

}  // namespace hetsched
