#pragma once

#include <hetsched/model.hpp>

#include <cstdint>
#include <string>

namespace hetsched {

enum class PowerFamily {
    Poly2,          // P = s^2 on every machine
    Poly3,          // P = s^3
    PolyMix,        // alpha uniform in [1.3, 3]
    Table,          // random convex piecewise-linear tables
    Affine,         // random convex polynomials
    PolyTableMix,   // polynomial or table per machine
    Mixed,          // any kind per machine
};

PowerFamily power_family_from_string(const std::string& name);
std::string to_string(PowerFamily family);

struct GenOptions {
    std::uint64_t seed = 1;
    int machines = 2;
    int jobs = 4;
    Mode mode = Mode::Weighted;
    PowerFamily family = PowerFamily::PolyTableMix;
    double size_min = 0.1;
    double size_max = 10.0;
    double weight_min = 0.1;
    double weight_max = 10.0;
    /// Releases are uniform in [0, release_max]; negative means the default
    /// jobs / 2.
    double release_max = -1.0;

    void validate() const;
};

/// Deterministic in every field of the options. Sizes and weights are
/// log-uniform, releases uniform; unweighted instances get unit weights.
Instance generate_instance(const GenOptions& options);

}  // namespace hetsched
