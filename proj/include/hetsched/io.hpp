#pragma once

#include <hetsched/model.hpp>
#include <hetsched/weighted.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace hetsched {

class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Instance file round-trip. Numbers survive bit-exactly (shortest
/// round-trip serialization).
std::string instance_to_json(const Instance& instance);
Instance instance_from_json(const std::string& text);
Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& instance, const std::filesystem::path& path);

/// FNV-1a 64-bit hex digest of the canonical instance serialization.
std::string instance_digest(const Instance& instance);

struct PolicyResult {
    std::string policy;
    Metrics metrics;
};

struct CheckSummary {
    std::string name;
    long passed = 0;
    long total = 0;
    long skipped = 0;
    double worst_margin = 0.0;
};

struct RunReport {
    std::string instance_digest;
    Mode mode = Mode::Weighted;
    double speedup = 1.0;
    std::vector<PolicyResult> policies;
    bool ratio_computed = false;
    double ratio_online_vs_proxy = 0.0;
    double ratio_bound = 0.0;
    std::vector<CheckSummary> checks;
    bool checks_pass = true;
    /// Present only when timing was requested; deterministic runs leave it
    /// unset so reports with equal seeds are byte-identical.
    std::optional<double> wall_clock_sec;
};

std::string report_to_json(const RunReport& report);
RunReport report_from_json(const std::string& text);
void save_report(const RunReport& report, const std::filesystem::path& path);

/// Trajectory rows "time, per-machine fractional weight (or count), speed,
/// power, shadow potential" on a uniform sample grid, for plotting.
std::string trajectory_csv(const Instance& instance, const Trace& trace,
                           int samples);

std::string to_string(Mode mode);
Mode mode_from_string(const std::string& name);

}  // namespace hetsched
