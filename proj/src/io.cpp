#include <hetsched/io.hpp>

#include <hetsched/analysis.hpp>
#include <hetsched/unweighted.hpp>

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace hetsched {

namespace {

using nlohmann::json;

json power_to_json(const PowerFunction& pf) {
    json out;
    switch (pf.kind()) {
        case PowerKind::Polynomial:
            out["kind"] = "poly";
            out["alpha"] = pf.alpha();
            break;
        case PowerKind::AffineConvex:
            out["kind"] = "affine";
            out["coeffs"] = pf.coeffs();
            break;
        case PowerKind::MonotoneTable: {
            out["kind"] = "table";
            json points = json::array();
            for (const auto& p : pf.points()) {
                points.push_back({p[0], p[1]});
            }
            out["points"] = std::move(points);
            break;
        }
    }
    return out;
}

PowerFunction power_from_json(const json& in) {
    const std::string kind = in.at("kind").get<std::string>();
    if (kind == "poly") {
        return PowerFunction::polynomial(in.at("alpha").get<double>());
    }
    if (kind == "affine") {
        return PowerFunction::affine_convex(
            in.at("coeffs").get<std::vector<double>>());
    }
    if (kind == "table") {
        std::vector<std::array<double, 2>> points;
        for (const auto& p : in.at("points")) {
            points.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        }
        return PowerFunction::monotone_table(std::move(points));
    }
    throw ParseError("unknown power function kind: " + kind);
}

json metrics_to_json(const Metrics& m, Mode mode) {
    return json{{"fractional_weighted_flow", m.fractional_weighted_flow},
                {"integer_weighted_flow", m.integer_weighted_flow},
                {"energy", m.energy},
                {"objective", m.objective(mode)}};
}

Metrics metrics_from_json(const json& in) {
    Metrics m;
    m.fractional_weighted_flow = in.at("fractional_weighted_flow").get<double>();
    m.integer_weighted_flow = in.at("integer_weighted_flow").get<double>();
    m.energy = in.at("energy").get<double>();
    return m;
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t hash = 1469598103934665603ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    return hash;
}

}  // namespace

std::string to_string(Mode mode) {
    return mode == Mode::Weighted ? "weighted" : "unweighted";
}

Mode mode_from_string(const std::string& name) {
    if (name == "weighted") {
        return Mode::Weighted;
    }
    if (name == "unweighted") {
        return Mode::Unweighted;
    }
    throw ParseError("unknown mode: " + name);
}

std::string instance_to_json(const Instance& instance) {
    json out;
    out["mode"] = to_string(instance.mode);
    json machines = json::array();
    for (const PowerFunction& pf : instance.machines) {
        machines.push_back(power_to_json(pf));
    }
    out["machines"] = std::move(machines);
    json jobs = json::array();
    for (const Job& job : instance.jobs) {
        jobs.push_back(json{{"id", job.id},
                            {"release", job.release},
                            {"size", job.size},
                            {"weight", job.weight}});
    }
    out["jobs"] = std::move(jobs);
    return out.dump(2) + "\n";
}

Instance instance_from_json(const std::string& text) {
    json in;
    try {
        in = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("instance parse error: ") + e.what());
    }
    try {
        Instance instance;
        instance.mode = mode_from_string(in.at("mode").get<std::string>());
        for (const auto& m : in.at("machines")) {
            instance.machines.push_back(power_from_json(m));
        }
        for (const auto& j : in.at("jobs")) {
            Job job;
            job.id = j.at("id").get<int>();
            job.release = j.at("release").get<double>();
            job.size = j.at("size").get<double>();
            job.weight = j.at("weight").get<double>();
            instance.jobs.push_back(job);
        }
        instance.normalize();
        instance.validate();
        return instance;
    } catch (const json::exception& e) {
        throw ParseError(std::string("instance parse error: ") + e.what());
    }
}

Instance load_instance(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open instance file: " + path.string());
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return instance_from_json(buffer.str());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void save_instance(const Instance& instance,
                   const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write instance file: " +
                                 path.string());
    }
    out << instance_to_json(instance);
}

std::string instance_digest(const Instance& instance) {
    const std::uint64_t hash = fnv1a64(instance_to_json(instance));
    char buffer[17];
    std::snprintf(buffer, sizeof(buffer), "%016llx",
                  static_cast<unsigned long long>(hash));
    return std::string(buffer);
}

std::string report_to_json(const RunReport& report) {
    json out;
    out["instance_digest"] = report.instance_digest;
    out["mode"] = to_string(report.mode);
    out["speedup"] = report.speedup;
    json policies = json::object();
    for (const PolicyResult& pr : report.policies) {
        policies[pr.policy] = metrics_to_json(pr.metrics, report.mode);
    }
    out["policies"] = std::move(policies);
    if (report.ratio_computed) {
        out["ratio"] = json{{"online_vs_proxy", report.ratio_online_vs_proxy},
                            {"bound", report.ratio_bound}};
    } else {
        out["ratio"] = "not computed";
    }
    if (!report.checks.empty()) {
        json checks = json::object();
        for (const CheckSummary& cs : report.checks) {
            checks[cs.name] = json{{"passed", cs.passed},
                                   {"total", cs.total},
                                   {"skipped", cs.skipped},
                                   {"worst_margin", cs.worst_margin}};
        }
        out["checks"] = std::move(checks);
        out["checks_pass"] = report.checks_pass;
    }
    if (report.wall_clock_sec) {
        out["wall_clock_sec"] = *report.wall_clock_sec;
    }
    return out.dump(2) + "\n";
}

RunReport report_from_json(const std::string& text) {
    json in;
    try {
        in = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("report parse error: ") + e.what());
    }
    RunReport report;
    report.instance_digest = in.at("instance_digest").get<std::string>();
    report.mode = mode_from_string(in.at("mode").get<std::string>());
    report.speedup = in.at("speedup").get<double>();
    for (const auto& [name, value] : in.at("policies").items()) {
        report.policies.push_back(PolicyResult{name, metrics_from_json(value)});
    }
    if (in.at("ratio").is_object()) {
        report.ratio_computed = true;
        report.ratio_online_vs_proxy =
            in.at("ratio").at("online_vs_proxy").get<double>();
        report.ratio_bound = in.at("ratio").at("bound").get<double>();
    }
    if (in.contains("checks")) {
        for (const auto& [name, value] : in.at("checks").items()) {
            CheckSummary cs;
            cs.name = name;
            cs.passed = value.at("passed").get<long>();
            cs.total = value.at("total").get<long>();
            cs.skipped = value.at("skipped").get<long>();
            cs.worst_margin = value.at("worst_margin").get<double>();
            report.checks.push_back(cs);
        }
        report.checks_pass = in.at("checks_pass").get<bool>();
    }
    if (in.contains("wall_clock_sec")) {
        report.wall_clock_sec = in.at("wall_clock_sec").get<double>();
    }
    return report;
}

void save_report(const RunReport& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write report file: " + path.string());
    }
    out << report_to_json(report);
}

std::string trajectory_csv(const Instance& instance, const Trace& trace,
                           int samples) {
    std::ostringstream out;
    out.precision(17);
    const std::size_t m = instance.machines.size();
    out << "time";
    for (std::size_t i = 0; i < m; ++i) {
        out << (instance.mode == Mode::Weighted ? ",frac_weight_" : ",count_")
            << i;
    }
    for (std::size_t i = 0; i < m; ++i) {
        out << ",speed_" << i;
    }
    for (std::size_t i = 0; i < m; ++i) {
        out << ",power_" << i;
    }
    out << ",shadow_potential\n";

    const double span = trace.end_time;
    const int rows = std::max(samples, 2);
    for (int k = 0; k < rows; ++k) {
        const double t = span * k / (rows - 1);
        const std::vector<MachineState> states = states_at(trace, instance, t);
        out << t;
        double shadow = 0.0;
        std::vector<double> loads(m), speeds(m), powers(m);
        for (std::size_t i = 0; i < m; ++i) {
            const MachineState& s = states[i];
            if (instance.mode == Mode::Weighted) {
                const double w = s.total_fractional_weight();
                loads[i] = w;
                speeds[i] = s.idle() ? 0.0
                                     : trace.speedup * s.power->speed_for_power(w);
                powers[i] = s.idle() ? 0.0 : w;
                shadow += shadow_potential_weighted(s);
            } else {
                const double n = s.unfinished_count();
                loads[i] = n;
                speeds[i] = s.idle() ? 0.0
                                     : trace.speedup * s.power->speed_for_power(n);
                powers[i] = s.idle() ? 0.0 : n;
                shadow += shadow_potential_unweighted(s);
            }
        }
        for (double v : loads) {
            out << ',' << v;
        }
        for (double v : speeds) {
            out << ',' << v;
        }
        for (double v : powers) {
            out << ',' << v;
        }
        out << ',' << shadow << '\n';
    }
    return out.str();
}

}  // namespace hetsched
