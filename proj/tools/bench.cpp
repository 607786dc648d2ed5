// Times the embarrassingly parallel drivers with the serial reference path
// and with OpenMP, and prints the speedup.

#include <hetsched/baseline.hpp>
#include <hetsched/generator.hpp>
#include <hetsched/parallel.hpp>
#include <hetsched/verify.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

namespace {

using namespace hetsched;

double time_of(const std::function<void()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-28s serial %8.3fs   openmp %8.3fs   speedup %.2fx\n", name,
                serial, parallel, serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
    // scale 0 is a smoke run; scale >= 1 sizes the workloads up.
    int scale = 1;
    if (argc > 1) {
        scale = std::max(0, std::stoi(argv[1]));
    }
    std::printf("threads available: %d\n", hardware_threads());

    {
        GenOptions gen;
        gen.seed = 7;
        gen.machines = 3;
        gen.jobs = scale == 0 ? 4 : 6 + std::min(scale, 2);
        gen.mode = Mode::Weighted;
        gen.family = PowerFamily::PolyTableMix;
        const Instance instance = generate_instance(gen);
        double serial = 0.0;
        double parallel = 0.0;
        serial = time_of([&] {
            exhaustive_offline_proxy(instance, kDefaultEnumerationCap,
                                     Exec::Serial);
        });
        parallel = time_of([&] {
            exhaustive_offline_proxy(instance, kDefaultEnumerationCap,
                                     Exec::Parallel);
        });
        report("exhaustive proxy", serial, parallel);
    }

    {
        VerifyOptions options;
        options.mode = Mode::Weighted;
        options.epsilon = 0.5;
        options.seed = 11;
        options.instances = scale == 0 ? 2 : 10 * scale;
        options.random_adversaries = 5;
        options.running_samples = 50;
        double serial = 0.0;
        double parallel = 0.0;
        options.exec = Exec::Serial;
        serial = time_of([&] { verify_random_suite(options); });
        options.exec = Exec::Parallel;
        parallel = time_of([&] { verify_random_suite(options); });
        report("verification suite", serial, parallel);
    }

    {
        const PowerFunction pf = PowerFunction::polynomial(2.5);
        const long samples = scale == 0 ? 20000L : 2000000L * scale;
        double serial = 0.0;
        double parallel = 0.0;
        serial = time_of([&] { subadditive_inequality_fuzz(pf, 3, samples, Exec::Serial); });
        parallel =
            time_of([&] { subadditive_inequality_fuzz(pf, 3, samples, Exec::Parallel); });
        report("inequality fuzz", serial, parallel);
    }

    return 0;
}
