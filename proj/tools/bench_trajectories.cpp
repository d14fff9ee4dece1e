// Benchmark: serial reference loop vs the OpenMP batch over independent
// trajectories.  Verifies that both paths serialize to identical records
// before reporting timings, so a speedup never comes at the cost of
// reproducibility.
#include "sebd/sebd.hpp"
#include "sebd/sweep.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<std::string> serialize(const std::vector<sebd::TrajectoryRecord>& records) {
    std::vector<std::string> lines;
    lines.reserve(records.size());
    for (const auto& rec : records) lines.push_back(sebd::record_to_json_line(rec));
    return lines;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"benchmark trajectory batches: serial reference vs OpenMP"};
    uint32_t L = 40, W = 40, T = 8;
    double p = 0.04;
    uint64_t n = 16, seed = 1;
    app.add_option("--L", L, "strip length");
    app.add_option("--W", W, "lattice width (columns)");
    app.add_option("--T", T, "circuit depth per column");
    app.add_option("--p", p, "noise rate");
    app.add_option("--n", n, "trajectories per batch");
    app.add_option("--seed", seed, "master seed");
    CLI11_PARSE(app, argc, argv);

    const int threads = sebd::resolve_threads(0);
    std::cout << "L=" << L << " W=" << W << " T=" << T << " p=" << p << " n=" << n
              << " threads=" << threads << "\n";

    auto t0 = std::chrono::steady_clock::now();
    auto serial = sebd::run_batch(L, W, T, p, seed, n, {}, nullptr, 1);
    const double serial_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    auto parallel = sebd::run_batch(L, W, T, p, seed, n, {}, nullptr, threads);
    const double parallel_s = seconds_since(t0);

    if (serialize(serial.records) != serialize(parallel.records)) {
        std::cerr << "FAIL: parallel batch diverged from the serial reference\n";
        return 1;
    }

    std::cout << "serial:   " << serial_s << " s total, " << serial_s / double(n)
              << " s/trajectory\n";
    std::cout << "parallel: " << parallel_s << " s total, " << parallel_s / double(n)
              << " s/trajectory (" << threads << " threads)\n";
    std::cout << "speedup:  " << (parallel_s > 0 ? serial_s / parallel_s : 0.0) << "x\n";
    std::cout << "records identical across paths\n";
    return 0;
}
