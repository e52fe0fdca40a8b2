// Benchmark of the trial batch kernel: runs the same set of mismatch trials
// through the serial reference path (threads = 1) and the OpenMP path, checks
// that both produce identical results, and prints the timing table.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "donn/experiment.hpp"
#include "donn/io.hpp"
#include "donn/parallel.hpp"

using namespace donn;

namespace {

double run_batch(const std::vector<TrialSpec>& specs, int threads, std::vector<TrialResult>& out) {
    out.assign(specs.size(), TrialResult{});
    const auto t0 = std::chrono::steady_clock::now();
    parallel_for_index(specs.size(), threads, [&](std::size_t i) { out[i] = run_trial(specs[i]); });
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

bool identical(const std::vector<TrialResult>& a, const std::vector<TrialResult>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].syn != b[i].syn || a[i].stb != b[i].stb || a[i].acc != b[i].acc ||
            a[i].freq_rsd != b[i].freq_rsd || a[i].failed != b[i].failed) {
            return false;
        }
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs OpenMP trial-batch benchmark"};
    int n = 8;
    int p = 2;
    int trials = 16;
    int cycles = 30;
    std::uint64_t seed = 7;
    std::vector<int> thread_counts = {1, 2, 4};
    app.add_option("--n", n, "network size");
    app.add_option("--p", p, "stored patterns");
    app.add_option("--trials", trials, "trials in the batch");
    app.add_option("--cycles", cycles, "simulated cycles per run");
    app.add_option("--seed", seed, "master seed");
    app.add_option("--threads", thread_counts, "thread counts to time");
    CLI11_PARSE(app, argc, argv);

    NeuronParams neuron;
    const G0Interval g0 = g0_feasible_interval(n, neuron);
    if (!g0.feasible) {
        std::cerr << "infeasible g0 interval for N=" << n << "\n";
        return 1;
    }

    const PatternSet patterns = make_pattern_set(seed, n, p, static_cast<int>(std::lround(1.5 * n)));
    std::vector<TrialSpec> specs;
    for (int t = 0; t < trials; ++t) {
        TrialSpec spec;
        spec.key = {"donn", "memristance", n, p, 0.0, 0.0, 0.1, t};
        spec.neuron = neuron;
        spec.mapping = {1.8, 0.2, g0.chosen};
        spec.topology = Topology::Differential;
        spec.sim.cycles = cycles;
        spec.patterns = &patterns;
        spec.mismatch_target = ParamClass::Memristance;
        spec.master_seed = seed;
        specs.push_back(std::move(spec));
    }

    std::vector<TrialResult> reference;
    const double t_serial = run_batch(specs, 1, reference);
    std::cout << "batch: " << trials << " trials, N=" << n << ", " << patterns.tests.size()
              << " test patterns each, " << cycles << " cycles\n";
    std::cout << "threads  wall_s   speedup  identical\n";
    std::cout << "      1  " << fmt_shortest(t_serial) << "  1.0  (reference)\n";

    for (int threads : thread_counts) {
        if (threads <= 1) continue;
        std::vector<TrialResult> got;
        const double t = run_batch(specs, threads, got);
        std::cout << "      " << threads << "  " << fmt_shortest(t) << "  "
                  << fmt_shortest(t_serial / t) << "  " << (identical(reference, got) ? "yes" : "NO")
                  << "\n";
        if (!identical(reference, got)) return 1;
    }
    return 0;
}
