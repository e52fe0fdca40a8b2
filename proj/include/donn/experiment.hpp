#pragma once

// End-to-end experiment drivers: train a network from random patterns, apply
// mismatch, run all test patterns, score, and persist results. Every trial is
// keyed by a canonical string; the key both derives the trial's random
// substream and identifies the row for resume, so a (config, master seed)
// pair maps to byte-identical result CSVs regardless of thread count.
// Wall-clock timings go to a timing.csv sidecar, which is the one
// non-deterministic output.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "donn/analysis.hpp"
#include "donn/metrics.hpp"
#include "donn/netlist.hpp"
#include "donn/storage.hpp"
#include "donn/transient.hpp"
#include "donn/variability.hpp"

namespace donn {

struct SimSettings {
    double dt = 2e-9;
    int cycles = 50;  // run duration in nominal periods
    int record_stride = 2;
    DeviceMode device_mode = DeviceMode::Smooth;
};

struct NetworkPreset {
    int n = 8;
    int p = 2;
};

struct DseSettings {
    int stage = 1;
    std::vector<double> x_grid;    // V_H (stage 1) or R_H (stage 2)
    std::vector<double> y_grid;    // V_L (stage 1) or R_L (stage 2)
    std::vector<double> rsd_grid;  // V_H mismatch levels
    double min_gap = 0.4;          // stage-1 constraint V_H >= V_L + min_gap
    double threshold = 0.8;
    double fixed_v_high = 1.4;     // stage-2 thresholds (stage-1 optimum)
    double fixed_v_low = 0.6;
};

struct DemoSettings {
    std::string input;           // pattern text; empty derives from stored[0]
    int flip_bits = 0;           // random flips applied to the derived input
    std::string mismatch_class;  // empty = no mismatch
    double mismatch_rsd = 0.0;
    bool dump_trace = true;
};

struct SurfaceGrids {
    std::vector<double> rh_grid;
    std::vector<double> rl_grid;
    std::vector<double> vh_grid;
    std::vector<double> vl_grid;
};

struct SingleEndedSettings {
    double r_positive = 8e3;   // memristance for positive weights [ohm]
    double r_negative = 180e3; // memristance for negative weights [ohm]
    double cap_ratio = 0.01;   // synapse capacitance as a fraction of C
};

struct ExperimentConfig {
    int schema_version = 1;
    std::string experiment;  // train, demo, sweep-synapse, sweep-neuron,
                             // sensitivity, dse, compare-single-ended
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    int threads = 0;  // 0 = hardware concurrency
    std::vector<NetworkPreset> networks{{8, 2}};
    int trials = 10;
    int test_patterns = 0;  // 0 = round(1.5 N)
    SimSettings sim;
    NeuronParams neuron;
    double alpha = 1.8;
    double beta = 0.2;
    std::vector<double> rsd_grid;  // sweep-synapse / compare-single-ended
    std::vector<std::string> param_classes;  // sweep-neuron (default: all seven)
    std::map<std::string, std::pair<double, double>> class_rsd_ranges;  // overrides
    int rsd_points = 5;  // grid size per class (plus the rsd=0 baseline)
    DseSettings dse;
    DemoSettings demo;
    SurfaceGrids surfaces;
    SingleEndedSettings single_ended;
    std::string patterns_file;  // optional stored patterns (else random)
    double histogram_rsd = 0.0;  // train: memristance histogram when > 0

    void validate() const;
};

ExperimentConfig load_config(const std::string& path);

/// Fig. 9 sweep ranges per parameter class (rsd min/max).
std::pair<double, double> default_class_rsd_range(ParamClass c);

// --- trial primitives --------------------------------------------------------

struct TrialKey {
    std::string topology = "donn";  // "donn" | "se"
    std::string cls = "none";       // mismatched parameter class
    int n = 0;
    int p = 0;
    double x = 0.0;  // DSE cell coordinate (0 outside DSE)
    double y = 0.0;
    double rsd = 0.0;
    int trial = 0;
};

/// Canonical key, e.g. "topo=donn|cls=V_H|N=8|P=2|x=0|y=0|rsd=0.001|trial=3".
std::string key_string(const TrialKey& key);

struct TrialResult {
    double syn = 0.0;
    double stb = 0.0;
    double acc = 0.0;
    double freq_rsd = 0.0;
    bool failed = false;
};

struct PatternSet {
    std::vector<Pattern> stored;
    std::vector<Pattern> tests;
};

/// Stored + test patterns for a network size from the pattern substream;
/// stored patterns are redrawn until pairwise distinct up to complement.
PatternSet make_pattern_set(std::uint64_t master_seed, int n, int p, int n_tests);

struct TrialSpec {
    TrialKey key;
    NeuronParams neuron;
    MappingParams mapping;
    Topology topology = Topology::Differential;
    SimSettings sim;
    const PatternSet* patterns = nullptr;
    std::optional<ParamClass> mismatch_target;
    std::uint64_t master_seed = 0;
    SingleEndedSettings single_ended;
};

/// Oscillation period the device model actually produces for these neuron
/// parameters, measured on an isolated neuron. The finite transition time
/// stretches the cycle beyond the analytic value, and the write protocol and
/// run duration need the real period. Throws when the neuron does not
/// oscillate.
double calibrated_period(const NeuronParams& neuron, const SimSettings& sim, Topology topology);

/// Train, sample, simulate every test pattern, score. Throws on simulation
/// failure (drivers record a failure row instead of aborting the sweep).
TrialResult run_trial(const TrialSpec& spec);

/// Per-pattern run used by demo-style reports.
RunMetrics run_single_pattern(const TrialSpec& spec, const Pattern& input, Trace* trace_out = nullptr);

int run_experiment(const ExperimentConfig& cfg);

}  // namespace donn
