#pragma once

// Phase extraction and scoring. Peaks of the positive-branch voltages are
// detected as local maxima (minimum separation 0.6 T, quadratic sub-sample
// refinement) with the first kTransientCycles discarded. The synchronization
// level averages a triangular map of peak-time offsets against the reference
// neuron; the readout assigns +1 within a quarter period of in-phase and -1
// otherwise. A run is stable when the readout is identical over the last
// kConvergenceWindow cycles.

#include <optional>
#include <span>
#include <vector>

#include "donn/pattern.hpp"
#include "donn/transient.hpp"

namespace donn {

inline constexpr int kTransientCycles = 10;
inline constexpr int kConvergenceWindow = 5;

struct PeakDetection {
    std::vector<double> times;  // post-transient peak times, strictly increasing
    bool oscillating = false;
};

/// Peak times of one trace channel. `min_swing` is the smallest post-transient
/// peak-to-peak range that still counts as oscillation; latched channels with
/// only coupled ripple fall below it.
PeakDetection detect_peaks(const Trace& trace, int channel, double nominal_period,
                           double min_swing = 0.5);

/// Triangular offset map: period T/2, value 1 at multiples of T/2 (in-phase
/// and anti-phase both count as synchronized), 0 at odd multiples of T/4.
double map_timediff(double dt, double period);

struct PeakSeries {
    std::vector<std::vector<double>> peaks;  // per neuron (positive branches)
    std::vector<std::uint8_t> oscillating;   // per neuron
    int reference = 0;
};

/// Peak series of the per-neuron readout channels (v_i^p for Differential).
PeakSeries extract_peak_series(const Trace& trace, Topology topology, double nominal_period,
                               double min_swing = 0.5);

/// Median spacing of consecutive peak times; 0 with fewer than two peaks.
double median_peak_spacing(std::span<const double> peak_times);

/// Synchronization level at one reference cycle; unmatched neurons contribute 0.
double syn_level(const PeakSeries& series, int cycle, double period);

/// Phase readout at one reference cycle; nullopt when any neuron lacks a
/// matched peak (pattern unreadable for that cycle).
std::optional<Pattern> read_pattern(const PeakSeries& series, int cycle, double period);

/// Correct iff `retrieved` matches, up to global complement, one of the stored
/// patterns at minimal Hamming distance (over patterns and complements) from
/// `input`; any minimal-distance match counts on ties.
bool accuracy(const Pattern& retrieved, const std::vector<Pattern>& stored, const Pattern& input);

struct RunMetrics {
    std::vector<double> syn_per_cycle;
    std::vector<std::optional<Pattern>> retrieved_per_cycle;
    double syn_converged = 0.0;
    bool stable = false;
    std::optional<Pattern> retrieved;  // last-cycle readout when readable
    bool correct = false;
    int cycles_to_converge = -1;  // first cycle after which the readout never changes
    bool reference_oscillating = false;
    int n_cycles = 0;
};

/// Full per-run scoring of a trace against the stored patterns and the input.
RunMetrics score_run(const Trace& trace, Topology topology, double nominal_period,
                     const std::vector<Pattern>& stored, const Pattern& input,
                     double min_swing = 0.5);

/// Fraction of applied patterns with a stable readout.
double stability(std::span<const RunMetrics> reports);

}  // namespace donn
