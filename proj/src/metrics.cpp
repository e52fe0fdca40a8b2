#include "donn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace donn {

PeakDetection detect_peaks(const Trace& trace, int channel, double nominal_period, double min_swing) {
    if (!(nominal_period > 0.0)) throw std::invalid_argument("detect_peaks: period must be positive");
    if (channel < 0 || channel >= static_cast<int>(trace.voltages.size())) {
        throw std::out_of_range("detect_peaks: bad channel");
    }
    const auto& t = trace.times;
    const auto& y = trace.voltages[static_cast<std::size_t>(channel)];
    PeakDetection out;
    if (y.size() < 3) return out;

    const double t_cut = kTransientCycles * nominal_period;

    // Post-transient swing; a latched branch only carries coupled ripple.
    double y_min = std::numeric_limits<double>::infinity();
    double y_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (t[i] < t_cut) continue;
        y_min = std::min(y_min, y[i]);
        y_max = std::max(y_max, y[i]);
    }
    const bool swings = y_max - y_min >= min_swing;

    const double min_sep = 0.6 * nominal_period;
    std::vector<std::size_t> idx;
    for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        if (!(y[i] > y[i - 1] && y[i] >= y[i + 1])) continue;
        if (!idx.empty() && t[i] - t[idx.back()] < min_sep) {
            if (y[i] > y[idx.back()]) idx.back() = i;  // keep the taller of close maxima
            continue;
        }
        idx.push_back(i);
    }

    for (std::size_t i : idx) {
        // Quadratic fit through the three samples around the maximum.
        const double y0 = y[i - 1], y1 = y[i], y2 = y[i + 1];
        const double denom = y0 - 2.0 * y1 + y2;
        double tp = t[i];
        if (denom < 0.0) {
            const double delta = 0.5 * (y0 - y2) / denom;
            tp += std::clamp(delta, -0.5, 0.5) * (t[i + 1] - t[i]);
        }
        if (tp >= t_cut) out.times.push_back(tp);
    }
    out.oscillating = swings && out.times.size() >= 2;
    if (!out.oscillating) out.times.clear();
    return out;
}

double map_timediff(double dt, double period) {
    if (!(period > 0.0)) throw std::invalid_argument("map_timediff: period must be positive");
    const double half = 0.5 * period;
    double d = std::fmod(dt, half);
    if (d < 0.0) d += half;
    return 1.0 - (4.0 / period) * std::min(d, half - d);
}

PeakSeries extract_peak_series(const Trace& trace, Topology topology, double nominal_period,
                               double min_swing) {
    const int n_nodes = static_cast<int>(trace.voltages.size());
    const int n_neurons = topology == Topology::Differential ? n_nodes / 2 : n_nodes;
    PeakSeries series;
    series.peaks.resize(static_cast<std::size_t>(n_neurons));
    series.oscillating.resize(static_cast<std::size_t>(n_neurons));
    for (int i = 0; i < n_neurons; ++i) {
        const int channel = topology == Topology::Differential ? 2 * i : i;
        PeakDetection det = detect_peaks(trace, channel, nominal_period, min_swing);
        series.oscillating[static_cast<std::size_t>(i)] = det.oscillating ? 1 : 0;
        series.peaks[static_cast<std::size_t>(i)] = std::move(det.times);
    }
    return series;
}

double median_peak_spacing(std::span<const double> peak_times) {
    if (peak_times.size() < 2) return 0.0;
    std::vector<double> gaps;
    gaps.reserve(peak_times.size() - 1);
    for (std::size_t i = 1; i < peak_times.size(); ++i) {
        gaps.push_back(peak_times[i] - peak_times[i - 1]);
    }
    const std::size_t mid = gaps.size() / 2;
    std::nth_element(gaps.begin(), gaps.begin() + static_cast<std::ptrdiff_t>(mid), gaps.end());
    return gaps[mid];
}

namespace {

/// Peak of neuron `i` nearest to `t_ref`. A locked anti-phase neuron sits at
/// offset T/2 exactly, so the acceptance window is 0.75 T: wide enough that
/// boundary jitter never drops a legitimate match, narrow enough that a
/// missing cycle still reads as unmatched.
std::optional<double> matched_peak(const PeakSeries& series, int i, double t_ref, double period) {
    const auto& pk = series.peaks[static_cast<std::size_t>(i)];
    if (pk.empty()) return std::nullopt;
    const auto it = std::lower_bound(pk.begin(), pk.end(), t_ref);
    double best = std::numeric_limits<double>::infinity();
    if (it != pk.end()) best = *it;
    if (it != pk.begin() && std::abs(*(it - 1) - t_ref) < std::abs(best - t_ref)) best = *(it - 1);
    if (!std::isfinite(best) || std::abs(best - t_ref) > 0.75 * period) return std::nullopt;
    return best;
}

}  // namespace

double syn_level(const PeakSeries& series, int cycle, double period) {
    const auto& ref = series.peaks[static_cast<std::size_t>(series.reference)];
    if (cycle < 0 || cycle >= static_cast<int>(ref.size())) {
        throw std::out_of_range("syn_level: bad cycle");
    }
    const double t_ref = ref[static_cast<std::size_t>(cycle)];
    const int n = static_cast<int>(series.peaks.size());
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto m = matched_peak(series, i, t_ref, period);
        if (m) sum += map_timediff(*m - t_ref, period);
    }
    return sum / n;
}

std::optional<Pattern> read_pattern(const PeakSeries& series, int cycle, double period) {
    const auto& ref = series.peaks[static_cast<std::size_t>(series.reference)];
    if (cycle < 0 || cycle >= static_cast<int>(ref.size())) {
        throw std::out_of_range("read_pattern: bad cycle");
    }
    const double t_ref = ref[static_cast<std::size_t>(cycle)];
    const int n = static_cast<int>(series.peaks.size());
    Pattern p;
    p.pixels.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto m = matched_peak(series, i, t_ref, period);
        if (!m) return std::nullopt;
        const double off = std::abs(*m - t_ref);
        const double r = std::fmod(off, period);
        const double circ = std::min(r, period - r);
        p.pixels[static_cast<std::size_t>(i)] = circ < 0.25 * period ? +1 : -1;
    }
    return p;
}

bool accuracy(const Pattern& retrieved, const std::vector<Pattern>& stored, const Pattern& input) {
    if (stored.empty()) throw std::invalid_argument("accuracy: no stored patterns");
    int d_min = std::numeric_limits<int>::max();
    for (const auto& s : stored) {
        d_min = std::min(d_min, hamming_distance(input, s));
        d_min = std::min(d_min, hamming_distance(input, complement(s)));
    }
    const Pattern want = canonical(retrieved);
    for (const auto& s : stored) {
        if (hamming_distance(input, s) == d_min && canonical(s) == want) return true;
        const Pattern c = complement(s);
        if (hamming_distance(input, c) == d_min && canonical(c) == want) return true;
    }
    return false;
}

RunMetrics score_run(const Trace& trace, Topology topology, double nominal_period,
                     const std::vector<Pattern>& stored, const Pattern& input, double min_swing) {
    RunMetrics rm;
    const PeakSeries series = extract_peak_series(trace, topology, nominal_period, min_swing);
    rm.reference_oscillating = series.oscillating[static_cast<std::size_t>(series.reference)] != 0;
    rm.n_cycles = static_cast<int>(series.peaks[static_cast<std::size_t>(series.reference)].size());
    if (!rm.reference_oscillating || rm.n_cycles < 2) return rm;

    // Phase arithmetic uses the measured reference period: the smoothed
    // transitions stretch the real cycle beyond the analytic value, and the
    // offset map needs the period the network actually runs at.
    double period = median_peak_spacing(series.peaks[static_cast<std::size_t>(series.reference)]);
    if (!(period > 0.0)) period = nominal_period;

    rm.syn_per_cycle.reserve(static_cast<std::size_t>(rm.n_cycles));
    rm.retrieved_per_cycle.reserve(static_cast<std::size_t>(rm.n_cycles));
    for (int c = 0; c < rm.n_cycles; ++c) {
        rm.syn_per_cycle.push_back(syn_level(series, c, period));
        rm.retrieved_per_cycle.push_back(read_pattern(series, c, period));
    }
    const auto& readouts = rm.retrieved_per_cycle;

    const int window = std::min(kConvergenceWindow, rm.n_cycles);
    double acc = 0.0;
    for (int c = rm.n_cycles - window; c < rm.n_cycles; ++c) {
        acc += rm.syn_per_cycle[static_cast<std::size_t>(c)];
    }
    rm.syn_converged = acc / window;

    const auto& last = readouts.back();
    if (rm.n_cycles >= kConvergenceWindow && last.has_value()) {
        bool stable = true;
        for (int c = rm.n_cycles - kConvergenceWindow; c < rm.n_cycles; ++c) {
            const auto& r = readouts[static_cast<std::size_t>(c)];
            if (!r.has_value() || !(*r == *last)) {
                stable = false;
                break;
            }
        }
        rm.stable = stable;
    }
    if (last.has_value()) {
        rm.retrieved = last;
        rm.correct = rm.stable && accuracy(*last, stored, input);
    }
    if (last.has_value()) {
        int first = rm.n_cycles - 1;
        while (first > 0) {
            const auto& r = readouts[static_cast<std::size_t>(first - 1)];
            if (!r.has_value() || !(*r == *last)) break;
            --first;
        }
        if (rm.stable) rm.cycles_to_converge = first;
    }
    return rm;
}

double stability(std::span<const RunMetrics> reports) {
    if (reports.empty()) return 0.0;
    double n_stable = 0.0;
    for (const auto& r : reports) n_stable += r.stable ? 1.0 : 0.0;
    return n_stable / static_cast<double>(reports.size());
}

}  // namespace donn
