#include "donn/storage.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace donn {

void MappingParams::validate() const {
    if (!(alpha > 1.0)) throw std::invalid_argument("MappingParams: alpha must exceed 1");
    if (!(beta > 0.0)) throw std::invalid_argument("MappingParams: beta must be positive");
    if (!(g0 > 0.0)) throw std::invalid_argument("MappingParams: g0 must be positive");
}

WeightMatrix hebbian_weights(const std::vector<Pattern>& patterns) {
    if (patterns.empty()) throw std::invalid_argument("hebbian_weights: need at least one pattern");
    const int n = patterns.front().size();
    if (n < 2) throw std::invalid_argument("hebbian_weights: patterns must have >= 2 pixels");
    for (const auto& p : patterns) {
        if (p.size() != n) throw std::invalid_argument("hebbian_weights: inconsistent pattern lengths");
        for (auto px : p.pixels) {
            if (px != 1 && px != -1) throw std::invalid_argument("hebbian_weights: pixels must be -1 or +1");
        }
    }

    WeightMatrix wm;
    wm.n = n;
    wm.n_patterns = static_cast<int>(patterns.size());
    wm.w.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            int sum = 0;
            for (const auto& p : patterns) sum += p.pixels[i] * p.pixels[j];
            const double w = static_cast<double>(sum) / n;
            wm.at(i, j) = w;
            wm.at(j, i) = w;
        }
    }
    return wm;
}

NormalizedMagnitudes normalize_magnitudes(const WeightMatrix& wm) {
    const int n = wm.n;
    NormalizedMagnitudes out;
    out.m_norm.assign(static_cast<std::size_t>(n) * n, 0.0);
    out.is_zero_weight.assign(static_cast<std::size_t>(n) * n, 0);

    double inv_min = std::numeric_limits<double>::infinity();
    double inv_max = -std::numeric_limits<double>::infinity();
    int n_nonzero = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double w = wm.at(i, j);
            if (w == 0.0) {
                out.is_zero_weight[static_cast<std::size_t>(i) * n + j] = 1;
                continue;
            }
            const double inv = std::abs(1.0 / w);
            inv_min = std::min(inv_min, inv);
            inv_max = std::max(inv_max, inv);
            ++n_nonzero;
        }
    }
    if (n_nonzero == 0) {
        out.degenerate = true;
        return out;
    }

    // All nonzero |w| equal makes Eq-style min-max 0/0; every magnitude maps
    // to the strongest conductance instead.
    if (!(inv_max > inv_min)) {
        out.degenerate = true;
        return out;
    }

    const double span = inv_max - inv_min;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double w = wm.at(i, j);
            if (w == 0.0) continue;
            out.m_norm[static_cast<std::size_t>(i) * n + j] = (std::abs(1.0 / w) - inv_min) / span;
        }
    }
    return out;
}

std::vector<double> map_conductance(const WeightMatrix& wm, const MappingParams& mp) {
    mp.validate();
    const int n = wm.n;
    const double bp = mp.beta * wm.n_patterns;
    const NormalizedMagnitudes norm = normalize_magnitudes(wm);

    std::vector<double> g(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const std::size_t k = static_cast<std::size_t>(i) * n + j;
            g[k] = norm.is_zero_weight[k] ? mp.g0 / (1.0 + bp)
                                          : mp.g0 / (1.0 + bp * norm.m_norm[k]);
        }
    }
    return g;
}

BridgeConductances split_signs(double w_ij, double g_ij, double alpha) {
    if (!(alpha > 1.0)) throw std::invalid_argument("split_signs: alpha must exceed 1");
    if (w_ij > 0.0) return {g_ij, g_ij / alpha};
    if (w_ij < 0.0) return {g_ij / alpha, g_ij};
    return {g_ij / alpha, g_ij / alpha};
}

G0Interval g0_feasible_interval(int n, const NeuronParams& p) {
    if (n < 2) throw std::invalid_argument("g0_feasible_interval: need at least 2 neurons");
    p.validate();
    const double g_s = 1.0 / p.r_series;
    const double g_l = 1.0 / p.vo2.r_high;
    const double g_h = 1.0 / p.vo2.r_low;
    const double v_h = p.vo2.v_high;
    const double v_l = p.vo2.v_low;
    const double window = v_h - v_l;

    G0Interval out;
    const double num_high = g_s * p.v_dd - v_h * (g_s + g_l);
    const double num_low = v_l * (g_s + g_h) - g_s * p.v_dd;
    out.bound_high_state = num_high / ((n - 1) * window);
    out.bound_low_state = num_low / ((n - 1) * window);
    if (num_high <= 0.0) {
        out.failed_condition = "high-threshold";
        return out;
    }
    if (num_low <= 0.0) {
        out.failed_condition = "low-threshold";
        return out;
    }
    out.feasible = true;
    out.chosen = 0.9 * std::min(out.bound_high_state, out.bound_low_state);
    return out;
}

std::vector<BridgeConductances> map_weights_to_bridges(const WeightMatrix& wm, const MappingParams& mp) {
    const std::vector<double> g = map_conductance(wm, mp);
    std::vector<BridgeConductances> bridges;
    bridges.reserve(static_cast<std::size_t>(wm.n) * (wm.n - 1) / 2);
    for (int i = 0; i < wm.n; ++i) {
        for (int j = i + 1; j < wm.n; ++j) {
            bridges.push_back(split_signs(wm.at(i, j), g[static_cast<std::size_t>(i) * wm.n + j], mp.alpha));
        }
    }
    return bridges;
}

}  // namespace donn
