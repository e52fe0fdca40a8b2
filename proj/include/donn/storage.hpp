#pragma once

// Pattern storage: Hebbian weights and the weight -> memristor-conductance
// mapping. The magnitude map inverts the weights, min-max normalizes over the
// nonzero entries, and compresses into (g0/(1+beta*P), g0]; the sign map
// splits each magnitude into bridge arms so that sign(g_d - g_c) equals the
// weight sign, with the larger arm at g_ij and the smaller at g_ij/alpha.

#include <optional>
#include <vector>

#include "donn/netlist.hpp"
#include "donn/pattern.hpp"

namespace donn {

struct WeightMatrix {
    int n = 0;           // neurons (== pattern length)
    int n_patterns = 0;  // P
    std::vector<double> w;  // row-major n*n, symmetric, zero diagonal

    double at(int i, int j) const { return w[static_cast<std::size_t>(i) * n + j]; }
    double& at(int i, int j) { return w[static_cast<std::size_t>(i) * n + j]; }
};

struct MappingParams {
    double alpha = 1.8;  // sign-split ratio, > 1
    double beta = 0.2;   // conductance range control, > 0
    double g0 = 0.0;     // maximum memristor conductance [S]

    void validate() const;
};

/// w_ij = (1/N) sum_k b_i^k b_j^k, zero diagonal.
WeightMatrix hebbian_weights(const std::vector<Pattern>& patterns);

struct NormalizedMagnitudes {
    std::vector<double> m_norm;       // row-major n*n; meaningful off-diagonal only
    std::vector<std::uint8_t> is_zero_weight;  // w_ij == 0 entries (use the zero branch)
    bool degenerate = false;          // all nonzero |w| equal: every m_norm is 0
};

/// Min-max normalization of |1/w_ij| over the nonzero off-diagonal weights.
NormalizedMagnitudes normalize_magnitudes(const WeightMatrix& w);

/// Conductance magnitudes g_ij in [g0/(1+beta*P), g0], row-major n*n
/// (diagonal entries zero, unused).
std::vector<double> map_conductance(const WeightMatrix& w, const MappingParams& mp);

/// Split a magnitude into bridge arms by weight sign.
BridgeConductances split_signs(double w_ij, double g_ij, double alpha);

struct G0Interval {
    double bound_high_state = 0.0;  // cap from the insulating-side condition [S]
    double bound_low_state = 0.0;   // cap from the metallic-side condition [S]
    double chosen = 0.0;            // 0.9 * min(bounds) [S]
    bool feasible = false;
    const char* failed_condition = nullptr;  // "high-threshold" / "low-threshold" when infeasible
};

/// Maximum-conductance interval that preserves oscillation for an N-neuron
/// network, and the operating point 0.9 * min(bounds).
G0Interval g0_feasible_interval(int n, const NeuronParams& p);

/// Full Hebbian + mapping pipeline: per-pair bridge conductances in
/// lexicographic pair order, ready for build_donn.
std::vector<BridgeConductances> map_weights_to_bridges(const WeightMatrix& w, const MappingParams& mp);

}  // namespace donn
