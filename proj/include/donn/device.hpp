#pragma once

// VO2 two-terminal device model. The device conductance interpolates between
// the insulating endpoint G_L = 1/r_high and the metallic endpoint
// G_H = 1/r_low as a function of a continuous metallicity state s in [0, 1].
// The state is driven by a tanh comparator against a state-dependent
// threshold, which realizes the hysteresis loop: V_th(0) = v_high (IMT),
// V_th(1) = v_low (MIT).

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace donn {

struct Vo2Params {
    double v_high = 2.0;      // IMT threshold [V]
    double v_low = 1.0;       // MIT threshold [V]
    double r_high = 100e3;    // insulating resistance [ohm] (= 1/G_L)
    double r_low = 1e3;       // metallic resistance [ohm] (= 1/G_H)
    double tau = 100e-9;      // transition time constant [s]
    double cmp_slope = 40.0;  // comparator slope [1/V]

    void validate() const;  // throws std::invalid_argument on a broken invariant
};

enum class DeviceMode : std::uint8_t { Smooth, IdealSwitch };

enum class SwitchState : std::uint8_t { Insulating = 0, Metallic = 1 };

/// G(s) = G_L + (G_H - G_L) * s; s is clamped to [0, 1].
inline double vo2_conductance(double s, const Vo2Params& p) {
    const double sc = std::clamp(s, 0.0, 1.0);
    const double g_l = 1.0 / p.r_high;
    const double g_h = 1.0 / p.r_low;
    return g_l + (g_h - g_l) * sc;
}

/// State-dependent switching threshold: V_th(0) = v_high, V_th(1) = v_low.
inline double vo2_threshold(double s, const Vo2Params& p) {
    return p.v_high - (p.v_high - p.v_low) * s;
}

/// Comparator transfer curve, output in (0, 1), 0.5 at v_plus == v_minus.
inline double comparator_output(double v_plus, double v_minus, const Vo2Params& p) {
    return 0.5 * (1.0 + std::tanh(2.0 * p.cmp_slope * (v_plus - v_minus)));
}

/// Smooth-mode state equation: ds/dt = (comparator - s) / tau.
inline double vo2_state_derivative(double v_device, double s, const Vo2Params& p) {
    return (comparator_output(v_device, vo2_threshold(s, p), p) - s) / p.tau;
}

/// Two-state threshold update. The conductance relaxation toward the new
/// endpoint (time constant tau) is handled by the integrator.
inline SwitchState ideal_switch_update(double v_device, SwitchState state, const Vo2Params& p) {
    if (state == SwitchState::Insulating && v_device >= p.v_high) return SwitchState::Metallic;
    if (state == SwitchState::Metallic && v_device <= p.v_low) return SwitchState::Insulating;
    return state;
}

}  // namespace donn
