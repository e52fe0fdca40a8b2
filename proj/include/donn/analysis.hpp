#pragma once

// Formula-level analysis of the natural frequency: normalized sensitivities
// S_x^f = (x/f) df/dx by central finite differences on the analytic period,
// sensitivity surfaces over device-parameter planes, and the design-space
// helpers (cell enumeration with per-cell g0, maximum tolerated rsd).

#include <span>
#include <vector>

#include "donn/netlist.hpp"
#include "donn/storage.hpp"
#include "donn/variability.hpp"

namespace donn {

/// Normalized frequency sensitivity to one neuron parameter (not Memristance),
/// central difference with the given relative step. Throws when the stencil
/// leaves the oscillation region.
double sensitivity(ParamClass x, const NeuronParams& point, double rel_step = 1e-6);

/// Sensitivity to a joint scale factor on C and C_c (lumped C*); -1 for the
/// analytic period, useful as an oracle anchor.
double sensitivity_lumped_scale(const NeuronParams& point, double rel_step = 1e-6);

inline constexpr ParamClass kSensitivityParams[] = {
    ParamClass::VHigh, ParamClass::VLow,     ParamClass::RHigh,    ParamClass::RLow,
    ParamClass::RSeries, ParamClass::CParallel, ParamClass::CCoupling,
};

struct SensitivityEntry {
    ParamClass param;
    double s;
};

/// All seven neuron-parameter sensitivities at a point.
std::vector<SensitivityEntry> sensitivity_report(const NeuronParams& point);

enum class SurfacePlane { RhRl, VhVl };

struct SurfacePoint {
    double x = 0.0;
    double y = 0.0;
    double value = 0.0;
    bool valid = false;  // false where the cell does not oscillate
};

/// S_{V_H}^f over a grid in the (R_H, R_L) or (V_H, V_L) plane; non-oscillating
/// cells are marked invalid, not errored.
std::vector<SurfacePoint> sensitivity_surface(SurfacePlane plane, std::span<const double> xs,
                                              std::span<const double> ys, const NeuronParams& fixed);

struct MetricTriple {
    double syn = 0.0;
    double stb = 0.0;
    double acc = 0.0;
};

/// Largest grid rsd whose averaged syn, stb and acc all exceed `threshold`;
/// 0 when none qualifies. `metrics` is aligned with `rsd_grid`.
double max_tolerated_rsd(std::span<const double> rsd_grid, std::span<const MetricTriple> metrics,
                         double threshold = 0.8);

struct DseCell {
    double x = 0.0;  // V_H or R_H
    double y = 0.0;  // V_L or R_L
    NeuronParams params;
    G0Interval g0;
    bool feasible = false;  // g0 interval non-empty and the cell oscillates
};

/// Stage-1 cells: (V_H, V_L) grid restricted to V_H >= V_L + min_gap, with the
/// per-cell g0 operating point. Stage-2 cells: (R_H, R_L) grid at fixed
/// thresholds. Infeasible cells are kept, marked.
std::vector<DseCell> dse_enumerate_cells(SurfacePlane plane, std::span<const double> xs,
                                         std::span<const double> ys, const NeuronParams& base,
                                         int n_neurons, double min_gap = 0.4);

}  // namespace donn
