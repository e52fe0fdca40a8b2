#pragma once

// Transient integration of the coupled node-voltage / device-state system
//
//     M dv/dt = i(v, s, t),   ds/dt per device model,
//
// where M is the constant capacitance matrix (factored once per run) and the
// per-node current collects the switched supply through R_S, the VO2 device
// to ground, and the resistive couplings. Integration is fixed-step classic
// RK4 from v = 0, s = 0; fixed stepping keeps Monte-Carlo runs reproducible.
//
// In Smooth mode the VO2 state is part of the RK4 system and the step must
// satisfy dt <= tau/20. In IdealSwitch mode the binary state is re-evaluated
// at step boundaries and the metallicity relaxes along the exact exponential,
// so any step size is stable.

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "donn/netlist.hpp"
#include "donn/pattern.hpp"

namespace donn {

/// Per-branch supply-enable times; the supply is 0 V before t_on, v_dd after.
struct PowerSchedule {
    std::vector<double> t_on;
};

struct SimConfig {
    double dt = 2e-9;          // integration step [s]
    double duration = 0.0;     // [s]
    int record_stride = 2;     // store every k-th step
    DeviceMode device_mode = DeviceMode::Smooth;
    double nominal_period = 0.0;  // carried into the trace (0 = unknown)
};

struct Trace {
    std::vector<double> times;
    std::vector<std::vector<double>> voltages;  // [node][sample]
    std::vector<std::vector<double>> states;    // [device][sample]
    std::vector<std::string> node_names;
    double nominal_period = 0.0;

    std::size_t n_samples() const { return times.size(); }
};

/// Single-branch view used by the analytic period formula: series conductance,
/// supply, lumped node capacitance C* and the branch's VO2 parameters.
struct BranchView {
    double g_s = 0.0;
    double v_dd = 0.0;
    double c_star = 0.0;
    Vo2Params vo2;
};

/// Nominal branch view with C* = C + C_c.
BranchView nominal_branch_view(const NeuronParams& p);

double analytic_v_max(const BranchView& b);
double analytic_v_min(const BranchView& b);

/// Oscillation period of an isolated branch; nullopt when the oscillation
/// condition V_min < V_L < V_H < V_max fails (the device latches).
std::optional<double> analytic_period(const BranchView& b);

/// Symmetric positive-definite capacitance matrix (throws on a non-PD stamp).
Eigen::MatrixXd assemble_capacitance_matrix(const Netlist& netlist);

/// Net current into every node at time t.
Eigen::VectorXd node_currents(const Netlist& netlist, const Eigen::VectorXd& v,
                              const Eigen::VectorXd& s, double t, const PowerSchedule& schedule);

Trace simulate(const Netlist& netlist, const PowerSchedule& schedule, const SimConfig& cfg);

/// Phase-initialization write: pixel +1 powers the p branch at 0 and the n
/// branch at T/2; pixel -1 mirrors. Single-ended: +1 at 0, -1 at T/2.
PowerSchedule schedule_from_pattern(const Pattern& pattern, double nominal_period,
                                    Topology topology = Topology::Differential);

}  // namespace donn
