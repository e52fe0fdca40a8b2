#include "donn/transient.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace donn {

BranchView nominal_branch_view(const NeuronParams& p) {
    return BranchView{1.0 / p.r_series, p.v_dd, p.c_parallel + p.c_coupling, p.vo2};
}

double analytic_v_max(const BranchView& b) {
    const double g_l = 1.0 / b.vo2.r_high;
    return b.g_s * b.v_dd / (g_l + b.g_s);
}

double analytic_v_min(const BranchView& b) {
    const double g_h = 1.0 / b.vo2.r_low;
    return b.g_s * b.v_dd / (g_h + b.g_s);
}

std::optional<double> analytic_period(const BranchView& b) {
    const double g_l = 1.0 / b.vo2.r_high;
    const double g_h = 1.0 / b.vo2.r_low;
    const double v_max = analytic_v_max(b);
    const double v_min = analytic_v_min(b);
    const double v_h = b.vo2.v_high;
    const double v_l = b.vo2.v_low;
    if (!(v_min < v_l) || !(v_h < v_max) || !(v_l < v_h)) return std::nullopt;
    const double rise = std::log((v_max - v_l) / (v_max - v_h)) / (g_l + b.g_s);
    const double fall = std::log((v_min - v_h) / (v_min - v_l)) / (g_h + b.g_s);
    return b.c_star * (rise + fall);
}

Eigen::MatrixXd assemble_capacitance_matrix(const Netlist& net) {
    const int n = net.n_nodes();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) m(k, k) += net.branches[static_cast<std::size_t>(k)].c_parallel;
    for (std::size_t neuron = 0; neuron < net.coupling_caps.size(); ++neuron) {
        const int a = net.node_index(static_cast<int>(neuron), 0);
        const int b = net.node_index(static_cast<int>(neuron), 1);
        const double cc = net.coupling_caps[neuron];
        m(a, a) += cc;
        m(b, b) += cc;
        m(a, b) -= cc;
        m(b, a) -= cc;
    }
    for (const auto& sc : net.synapse_caps) {
        m(sc.node_a, sc.node_a) += sc.capacitance;
        m(sc.node_b, sc.node_b) += sc.capacitance;
        m(sc.node_a, sc.node_b) -= sc.capacitance;
        m(sc.node_b, sc.node_a) -= sc.capacitance;
    }
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error("capacitance matrix is not positive definite (malformed netlist)");
    }
    return m;
}

namespace {

struct Edge {
    int a;
    int b;
    double g;
};

// Flattened per-node/per-device arrays for the integration loop.
struct System {
    int n = 0;
    std::vector<double> g_series, v_dd, t_on;
    std::vector<double> g_low, g_span;          // VO2 endpoints: G_L, G_H - G_L
    std::vector<double> v_high, v_win, slope2;  // threshold and comparator terms
    std::vector<double> inv_tau;
    std::vector<Edge> edges;

    void currents(const double* v, const double* s, double t, double* i_out) const {
        for (int k = 0; k < n; ++k) {
            const double vsup = t >= t_on[static_cast<std::size_t>(k)] ? v_dd[static_cast<std::size_t>(k)] : 0.0;
            const double sc = std::clamp(s[k], 0.0, 1.0);
            const double g_dev = g_low[static_cast<std::size_t>(k)] + g_span[static_cast<std::size_t>(k)] * sc;
            i_out[k] = g_series[static_cast<std::size_t>(k)] * (vsup - v[k]) - g_dev * v[k];
        }
        for (const Edge& e : edges) {
            const double d = e.g * (v[e.b] - v[e.a]);
            i_out[e.a] += d;
            i_out[e.b] -= d;
        }
    }

    void state_derivatives(const double* v, const double* s, double* ds_out) const {
        for (int k = 0; k < n; ++k) {
            const std::size_t u = static_cast<std::size_t>(k);
            const double vth = v_high[u] - v_win[u] * s[k];
            const double comp = 0.5 * (1.0 + std::tanh(slope2[u] * (v[k] - vth)));
            ds_out[k] = (comp - s[k]) * inv_tau[u];
        }
    }
};

System build_system(const Netlist& net, const PowerSchedule& schedule) {
    const int n = net.n_nodes();
    if (static_cast<int>(schedule.t_on.size()) != n) {
        throw std::invalid_argument("schedule size does not match node count");
    }
    System sys;
    sys.n = n;
    sys.g_series.resize(static_cast<std::size_t>(n));
    sys.v_dd.resize(static_cast<std::size_t>(n));
    sys.t_on = schedule.t_on;
    sys.g_low.resize(static_cast<std::size_t>(n));
    sys.g_span.resize(static_cast<std::size_t>(n));
    sys.v_high.resize(static_cast<std::size_t>(n));
    sys.v_win.resize(static_cast<std::size_t>(n));
    sys.slope2.resize(static_cast<std::size_t>(n));
    sys.inv_tau.resize(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const Branch& br = net.branches[static_cast<std::size_t>(k)];
        const std::size_t u = static_cast<std::size_t>(k);
        sys.g_series[u] = 1.0 / br.r_series;
        sys.v_dd[u] = br.v_dd;
        sys.g_low[u] = 1.0 / br.vo2.r_high;
        sys.g_span[u] = 1.0 / br.vo2.r_low - 1.0 / br.vo2.r_high;
        sys.v_high[u] = br.vo2.v_high;
        sys.v_win[u] = br.vo2.v_high - br.vo2.v_low;
        sys.slope2[u] = 2.0 * br.vo2.cmp_slope;
        sys.inv_tau[u] = 1.0 / br.vo2.tau;
    }
    sys.edges.reserve(net.memristors.size());
    for (const auto& m : net.memristors) {
        sys.edges.push_back({m.node_a, m.node_b, 1.0 / m.resistance});
    }
    return sys;
}

[[noreturn]] void throw_non_finite(const Netlist& net, const Eigen::VectorXd& v, double t) {
    for (int k = 0; k < v.size(); ++k) {
        if (!std::isfinite(v[k])) {
            throw std::runtime_error("non-finite voltage at node " + net.node_name(static_cast<int>(k)) +
                                     " at t=" + std::to_string(t) + " s (step too large?)");
        }
    }
    throw std::runtime_error("non-finite device state at t=" + std::to_string(t) + " s");
}

}  // namespace

Eigen::VectorXd node_currents(const Netlist& net, const Eigen::VectorXd& v, const Eigen::VectorXd& s,
                              double t, const PowerSchedule& schedule) {
    if (v.size() != net.n_nodes() || s.size() != net.n_nodes()) {
        throw std::invalid_argument("node_currents: dimension mismatch");
    }
    const System sys = build_system(net, schedule);
    Eigen::VectorXd i(net.n_nodes());
    sys.currents(v.data(), s.data(), t, i.data());
    return i;
}

Trace simulate(const Netlist& net, const PowerSchedule& schedule, const SimConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("simulate: dt must be positive");
    if (cfg.record_stride < 1) throw std::invalid_argument("simulate: record_stride must be >= 1");
    const int n = net.n_nodes();
    if (n == 0) throw std::invalid_argument("simulate: empty netlist");

    if (cfg.device_mode == DeviceMode::Smooth) {
        double tau_min = net.branches.front().vo2.tau;
        for (const auto& br : net.branches) tau_min = std::min(tau_min, br.vo2.tau);
        if (cfg.dt > tau_min / 20.0) {
            throw std::invalid_argument("simulate: dt must be <= tau/20 in Smooth mode");
        }
    }

    {
        const Branch& b0 = net.branches.front();
        const double c_star = b0.c_parallel + (net.coupling_caps.empty() ? 0.0 : net.coupling_caps.front());
        if (!analytic_period(BranchView{1.0 / b0.r_series, b0.v_dd, c_star, b0.vo2})) {
            std::cerr << "[donn] warning: branch 0 does not satisfy the oscillation condition\n";
        }
    }

    Trace trace;
    trace.nominal_period = cfg.nominal_period;
    trace.node_names.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) trace.node_names.push_back(net.node_name(k));
    trace.voltages.assign(static_cast<std::size_t>(n), {});
    trace.states.assign(static_cast<std::size_t>(n), {});
    if (cfg.duration <= 0.0) return trace;

    const long long n_steps = std::llround(cfg.duration / cfg.dt);
    const std::size_t n_samples = static_cast<std::size_t>(n_steps / cfg.record_stride) + 1;
    trace.times.reserve(n_samples);
    for (auto& ch : trace.voltages) ch.reserve(n_samples);
    for (auto& ch : trace.states) ch.reserve(n_samples);

    const System sys = build_system(net, schedule);
    const Eigen::MatrixXd m = assemble_capacitance_matrix(net);
    const Eigen::MatrixXd m_inv = m.llt().solve(Eigen::MatrixXd::Identity(n, n));

    Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd i_buf(n), vt(n), st(n);
    Eigen::VectorXd k1v(n), k2v(n), k3v(n), k4v(n);
    Eigen::VectorXd k1s(n), k2s(n), k3s(n), k4s(n);

    // IdealSwitch bookkeeping: binary targets plus exact per-step decay factors.
    std::vector<double> target(static_cast<std::size_t>(n), 0.0);
    std::vector<double> decay_half(static_cast<std::size_t>(n), 0.0);
    std::vector<double> decay_full(static_cast<std::size_t>(n), 0.0);
    if (cfg.device_mode == DeviceMode::IdealSwitch) {
        for (int k = 0; k < n; ++k) {
            const double tau = net.branches[static_cast<std::size_t>(k)].vo2.tau;
            const std::size_t u = static_cast<std::size_t>(k);
            decay_half[u] = tau > 0.0 ? std::exp(-0.5 * cfg.dt / tau) : 0.0;
            decay_full[u] = tau > 0.0 ? std::exp(-cfg.dt / tau) : 0.0;
        }
    }

    const double h = cfg.dt;
    auto eval_dv = [&](const Eigen::VectorXd& vv, const Eigen::VectorXd& ss, double t, Eigen::VectorXd& dv) {
        sys.currents(vv.data(), ss.data(), t, i_buf.data());
        dv.noalias() = m_inv * i_buf;
    };

    long long step = 0;
    for (;;) {
        if (step % cfg.record_stride == 0) {
            const double t = static_cast<double>(step) * h;
            trace.times.push_back(t);
            for (int k = 0; k < n; ++k) {
                trace.voltages[static_cast<std::size_t>(k)].push_back(v[k]);
                trace.states[static_cast<std::size_t>(k)].push_back(s[k]);
            }
        }
        if (step == n_steps) break;
        const double t = static_cast<double>(step) * h;

        if (cfg.device_mode == DeviceMode::Smooth) {
            eval_dv(v, s, t, k1v);
            sys.state_derivatives(v.data(), s.data(), k1s.data());
            vt = v + (0.5 * h) * k1v;
            st = s + (0.5 * h) * k1s;
            eval_dv(vt, st, t + 0.5 * h, k2v);
            sys.state_derivatives(vt.data(), st.data(), k2s.data());
            vt = v + (0.5 * h) * k2v;
            st = s + (0.5 * h) * k2s;
            eval_dv(vt, st, t + 0.5 * h, k3v);
            sys.state_derivatives(vt.data(), st.data(), k3s.data());
            vt = v + h * k3v;
            st = s + h * k3s;
            eval_dv(vt, st, t + h, k4v);
            sys.state_derivatives(vt.data(), st.data(), k4s.data());
            v += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
            s += (h / 6.0) * (k1s + 2.0 * k2s + 2.0 * k3s + k4s);
            for (int k = 0; k < n; ++k) s[k] = std::clamp(s[k], 0.0, 1.0);
        } else {
            // Threshold detection at the step boundary, then the metallicity
            // follows the exact exponential toward the binary target within
            // the step; the voltage sees the interpolated state at each stage.
            for (int k = 0; k < n; ++k) {
                const std::size_t u = static_cast<std::size_t>(k);
                const Branch& br = net.branches[u];
                SwitchState st_bin = target[u] > 0.5 ? SwitchState::Metallic : SwitchState::Insulating;
                st_bin = ideal_switch_update(v[k], st_bin, br.vo2);
                target[u] = st_bin == SwitchState::Metallic ? 1.0 : 0.0;
                if (decay_full[u] == 0.0) s[k] = target[u];
            }
            for (int k = 0; k < n; ++k) {
                const std::size_t u = static_cast<std::size_t>(k);
                st[k] = target[u] + (s[k] - target[u]) * decay_half[u];
            }
            eval_dv(v, s, t, k1v);
            vt = v + (0.5 * h) * k1v;
            eval_dv(vt, st, t + 0.5 * h, k2v);
            vt = v + (0.5 * h) * k2v;
            eval_dv(vt, st, t + 0.5 * h, k3v);
            for (int k = 0; k < n; ++k) {
                const std::size_t u = static_cast<std::size_t>(k);
                st[k] = target[u] + (s[k] - target[u]) * decay_full[u];
            }
            vt = v + h * k3v;
            eval_dv(vt, st, t + h, k4v);
            v += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
            s = st;
        }

        ++step;
        if (!v.allFinite() || !s.allFinite()) {
            throw_non_finite(net, v, static_cast<double>(step) * h);
        }
    }
    return trace;
}

PowerSchedule schedule_from_pattern(const Pattern& pattern, double nominal_period, Topology topology) {
    if (!(nominal_period > 0.0)) throw std::invalid_argument("schedule_from_pattern: period must be positive");
    for (auto px : pattern.pixels) {
        if (px != 1 && px != -1) throw std::invalid_argument("schedule_from_pattern: pixels must be -1 or +1");
    }
    const double half = 0.5 * nominal_period;
    PowerSchedule sch;
    if (topology == Topology::Differential) {
        sch.t_on.resize(2 * pattern.pixels.size());
        for (std::size_t i = 0; i < pattern.pixels.size(); ++i) {
            const bool white = pattern.pixels[i] > 0;
            sch.t_on[2 * i] = white ? 0.0 : half;      // p branch
            sch.t_on[2 * i + 1] = white ? half : 0.0;  // n branch
        }
    } else {
        sch.t_on.resize(pattern.pixels.size());
        for (std::size_t i = 0; i < pattern.pixels.size(); ++i) {
            sch.t_on[i] = pattern.pixels[i] > 0 ? 0.0 : half;
        }
    }
    return sch;
}

}  // namespace donn
