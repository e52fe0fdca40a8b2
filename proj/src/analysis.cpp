#include "donn/analysis.hpp"

#include <cmath>
#include <stdexcept>

#include "donn/transient.hpp"

namespace donn {

namespace {

double get_param(const NeuronParams& p, ParamClass x) {
    switch (x) {
        case ParamClass::VHigh: return p.vo2.v_high;
        case ParamClass::VLow: return p.vo2.v_low;
        case ParamClass::RHigh: return p.vo2.r_high;
        case ParamClass::RLow: return p.vo2.r_low;
        case ParamClass::RSeries: return p.r_series;
        case ParamClass::CParallel: return p.c_parallel;
        case ParamClass::CCoupling: return p.c_coupling;
        case ParamClass::Memristance: break;
    }
    throw std::invalid_argument("sensitivity: memristance is not a neuron parameter");
}

NeuronParams with_param(NeuronParams p, ParamClass x, double value) {
    switch (x) {
        case ParamClass::VHigh: p.vo2.v_high = value; return p;
        case ParamClass::VLow: p.vo2.v_low = value; return p;
        case ParamClass::RHigh: p.vo2.r_high = value; return p;
        case ParamClass::RLow: p.vo2.r_low = value; return p;
        case ParamClass::RSeries: p.r_series = value; return p;
        case ParamClass::CParallel: p.c_parallel = value; return p;
        case ParamClass::CCoupling: p.c_coupling = value; return p;
        case ParamClass::Memristance: break;
    }
    throw std::invalid_argument("sensitivity: memristance is not a neuron parameter");
}

double frequency_at(const NeuronParams& p) {
    const auto period = analytic_period(nominal_branch_view(p));
    if (!period) throw std::runtime_error("sensitivity: point does not oscillate");
    return 1.0 / *period;
}

}  // namespace

double sensitivity(ParamClass x, const NeuronParams& point, double rel_step) {
    const double x0 = get_param(point, x);
    const double h = rel_step * x0;
    const double f0 = frequency_at(point);
    const double f_plus = frequency_at(with_param(point, x, x0 + h));
    const double f_minus = frequency_at(with_param(point, x, x0 - h));
    return (x0 / f0) * (f_plus - f_minus) / (2.0 * h);
}

double sensitivity_lumped_scale(const NeuronParams& point, double rel_step) {
    auto scaled = [&](double k) {
        NeuronParams p = point;
        p.c_parallel *= k;
        p.c_coupling *= k;
        return frequency_at(p);
    };
    const double f0 = frequency_at(point);
    return (1.0 / f0) * (scaled(1.0 + rel_step) - scaled(1.0 - rel_step)) / (2.0 * rel_step);
}

std::vector<SensitivityEntry> sensitivity_report(const NeuronParams& point) {
    std::vector<SensitivityEntry> out;
    out.reserve(std::size(kSensitivityParams));
    for (ParamClass p : kSensitivityParams) out.push_back({p, sensitivity(p, point)});
    return out;
}

std::vector<SurfacePoint> sensitivity_surface(SurfacePlane plane, std::span<const double> xs,
                                              std::span<const double> ys, const NeuronParams& fixed) {
    std::vector<SurfacePoint> out;
    out.reserve(xs.size() * ys.size());
    for (double x : xs) {
        for (double y : ys) {
            SurfacePoint pt;
            pt.x = x;
            pt.y = y;
            NeuronParams p = fixed;
            if (plane == SurfacePlane::RhRl) {
                p.vo2.r_high = x;
                p.vo2.r_low = y;
            } else {
                p.vo2.v_high = x;
                p.vo2.v_low = y;
            }
            const bool shape_ok = p.vo2.v_high > p.vo2.v_low && p.vo2.r_high > p.vo2.r_low;
            if (shape_ok && analytic_period(nominal_branch_view(p))) {
                try {
                    pt.value = sensitivity(ParamClass::VHigh, p);
                    pt.valid = true;
                } catch (const std::runtime_error&) {
                    pt.valid = false;  // stencil left the oscillation region
                }
            }
            out.push_back(pt);
        }
    }
    return out;
}

double max_tolerated_rsd(std::span<const double> rsd_grid, std::span<const MetricTriple> metrics,
                         double threshold) {
    if (rsd_grid.size() != metrics.size()) {
        throw std::invalid_argument("max_tolerated_rsd: grid/metrics size mismatch");
    }
    double best = 0.0;
    for (std::size_t i = 0; i < rsd_grid.size(); ++i) {
        const MetricTriple& m = metrics[i];
        if (m.syn > threshold && m.stb > threshold && m.acc > threshold) {
            best = std::max(best, rsd_grid[i]);
        }
    }
    return best;
}

std::vector<DseCell> dse_enumerate_cells(SurfacePlane plane, std::span<const double> xs,
                                         std::span<const double> ys, const NeuronParams& base,
                                         int n_neurons, double min_gap) {
    std::vector<DseCell> out;
    for (double x : xs) {
        for (double y : ys) {
            if (plane == SurfacePlane::VhVl && !(x >= y + min_gap)) continue;
            DseCell cell;
            cell.x = x;
            cell.y = y;
            cell.params = base;
            if (plane == SurfacePlane::VhVl) {
                cell.params.vo2.v_high = x;
                cell.params.vo2.v_low = y;
            } else {
                cell.params.vo2.r_high = x;
                cell.params.vo2.r_low = y;
            }
            const bool shape_ok =
                cell.params.vo2.v_high > cell.params.vo2.v_low && cell.params.vo2.r_high > cell.params.vo2.r_low;
            if (shape_ok) {
                cell.g0 = g0_feasible_interval(n_neurons, cell.params);
                cell.feasible =
                    cell.g0.feasible && analytic_period(nominal_branch_view(cell.params)).has_value();
            }
            out.push_back(cell);
        }
    }
    return out;
}

}  // namespace donn
