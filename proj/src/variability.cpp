#include "donn/variability.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

namespace donn {

const char* param_class_name(ParamClass c) {
    switch (c) {
        case ParamClass::Memristance: return "memristance";
        case ParamClass::VHigh: return "V_H";
        case ParamClass::VLow: return "V_L";
        case ParamClass::RHigh: return "R_H";
        case ParamClass::RLow: return "R_L";
        case ParamClass::RSeries: return "R_S";
        case ParamClass::CParallel: return "C";
        case ParamClass::CCoupling: return "C_c";
    }
    return "?";
}

ParamClass param_class_from_name(std::string_view name) {
    if (name == "memristance") return ParamClass::Memristance;
    if (name == "V_H") return ParamClass::VHigh;
    if (name == "V_L") return ParamClass::VLow;
    if (name == "R_H") return ParamClass::RHigh;
    if (name == "R_L") return ParamClass::RLow;
    if (name == "R_S") return ParamClass::RSeries;
    if (name == "C") return ParamClass::CParallel;
    if (name == "C_c") return ParamClass::CCoupling;
    throw std::invalid_argument("unknown parameter class: " + std::string(name));
}

namespace {

double draw_positive(double mean, double rsd, Rng& rng, int* rejections) {
    if (rsd == 0.0) return mean;
    const double sigma = rsd * mean;
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const double x = mean + sigma * rng.next_normal();
        if (x > 0.0) return x;
        if (rejections) ++(*rejections);
    }
    throw std::runtime_error("sample_normal: 1000 consecutive non-positive draws (rsd too large?)");
}

}  // namespace

std::vector<double> sample_normal(double mean, double rsd, int count, Rng& rng, int* rejections) {
    if (!(mean > 0.0)) throw std::invalid_argument("sample_normal: mean must be positive");
    if (rsd < 0.0) throw std::invalid_argument("sample_normal: rsd must be >= 0");
    if (count < 1) throw std::invalid_argument("sample_normal: count must be >= 1");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) out.push_back(draw_positive(mean, rsd, rng, rejections));
    return out;
}

SampledInstance apply_mismatch(const Netlist& base, const MismatchSpec& spec, Rng& rng) {
    if (spec.rsd < 0.0) throw std::invalid_argument("apply_mismatch: rsd must be >= 0");
    SampledInstance inst;
    inst.netlist = base;
    inst.target = spec.target;
    inst.rsd = spec.rsd;

    auto draw = [&](double mean) {
        const double x = draw_positive(mean, spec.rsd, rng, &inst.rejections);
        inst.values.push_back(x);
        return x;
    };

    Netlist& net = inst.netlist;
    switch (spec.target) {
        case ParamClass::Memristance:
            for (auto& m : net.memristors) m.resistance = draw(m.resistance);
            break;
        case ParamClass::VHigh:
            for (auto& br : net.branches) br.vo2.v_high = draw(br.vo2.v_high);
            break;
        case ParamClass::VLow:
            for (auto& br : net.branches) br.vo2.v_low = draw(br.vo2.v_low);
            break;
        case ParamClass::RHigh:
            for (auto& br : net.branches) br.vo2.r_high = draw(br.vo2.r_high);
            break;
        case ParamClass::RLow:
            for (auto& br : net.branches) br.vo2.r_low = draw(br.vo2.r_low);
            break;
        case ParamClass::RSeries:
            for (auto& br : net.branches) br.r_series = draw(br.r_series);
            break;
        case ParamClass::CParallel:
            for (auto& br : net.branches) br.c_parallel = draw(br.c_parallel);
            break;
        case ParamClass::CCoupling:
            if (net.topology != Topology::Differential) {
                throw std::invalid_argument("apply_mismatch: single-ended netlist has no coupling capacitors");
            }
            for (auto& cc : net.coupling_caps) cc = draw(cc);
            break;
    }
    return inst;
}

BranchFrequencies branch_frequencies(const Netlist& net) {
    BranchFrequencies out;
    const int n = net.n_nodes();
    out.hz.resize(static_cast<std::size_t>(n), 0.0);
    out.oscillating.resize(static_cast<std::size_t>(n), 0);

    for (int k = 0; k < n; ++k) {
        const Branch& br = net.branches[static_cast<std::size_t>(k)];
        double c_star = br.c_parallel;
        if (net.topology == Topology::Differential) c_star += net.coupling_caps[static_cast<std::size_t>(k / 2)];
        const auto period = analytic_period(BranchView{1.0 / br.r_series, br.v_dd, c_star, br.vo2});
        if (period) {
            out.hz[static_cast<std::size_t>(k)] = 1.0 / *period;
            out.oscillating[static_cast<std::size_t>(k)] = 1;
        } else {
            ++out.n_non_oscillating;
        }
    }

    double sum = 0.0;
    int count = 0;
    for (int k = 0; k < n; ++k) {
        if (out.oscillating[static_cast<std::size_t>(k)]) {
            sum += out.hz[static_cast<std::size_t>(k)];
            ++count;
        }
    }
    if (count == 0) return out;
    out.mean = sum / count;
    if (count >= 2 && out.mean > 0.0) {
        double ss = 0.0;
        for (int k = 0; k < n; ++k) {
            if (!out.oscillating[static_cast<std::size_t>(k)]) continue;
            const double d = out.hz[static_cast<std::size_t>(k)] - out.mean;
            ss += d * d;
        }
        out.rsd = std::sqrt(ss / (count - 1)) / out.mean;
    }
    return out;
}

void write_histogram_csv(const std::string& path, const std::vector<double>& values,
                         double nominal_mean, double rsd) {
    if (values.empty()) throw std::invalid_argument("write_histogram_csv: no values");
    const double width = nominal_mean * (rsd > 0.0 ? rsd : 1.0) / 4.0;
    if (!(width > 0.0)) throw std::invalid_argument("write_histogram_csv: bad bin width");

    std::map<long long, int> bins;
    for (double v : values) bins[static_cast<long long>(std::floor(v / width))]++;

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for write: " + path);
    out << "value,count\n";
    for (const auto& [bin, count] : bins) {
        out << (static_cast<double>(bin) + 0.5) * width << ',' << count << '\n';
    }
}

}  // namespace donn
