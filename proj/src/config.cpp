#include <fstream>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "donn/experiment.hpp"

namespace donn {

namespace {

using nlohmann::json;

template <typename T>
void get_if(const json& j, const char* name, T& out) {
    if (j.contains(name)) out = j.at(name).get<T>();
}

void parse_sim(const json& j, SimSettings& sim) {
    get_if(j, "dt", sim.dt);
    get_if(j, "cycles", sim.cycles);
    get_if(j, "record_stride", sim.record_stride);
    if (j.contains("device_mode")) {
        const std::string mode = j.at("device_mode").get<std::string>();
        if (mode == "smooth") sim.device_mode = DeviceMode::Smooth;
        else if (mode == "ideal-switch") sim.device_mode = DeviceMode::IdealSwitch;
        else throw std::invalid_argument("config: device_mode must be 'smooth' or 'ideal-switch'");
    }
}

void parse_neuron(const json& j, NeuronParams& p) {
    get_if(j, "r_series", p.r_series);
    get_if(j, "c_parallel", p.c_parallel);
    get_if(j, "c_coupling", p.c_coupling);
    get_if(j, "v_dd", p.v_dd);
}

void parse_device(const json& j, Vo2Params& p) {
    get_if(j, "v_high", p.v_high);
    get_if(j, "v_low", p.v_low);
    get_if(j, "r_high", p.r_high);
    get_if(j, "r_low", p.r_low);
    get_if(j, "tau", p.tau);
    get_if(j, "cmp_slope", p.cmp_slope);
}

}  // namespace

std::pair<double, double> default_class_rsd_range(ParamClass c) {
    switch (c) {
        case ParamClass::VHigh: return {0.0003, 0.0017};
        case ParamClass::VLow: return {0.0013, 0.01};
        case ParamClass::RHigh: return {0.008, 0.05};
        case ParamClass::RLow: return {0.01, 0.053};
        case ParamClass::RSeries: return {0.001, 0.007};
        case ParamClass::CParallel: return {0.0012, 0.01};
        case ParamClass::CCoupling: return {0.01, 0.075};
        case ParamClass::Memristance: return {0.0, 0.3};
    }
    throw std::invalid_argument("default_class_rsd_range: bad class");
}

void ExperimentConfig::validate() const {
    if (schema_version != 1) {
        throw std::invalid_argument("config: unsupported schema_version " + std::to_string(schema_version));
    }
    static const std::set<std::string> known = {
        "train", "demo", "sweep-synapse", "sweep-neuron", "sensitivity", "dse", "compare-single-ended",
    };
    if (!known.count(experiment)) {
        throw std::invalid_argument("config: unknown experiment '" + experiment + "'");
    }
    if (networks.empty()) throw std::invalid_argument("config: networks must be non-empty");
    for (const auto& nw : networks) {
        if (nw.n < 2) throw std::invalid_argument("config: network size must be >= 2");
        if (nw.p < 1) throw std::invalid_argument("config: stored pattern count must be >= 1");
    }
    if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (!(sim.dt > 0.0)) throw std::invalid_argument("config: sim.dt must be positive");
    if (sim.cycles < 12) throw std::invalid_argument("config: sim.cycles must be >= 12 for phase metrics");
    if (sim.record_stride < 1) throw std::invalid_argument("config: record_stride must be >= 1");
    neuron.validate();
    if (!(alpha > 1.0)) throw std::invalid_argument("config: alpha must exceed 1");
    if (!(beta > 0.0)) throw std::invalid_argument("config: beta must be positive");
    for (double r : rsd_grid) {
        if (r < 0.0) throw std::invalid_argument("config: rsd values must be >= 0");
    }
    if (experiment == "dse") {
        if (dse.stage != 1 && dse.stage != 2) throw std::invalid_argument("config: dse.stage must be 1 or 2");
        if (dse.x_grid.empty() || dse.y_grid.empty() || dse.rsd_grid.empty()) {
            throw std::invalid_argument("config: dse grids must be non-empty");
        }
    }
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error("config parse error in " + path + ": " + e.what());
    }

    ExperimentConfig cfg;
    get_if(j, "schema_version", cfg.schema_version);
    get_if(j, "experiment", cfg.experiment);
    get_if(j, "seed", cfg.seed);
    get_if(j, "out_dir", cfg.out_dir);
    get_if(j, "threads", cfg.threads);
    get_if(j, "trials", cfg.trials);
    get_if(j, "test_patterns", cfg.test_patterns);
    get_if(j, "alpha", cfg.alpha);
    get_if(j, "beta", cfg.beta);
    get_if(j, "rsd_grid", cfg.rsd_grid);
    get_if(j, "param_classes", cfg.param_classes);
    get_if(j, "rsd_points", cfg.rsd_points);
    get_if(j, "patterns_file", cfg.patterns_file);
    get_if(j, "histogram_rsd", cfg.histogram_rsd);

    if (j.contains("networks")) {
        cfg.networks.clear();
        for (const auto& nw : j.at("networks")) {
            cfg.networks.push_back({nw.at("n").get<int>(), nw.at("p").get<int>()});
        }
    }
    if (j.contains("sim")) parse_sim(j.at("sim"), cfg.sim);
    if (j.contains("neuron")) parse_neuron(j.at("neuron"), cfg.neuron);
    if (j.contains("device")) parse_device(j.at("device"), cfg.neuron.vo2);
    if (j.contains("class_rsd_ranges")) {
        for (const auto& [name, range] : j.at("class_rsd_ranges").items()) {
            cfg.class_rsd_ranges[name] = {range.at(0).get<double>(), range.at(1).get<double>()};
        }
    }
    if (j.contains("dse")) {
        const auto& d = j.at("dse");
        get_if(d, "stage", cfg.dse.stage);
        get_if(d, "x_grid", cfg.dse.x_grid);
        get_if(d, "y_grid", cfg.dse.y_grid);
        get_if(d, "rsd_grid", cfg.dse.rsd_grid);
        get_if(d, "min_gap", cfg.dse.min_gap);
        get_if(d, "threshold", cfg.dse.threshold);
        get_if(d, "fixed_v_high", cfg.dse.fixed_v_high);
        get_if(d, "fixed_v_low", cfg.dse.fixed_v_low);
    }
    if (j.contains("demo")) {
        const auto& d = j.at("demo");
        get_if(d, "input", cfg.demo.input);
        get_if(d, "flip_bits", cfg.demo.flip_bits);
        get_if(d, "mismatch_class", cfg.demo.mismatch_class);
        get_if(d, "mismatch_rsd", cfg.demo.mismatch_rsd);
        get_if(d, "dump_trace", cfg.demo.dump_trace);
    }
    if (j.contains("surfaces")) {
        const auto& s = j.at("surfaces");
        get_if(s, "rh_grid", cfg.surfaces.rh_grid);
        get_if(s, "rl_grid", cfg.surfaces.rl_grid);
        get_if(s, "vh_grid", cfg.surfaces.vh_grid);
        get_if(s, "vl_grid", cfg.surfaces.vl_grid);
    }
    if (j.contains("single_ended")) {
        const auto& s = j.at("single_ended");
        get_if(s, "r_positive", cfg.single_ended.r_positive);
        get_if(s, "r_negative", cfg.single_ended.r_negative);
        get_if(s, "cap_ratio", cfg.single_ended.cap_ratio);
    }
    cfg.validate();
    return cfg;
}

}  // namespace donn
