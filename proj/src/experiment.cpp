#include "donn/experiment.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <deque>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "donn/io.hpp"
#include "donn/parallel.hpp"

namespace donn {

namespace {

std::vector<double> linspace(double lo, double hi, int count) {
    std::vector<double> out;
    if (count <= 1) {
        out.push_back(lo);
        return out;
    }
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        out.push_back(lo + (hi - lo) * static_cast<double>(i) / (count - 1));
    }
    return out;
}

int default_test_count(const ExperimentConfig& cfg, int n) {
    if (cfg.test_patterns > 0) return cfg.test_patterns;
    return static_cast<int>(std::lround(1.5 * n));
}

}  // namespace

std::string key_string(const TrialKey& key) {
    std::string s;
    s += "topo=" + key.topology;
    s += "|cls=" + key.cls;
    s += "|N=" + std::to_string(key.n);
    s += "|P=" + std::to_string(key.p);
    s += "|x=" + fmt_shortest(key.x);
    s += "|y=" + fmt_shortest(key.y);
    s += "|rsd=" + fmt_shortest(key.rsd);
    s += "|trial=" + std::to_string(key.trial);
    return s;
}

PatternSet make_pattern_set(std::uint64_t master_seed, int n, int p, int n_tests) {
    Rng rng = substream(master_seed, "patterns|N=" + std::to_string(n) + "|P=" + std::to_string(p));
    PatternSet out;
    out.stored.reserve(static_cast<std::size_t>(p));
    int attempts = 0;
    while (static_cast<int>(out.stored.size()) < p) {
        if (++attempts > 10000) throw std::runtime_error("make_pattern_set: cannot draw distinct patterns");
        Pattern cand = random_pattern(n, rng);
        const Pattern canon = canonical(cand);
        bool dup = false;
        for (const auto& s : out.stored) {
            if (canonical(s) == canon) {
                dup = true;
                break;
            }
        }
        if (!dup) out.stored.push_back(std::move(cand));
    }
    out.tests.reserve(static_cast<std::size_t>(n_tests));
    for (int i = 0; i < n_tests; ++i) out.tests.push_back(random_pattern(n, rng));
    return out;
}

double calibrated_period(const NeuronParams& neuron, const SimSettings& sim, Topology topology) {
    const auto t_analytic = analytic_period(nominal_branch_view(neuron));
    if (!t_analytic) throw std::runtime_error("calibration: nominal branch does not oscillate");

    // One isolated neuron (negligible coupling to a dummy partner), written
    // with a +1 pixel, long enough for the post-transient peak window.
    Netlist net;
    if (topology == Topology::Differential) {
        const BridgeConductances weak{1e-15, 1e-15};
        net = build_donn(2, std::span<const BridgeConductances>(&weak, 1), neuron);
    } else {
        const SeSynapse weak{1e15, 0.0};
        net = build_single_ended(2, std::span<const SeSynapse>(&weak, 1), neuron);
    }
    Pattern pat;
    pat.pixels = {+1, +1};
    SimConfig sc;
    sc.dt = sim.dt;
    sc.duration = (kTransientCycles + 8) * 1.5 * *t_analytic;
    sc.record_stride = sim.record_stride;
    sc.device_mode = sim.device_mode;
    sc.nominal_period = *t_analytic;
    const Trace trace = simulate(net, schedule_from_pattern(pat, *t_analytic, topology), sc);
    const double min_swing = 0.5 * (neuron.vo2.v_high - neuron.vo2.v_low);
    const PeakDetection det = detect_peaks(trace, 0, *t_analytic, min_swing);
    const double measured = median_peak_spacing(det.times);
    if (!(measured > 0.0)) throw std::runtime_error("calibration: neuron does not oscillate in transient");
    return measured;
}

namespace {

struct BuiltTrial {
    Netlist net;
    double period;
    double min_swing;
};

BuiltTrial build_trial(const TrialSpec& spec) {
    spec.neuron.validate();
    const double period = calibrated_period(spec.neuron, spec.sim, spec.topology);

    const WeightMatrix weights = hebbian_weights(spec.patterns->stored);
    Netlist base;
    if (spec.topology == Topology::Differential) {
        spec.mapping.validate();
        const auto bridges = map_weights_to_bridges(weights, spec.mapping);
        base = build_donn(spec.key.n, bridges, spec.neuron);
    } else {
        std::vector<SeSynapse> synapses;
        synapses.reserve(static_cast<std::size_t>(spec.key.n) * (spec.key.n - 1) / 2);
        for (int i = 0; i < spec.key.n; ++i) {
            for (int j = i + 1; j < spec.key.n; ++j) {
                const double w = weights.at(i, j);
                if (w == 0.0) {
                    throw std::runtime_error("single-ended mapping requires nonzero weights (store one pattern)");
                }
                synapses.push_back({w > 0.0 ? spec.single_ended.r_positive : spec.single_ended.r_negative,
                                    spec.single_ended.cap_ratio * spec.neuron.c_parallel});
            }
        }
        base = build_single_ended(spec.key.n, synapses, spec.neuron);
    }

    if (spec.mismatch_target && spec.key.rsd > 0.0) {
        Rng rng = substream(spec.master_seed, "mismatch|" + key_string(spec.key));
        MismatchSpec ms{*spec.mismatch_target, spec.key.rsd,
                        substream_seed(spec.master_seed, "mismatch|" + key_string(spec.key))};
        base = apply_mismatch(base, ms, rng).netlist;
    }
    const double min_swing = 0.5 * (spec.neuron.vo2.v_high - spec.neuron.vo2.v_low);
    return {std::move(base), period, min_swing};
}

SimConfig sim_config(const TrialSpec& spec, double period) {
    SimConfig sc;
    sc.dt = spec.sim.dt;
    sc.duration = spec.sim.cycles * period;
    sc.record_stride = spec.sim.record_stride;
    sc.device_mode = spec.sim.device_mode;
    sc.nominal_period = period;
    return sc;
}

}  // namespace

TrialResult run_trial(const TrialSpec& spec) {
    const BuiltTrial built = build_trial(spec);
    TrialResult res;
    res.freq_rsd = branch_frequencies(built.net).rsd;

    const SimConfig sc = sim_config(spec, built.period);
    std::vector<RunMetrics> runs;
    runs.reserve(spec.patterns->tests.size());
    for (const Pattern& input : spec.patterns->tests) {
        const PowerSchedule sch = schedule_from_pattern(input, built.period, spec.topology);
        const Trace trace = simulate(built.net, sch, sc);
        runs.push_back(score_run(trace, spec.topology, built.period, spec.patterns->stored, input,
                                 built.min_swing));
    }
    if (runs.empty()) throw std::runtime_error("trial: no test patterns");

    double syn = 0.0, acc = 0.0;
    for (const auto& rm : runs) {
        syn += rm.syn_converged;
        acc += rm.correct ? 1.0 : 0.0;
    }
    res.syn = syn / static_cast<double>(runs.size());
    res.acc = acc / static_cast<double>(runs.size());
    res.stb = stability(runs);
    return res;
}

RunMetrics run_single_pattern(const TrialSpec& spec, const Pattern& input, Trace* trace_out) {
    const BuiltTrial built = build_trial(spec);
    const PowerSchedule sch = schedule_from_pattern(input, built.period, spec.topology);
    Trace trace = simulate(built.net, sch, sim_config(spec, built.period));
    RunMetrics rm =
        score_run(trace, spec.topology, built.period, spec.patterns->stored, input, built.min_swing);
    if (trace_out) *trace_out = std::move(trace);
    return rm;
}

// --- result persistence -------------------------------------------------------

namespace {

constexpr const char* kResultsHeader =
    "experiment,topology,N,P,class,x,y,rsd,trial,seed,syn,stb,acc,freq_rsd,failed";

struct RowData {
    TrialKey key;
    std::uint64_t seed = 0;
    TrialResult res;
};

std::string format_row(const std::string& experiment, const RowData& row) {
    std::string s;
    s += experiment;
    s += ',' + row.key.topology;
    s += ',' + std::to_string(row.key.n);
    s += ',' + std::to_string(row.key.p);
    s += ',' + row.key.cls;
    s += ',' + fmt_shortest(row.key.x);
    s += ',' + fmt_shortest(row.key.y);
    s += ',' + fmt_shortest(row.key.rsd);
    s += ',' + std::to_string(row.key.trial);
    s += ',' + std::to_string(row.seed);
    s += ',' + fmt_shortest(row.res.syn);
    s += ',' + fmt_shortest(row.res.stb);
    s += ',' + fmt_shortest(row.res.acc);
    s += ',' + fmt_shortest(row.res.freq_rsd);
    s += row.res.failed ? ",1" : ",0";
    return s;
}

std::string row_key_from_fields(const std::vector<std::string>& f) {
    return "topo=" + f[1] + "|cls=" + f[4] + "|N=" + f[2] + "|P=" + f[3] + "|x=" + f[5] +
           "|y=" + f[6] + "|rsd=" + f[7] + "|trial=" + f[8];
}

RowData parse_row(const std::vector<std::string>& f) {
    RowData row;
    row.key.topology = f[1];
    row.key.n = std::stoi(f[2]);
    row.key.p = std::stoi(f[3]);
    row.key.cls = f[4];
    row.key.x = std::stod(f[5]);
    row.key.y = std::stod(f[6]);
    row.key.rsd = std::stod(f[7]);
    row.key.trial = std::stoi(f[8]);
    row.seed = std::stoull(f[9]);
    row.res.syn = std::stod(f[10]);
    row.res.stb = std::stod(f[11]);
    row.res.acc = std::stod(f[12]);
    row.res.freq_rsd = std::stod(f[13]);
    row.res.failed = f[14] == "1";
    return row;
}

/// Completed rows from a previous run of the same config, keyed canonically.
std::map<std::string, std::string> load_existing_rows(const std::string& path) {
    std::map<std::string, std::string> out;
    std::ifstream in(path);
    if (!in) return out;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (first) {
            first = false;
            if (line != kResultsHeader) return {};  // schema changed: recompute everything
            continue;
        }
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 15) continue;
        out[row_key_from_fields(fields)] = line;
    }
    return out;
}

struct PointStats {
    TrialKey key;  // trial field unused
    int n_trials = 0;
    int n_failed = 0;
    double syn_mean = 0, syn_std = 0;
    double stb_mean = 0, stb_std = 0;
    double acc_mean = 0, acc_std = 0;
    double freq_mean = 0, freq_std = 0;
};

std::string point_key(const TrialKey& key) {
    TrialKey k = key;
    k.trial = 0;
    return key_string(k);
}

std::vector<PointStats> aggregate_rows(const std::vector<RowData>& rows) {
    std::vector<PointStats> points;
    std::map<std::string, std::size_t> index;
    std::map<std::string, std::vector<const RowData*>> groups;
    for (const auto& row : rows) {
        const std::string pk = point_key(row.key);
        if (!index.count(pk)) {
            index[pk] = points.size();
            PointStats ps;
            ps.key = row.key;
            points.push_back(ps);
        }
        groups[pk].push_back(&row);
    }
    for (auto& ps : points) {
        const auto& group = groups[point_key(ps.key)];
        std::vector<double> syn, stb, acc, freq;
        for (const RowData* r : group) {
            if (r->res.failed) {
                ++ps.n_failed;
                continue;
            }
            syn.push_back(r->res.syn);
            stb.push_back(r->res.stb);
            acc.push_back(r->res.acc);
            freq.push_back(r->res.freq_rsd);
        }
        ps.n_trials = static_cast<int>(syn.size());
        auto mean_std = [](const std::vector<double>& v, double& mean, double& sd) {
            if (v.empty()) return;
            mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
            if (v.size() >= 2) {
                double ss = 0.0;
                for (double x : v) ss += (x - mean) * (x - mean);
                sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
            }
        };
        mean_std(syn, ps.syn_mean, ps.syn_std);
        mean_std(stb, ps.stb_mean, ps.stb_std);
        mean_std(acc, ps.acc_mean, ps.acc_std);
        mean_std(freq, ps.freq_mean, ps.freq_std);
    }
    return points;
}

void write_aggregate_csv(const std::string& experiment, const std::vector<PointStats>& points,
                         const std::string& path) {
    std::string out =
        "experiment,topology,N,P,class,x,y,rsd,n_trials,n_failed,"
        "syn_mean,syn_std,stb_mean,stb_std,acc_mean,acc_std,freq_rsd_mean,freq_rsd_std\n";
    for (const auto& ps : points) {
        out += experiment;
        out += ',' + ps.key.topology;
        out += ',' + std::to_string(ps.key.n);
        out += ',' + std::to_string(ps.key.p);
        out += ',' + ps.key.cls;
        out += ',' + fmt_shortest(ps.key.x);
        out += ',' + fmt_shortest(ps.key.y);
        out += ',' + fmt_shortest(ps.key.rsd);
        out += ',' + std::to_string(ps.n_trials);
        out += ',' + std::to_string(ps.n_failed);
        out += ',' + fmt_shortest(ps.syn_mean);
        out += ',' + fmt_shortest(ps.syn_std);
        out += ',' + fmt_shortest(ps.stb_mean);
        out += ',' + fmt_shortest(ps.stb_std);
        out += ',' + fmt_shortest(ps.acc_mean);
        out += ',' + fmt_shortest(ps.acc_std);
        out += ',' + fmt_shortest(ps.freq_mean);
        out += ',' + fmt_shortest(ps.freq_std);
        out += '\n';
    }
    write_text_file(path, out);
}

/// Runs missing trials (resuming from results.csv when present), then writes
/// results.csv, aggregate.csv, and the timing sidecar.
std::vector<RowData> execute_and_persist(const ExperimentConfig& cfg,
                                         const std::vector<TrialSpec>& specs) {
    ensure_dir(cfg.out_dir);
    const std::string results_path = cfg.out_dir + "/results.csv";
    const auto existing = load_existing_rows(results_path);

    std::vector<std::string> lines(specs.size());
    std::vector<RowData> rows(specs.size());
    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const std::string key = key_string(specs[i].key);
        const auto it = existing.find(key);
        if (it != existing.end()) {
            lines[i] = it->second;
            rows[i] = parse_row(split_csv_line(it->second));
        } else {
            todo.push_back(i);
        }
    }

    std::vector<double> wall_ms(todo.size(), 0.0);
    parallel_for_index(todo.size(), cfg.threads, [&](std::size_t j) {
        const std::size_t i = todo[j];
        const TrialSpec& spec = specs[i];
        RowData row;
        row.key = spec.key;
        row.seed = substream_seed(spec.master_seed, "mismatch|" + key_string(spec.key));
        const auto t0 = std::chrono::steady_clock::now();
        try {
            row.res = run_trial(spec);
        } catch (const std::exception& e) {
            row.res = TrialResult{};
            row.res.failed = true;
            static std::mutex log_mutex;
            const std::lock_guard<std::mutex> lock(log_mutex);
            std::cerr << "[donn] trial failed (" << key_string(spec.key) << "): " << e.what() << "\n";
        }
        const auto t1 = std::chrono::steady_clock::now();
        wall_ms[j] = std::chrono::duration<double, std::milli>(t1 - t0).count();
        rows[i] = row;
        lines[i] = format_row(cfg.experiment, row);
    });

    std::string results = std::string(kResultsHeader) + "\n";
    for (const auto& line : lines) results += line + "\n";
    write_text_file(results_path, results);

    write_aggregate_csv(cfg.experiment, aggregate_rows(rows), cfg.out_dir + "/aggregate.csv");

    if (!todo.empty()) {
        std::string timing = "key,wall_ms\n";
        for (std::size_t j = 0; j < todo.size(); ++j) {
            timing += key_string(specs[todo[j]].key) + ',' + fmt_shortest(wall_ms[j]) + '\n';
        }
        write_text_file(cfg.out_dir + "/timing.csv", timing);
    }
    return rows;
}

MappingParams mapping_for(const ExperimentConfig& cfg, int n, const NeuronParams& neuron) {
    const G0Interval g0 = g0_feasible_interval(n, neuron);
    if (!g0.feasible) {
        throw std::runtime_error(std::string("g0 interval infeasible (") + g0.failed_condition +
                                 " condition) for N=" + std::to_string(n));
    }
    return MappingParams{cfg.alpha, cfg.beta, g0.chosen};
}

std::vector<Pattern> stored_patterns_for(const ExperimentConfig& cfg, int n, int p) {
    if (cfg.patterns_file.empty()) return {};
    auto stored = load_pattern_file(cfg.patterns_file);
    if (static_cast<int>(stored.size()) != p) {
        throw std::runtime_error("patterns_file holds " + std::to_string(stored.size()) +
                                 " patterns, config expects " + std::to_string(p));
    }
    for (const auto& s : stored) {
        if (s.size() != n) throw std::runtime_error("patterns_file length mismatch with N");
    }
    return stored;
}

PatternSet pattern_set_for(const ExperimentConfig& cfg, int n, int p) {
    PatternSet ps = make_pattern_set(cfg.seed, n, p, default_test_count(cfg, n));
    const auto from_file = stored_patterns_for(cfg, n, p);
    if (!from_file.empty()) ps.stored = from_file;
    return ps;
}

// --- experiment drivers --------------------------------------------------------

int run_synapse_sweep(const ExperimentConfig& cfg) {
    std::vector<double> grid = cfg.rsd_grid;
    if (grid.empty()) grid = {0.0, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30};

    std::deque<PatternSet> store;
    std::vector<TrialSpec> specs;
    for (const auto& nw : cfg.networks) {
        store.push_back(pattern_set_for(cfg, nw.n, nw.p));
        const PatternSet* ps = &store.back();
        const MappingParams mapping = mapping_for(cfg, nw.n, cfg.neuron);
        for (double rsd : grid) {
            for (int trial = 0; trial < cfg.trials; ++trial) {
                TrialSpec spec;
                spec.key = {"donn", "memristance", nw.n, nw.p, 0.0, 0.0, rsd, trial};
                spec.neuron = cfg.neuron;
                spec.mapping = mapping;
                spec.topology = Topology::Differential;
                spec.sim = cfg.sim;
                spec.patterns = ps;
                spec.mismatch_target = ParamClass::Memristance;
                spec.master_seed = cfg.seed;
                specs.push_back(std::move(spec));
            }
        }
    }
    execute_and_persist(cfg, specs);
    return 0;
}

int run_neuron_sweep(const ExperimentConfig& cfg) {
    std::vector<ParamClass> classes;
    if (cfg.param_classes.empty()) {
        classes.assign(std::begin(kSensitivityParams), std::end(kSensitivityParams));
    } else {
        for (const auto& name : cfg.param_classes) classes.push_back(param_class_from_name(name));
    }

    std::deque<PatternSet> store;
    std::vector<TrialSpec> specs;
    std::map<ParamClass, std::vector<double>> grids;
    for (ParamClass c : classes) {
        auto range = default_class_rsd_range(c);
        const auto it = cfg.class_rsd_ranges.find(param_class_name(c));
        if (it != cfg.class_rsd_ranges.end()) range = it->second;
        std::vector<double> grid{0.0};
        for (double r : linspace(range.first, range.second, cfg.rsd_points)) grid.push_back(r);
        grids[c] = std::move(grid);
    }

    for (const auto& nw : cfg.networks) {
        store.push_back(pattern_set_for(cfg, nw.n, nw.p));
        const PatternSet* ps = &store.back();
        const MappingParams mapping = mapping_for(cfg, nw.n, cfg.neuron);
        for (ParamClass c : classes) {
            for (double rsd : grids[c]) {
                for (int trial = 0; trial < cfg.trials; ++trial) {
                    TrialSpec spec;
                    spec.key = {"donn", param_class_name(c), nw.n, nw.p, 0.0, 0.0, rsd, trial};
                    spec.neuron = cfg.neuron;
                    spec.mapping = mapping;
                    spec.topology = Topology::Differential;
                    spec.sim = cfg.sim;
                    spec.patterns = ps;
                    spec.mismatch_target = c;
                    spec.master_seed = cfg.seed;
                    specs.push_back(std::move(spec));
                }
            }
        }
    }
    const auto rows = execute_and_persist(cfg, specs);

    // Fig. 9 style class panels averaged over network sizes, plus the
    // all-class average, aligned by grid index on the frequency-rsd axis.
    std::string out = "class,grid_index,rsd,freq_rsd_mean,syn_mean,stb_mean,acc_mean\n";
    const std::size_t n_idx = grids.empty() ? 0 : grids.begin()->second.size();
    std::vector<std::array<double, 4>> all_acc(n_idx, {0, 0, 0, 0});
    for (ParamClass c : classes) {
        const auto& grid = grids[c];
        for (std::size_t gi = 0; gi < grid.size(); ++gi) {
            double syn = 0, stb = 0, acc = 0, freq = 0;
            int count = 0;
            for (const auto& row : rows) {
                if (row.key.cls != param_class_name(c) || row.res.failed) continue;
                if (row.key.rsd != grid[gi]) continue;
                syn += row.res.syn;
                stb += row.res.stb;
                acc += row.res.acc;
                freq += row.res.freq_rsd;
                ++count;
            }
            if (count == 0) continue;
            syn /= count;
            stb /= count;
            acc /= count;
            freq /= count;
            out += std::string(param_class_name(c)) + ',' + std::to_string(gi) + ',' +
                   fmt_shortest(grid[gi]) + ',' + fmt_shortest(freq) + ',' + fmt_shortest(syn) + ',' +
                   fmt_shortest(stb) + ',' + fmt_shortest(acc) + '\n';
            all_acc[gi][0] += freq;
            all_acc[gi][1] += syn;
            all_acc[gi][2] += stb;
            all_acc[gi][3] += acc;
        }
    }
    for (std::size_t gi = 0; gi < n_idx; ++gi) {
        const double k = static_cast<double>(classes.size());
        out += "all," + std::to_string(gi) + ",," + fmt_shortest(all_acc[gi][0] / k) + ',' +
               fmt_shortest(all_acc[gi][1] / k) + ',' + fmt_shortest(all_acc[gi][2] / k) + ',' +
               fmt_shortest(all_acc[gi][3] / k) + '\n';
    }
    write_text_file(cfg.out_dir + "/aggregate_classes.csv", out);
    return 0;
}

int run_dse(const ExperimentConfig& cfg) {
    const SurfacePlane plane = cfg.dse.stage == 1 ? SurfacePlane::VhVl : SurfacePlane::RhRl;
    NeuronParams base = cfg.neuron;
    if (cfg.dse.stage == 2) {
        base.vo2.v_high = cfg.dse.fixed_v_high;
        base.vo2.v_low = cfg.dse.fixed_v_low;
    }

    std::deque<PatternSet> store;
    std::vector<TrialSpec> specs;
    struct CellRef {
        int n, p;
        DseCell cell;
    };
    std::vector<CellRef> cell_refs;

    for (const auto& nw : cfg.networks) {
        store.push_back(pattern_set_for(cfg, nw.n, nw.p));
        const PatternSet* ps = &store.back();
        const auto cells =
            dse_enumerate_cells(plane, cfg.dse.x_grid, cfg.dse.y_grid, base, nw.n, cfg.dse.min_gap);
        for (const DseCell& cell : cells) {
            cell_refs.push_back({nw.n, nw.p, cell});
            if (!cell.feasible) continue;
            const MappingParams mapping{cfg.alpha, cfg.beta, cell.g0.chosen};
            for (double rsd : cfg.dse.rsd_grid) {
                for (int trial = 0; trial < cfg.trials; ++trial) {
                    TrialSpec spec;
                    spec.key = {"donn", "V_H", nw.n, nw.p, cell.x, cell.y, rsd, trial};
                    spec.neuron = cell.params;
                    spec.mapping = mapping;
                    spec.topology = Topology::Differential;
                    spec.sim = cfg.sim;
                    spec.patterns = ps;
                    spec.mismatch_target = ParamClass::VHigh;
                    spec.master_seed = cfg.seed;
                    specs.push_back(std::move(spec));
                }
            }
        }
    }
    const auto rows = execute_and_persist(cfg, specs);

    std::string out = "stage,N,P,x,y,feasible,g0,max_rsd\n";
    for (const auto& ref : cell_refs) {
        double max_rsd = 0.0;
        if (ref.cell.feasible) {
            std::vector<MetricTriple> metrics;
            for (double rsd : cfg.dse.rsd_grid) {
                MetricTriple m;
                int count = 0;
                for (const auto& row : rows) {
                    if (row.res.failed || row.key.n != ref.n || row.key.x != ref.cell.x ||
                        row.key.y != ref.cell.y || row.key.rsd != rsd) {
                        continue;
                    }
                    m.syn += row.res.syn;
                    m.stb += row.res.stb;
                    m.acc += row.res.acc;
                    ++count;
                }
                if (count > 0) {
                    m.syn /= count;
                    m.stb /= count;
                    m.acc /= count;
                }
                metrics.push_back(m);
            }
            max_rsd = max_tolerated_rsd(cfg.dse.rsd_grid, metrics, cfg.dse.threshold);
        }
        out += std::to_string(cfg.dse.stage) + ',' + std::to_string(ref.n) + ',' +
               std::to_string(ref.p) + ',' + fmt_shortest(ref.cell.x) + ',' + fmt_shortest(ref.cell.y) +
               ',' + (ref.cell.feasible ? "1" : "0") + ',' +
               (ref.cell.feasible ? fmt_shortest(ref.cell.g0.chosen) : std::string()) + ',' +
               fmt_shortest(max_rsd) + '\n';
    }
    write_text_file(cfg.out_dir + "/dse_cells.csv", out);
    return 0;
}

int run_single_ended_compare(const ExperimentConfig& cfg) {
    const NetworkPreset nw = cfg.networks.front();
    std::vector<double> grid = cfg.rsd_grid;
    if (grid.empty()) grid = {0.0, 0.001, 0.002, 0.003, 0.004, 0.005};

    std::deque<PatternSet> store;
    store.push_back(pattern_set_for(cfg, nw.n, nw.p));
    const PatternSet* ps = &store.back();
    const MappingParams mapping = mapping_for(cfg, nw.n, cfg.neuron);

    std::vector<TrialSpec> specs;
    for (const char* topo : {"donn", "se"}) {
        for (double rsd : grid) {
            for (int trial = 0; trial < cfg.trials; ++trial) {
                TrialSpec spec;
                spec.key = {topo, "V_H", nw.n, nw.p, 0.0, 0.0, rsd, trial};
                spec.neuron = cfg.neuron;
                spec.mapping = mapping;
                spec.topology = std::string(topo) == "donn" ? Topology::Differential : Topology::SingleEnded;
                spec.sim = cfg.sim;
                spec.patterns = ps;
                spec.mismatch_target = ParamClass::VHigh;
                spec.master_seed = cfg.seed;
                spec.single_ended = cfg.single_ended;
                specs.push_back(std::move(spec));
            }
        }
    }
    execute_and_persist(cfg, specs);

    // Mismatch-free recall demo for both networks, same stored pattern.
    std::string report;
    for (const char* topo : {"donn", "se"}) {
        TrialSpec spec;
        spec.key = {topo, "none", nw.n, nw.p, 0.0, 0.0, 0.0, 0};
        spec.neuron = cfg.neuron;
        spec.mapping = mapping;
        spec.topology = std::string(topo) == "donn" ? Topology::Differential : Topology::SingleEnded;
        spec.sim = cfg.sim;
        spec.patterns = ps;
        spec.master_seed = cfg.seed;
        spec.single_ended = cfg.single_ended;
        const RunMetrics rm = run_single_pattern(spec, ps->stored.front());
        report += std::string(topo) + ": input=" + pattern_to_string(ps->stored.front()) +
                  " retrieved=" + (rm.retrieved ? pattern_to_string(*rm.retrieved) : std::string("?")) +
                  " stable=" + (rm.stable ? "yes" : "no") + " correct=" + (rm.correct ? "yes" : "no") +
                  " syn=" + fmt_shortest(rm.syn_converged) + '\n';
    }
    write_text_file(cfg.out_dir + "/compare_demo.txt", report);
    return 0;
}

int run_demo(const ExperimentConfig& cfg) {
    const NetworkPreset nw = cfg.networks.front();
    std::deque<PatternSet> store;
    store.push_back(pattern_set_for(cfg, nw.n, nw.p));
    const PatternSet* ps = &store.back();

    Pattern input;
    if (!cfg.demo.input.empty()) {
        input = parse_pattern(cfg.demo.input);
        if (input.size() != nw.n) throw std::runtime_error("demo input length != N");
    } else {
        input = ps->stored.front();
        Rng rng = substream(cfg.seed, "demo-input");
        for (int k = 0; k < cfg.demo.flip_bits; ++k) {
            input = flip_bit(input, static_cast<int>(rng.next_below(static_cast<std::uint64_t>(nw.n))));
        }
    }

    TrialSpec spec;
    spec.key = {"donn", cfg.demo.mismatch_class.empty() ? "none" : cfg.demo.mismatch_class,
                nw.n, nw.p, 0.0, 0.0, cfg.demo.mismatch_rsd, 0};
    spec.neuron = cfg.neuron;
    spec.mapping = mapping_for(cfg, nw.n, cfg.neuron);
    spec.topology = Topology::Differential;
    spec.sim = cfg.sim;
    spec.patterns = ps;
    if (!cfg.demo.mismatch_class.empty()) {
        spec.mismatch_target = param_class_from_name(cfg.demo.mismatch_class);
    }
    spec.master_seed = cfg.seed;

    ensure_dir(cfg.out_dir);
    Trace trace;
    const RunMetrics rm = run_single_pattern(spec, input, &trace);
    if (cfg.demo.dump_trace) write_trace_csv(trace, cfg.out_dir + "/trace_demo.csv");

    std::ostringstream rep;
    rep << "input:   " << pattern_to_string(input) << "\n";
    for (std::size_t k = 0; k < ps->stored.size(); ++k) {
        rep << "stored" << k << ": " << pattern_to_string(ps->stored[k]) << "\n";
    }
    if (!cfg.demo.mismatch_class.empty()) {
        rep << "mismatch: " << cfg.demo.mismatch_class << " rsd=" << fmt_shortest(cfg.demo.mismatch_rsd)
            << "\n";
    }
    rep << "\ncycle,syn,pattern\n";
    for (int c = 0; c < rm.n_cycles; ++c) {
        const auto& r = rm.retrieved_per_cycle[static_cast<std::size_t>(c)];
        rep << c << ',' << fmt_shortest(rm.syn_per_cycle[static_cast<std::size_t>(c)]) << ','
            << (r ? pattern_to_string(*r) : std::string("?")) << "\n";
    }
    rep << "\nsyn_converged=" << fmt_shortest(rm.syn_converged) << " stable=" << (rm.stable ? "yes" : "no")
        << " correct=" << (rm.correct ? "yes" : "no")
        << " retrieved=" << (rm.retrieved ? pattern_to_string(*rm.retrieved) : std::string("?")) << "\n";
    write_text_file(cfg.out_dir + "/report.txt", rep.str());

    std::string metrics = "pattern_id,syn_converged,stable,correct,cycles_to_converge\n";
    metrics += "0," + fmt_shortest(rm.syn_converged) + ',' + (rm.stable ? "1" : "0") + ',' +
               (rm.correct ? "1" : "0") + ',' + std::to_string(rm.cycles_to_converge) + '\n';
    write_text_file(cfg.out_dir + "/metrics.csv", metrics);
    std::cout << rep.str();
    return rm.correct ? 0 : 1;
}

int run_train(const ExperimentConfig& cfg) {
    const NetworkPreset nw = cfg.networks.front();
    std::deque<PatternSet> store;
    store.push_back(pattern_set_for(cfg, nw.n, nw.p));
    const PatternSet& ps = store.back();

    ensure_dir(cfg.out_dir);
    const WeightMatrix weights = hebbian_weights(ps.stored);
    write_matrix_csv(weights.w, weights.n, cfg.out_dir + "/weights.csv");

    const G0Interval g0 = g0_feasible_interval(nw.n, cfg.neuron);
    if (!g0.feasible) {
        throw std::runtime_error(std::string("g0 interval infeasible: ") + g0.failed_condition);
    }
    const MappingParams mapping{cfg.alpha, cfg.beta, g0.chosen};
    write_matrix_csv(map_conductance(weights, mapping), weights.n, cfg.out_dir + "/conductances.csv");

    const auto bridges = map_weights_to_bridges(weights, mapping);
    std::string btxt = "i,j,g_d,g_c\n";
    std::size_t k = 0;
    for (int i = 0; i < nw.n; ++i) {
        for (int j = i + 1; j < nw.n; ++j, ++k) {
            btxt += std::to_string(i) + ',' + std::to_string(j) + ',' + fmt_shortest(bridges[k].g_d) +
                    ',' + fmt_shortest(bridges[k].g_c) + '\n';
        }
    }
    write_text_file(cfg.out_dir + "/bridges.csv", btxt);

    const Netlist net = build_donn(nw.n, bridges, cfg.neuron);
    dump_netlist_json(net, cfg.out_dir + "/netlist.json");

    std::ostringstream summary;
    summary << "stored patterns:\n";
    for (const auto& p : ps.stored) summary << "  " << pattern_to_string(p) << "\n";
    summary << "g0 bounds [S]: high-threshold " << fmt_shortest(g0.bound_high_state)
            << ", low-threshold " << fmt_shortest(g0.bound_low_state) << "\n";
    summary << "g0 chosen [S]: " << fmt_shortest(g0.chosen)
            << " (min memristance " << fmt_shortest(1.0 / g0.chosen) << " ohm)\n";

    if (cfg.histogram_rsd > 0.0) {
        Rng rng = substream(cfg.seed, "mismatch|train");
        const SampledInstance inst =
            apply_mismatch(net, {ParamClass::Memristance, cfg.histogram_rsd, 0}, rng);
        double nominal_mean = 0.0;
        for (const auto& m : net.memristors) nominal_mean += m.resistance;
        nominal_mean /= static_cast<double>(net.memristors.size());
        write_histogram_csv(cfg.out_dir + "/histogram.csv", inst.values, nominal_mean, cfg.histogram_rsd);
        summary << "histogram: " << inst.values.size() << " memristors at rsd "
                << fmt_shortest(cfg.histogram_rsd) << "\n";
    }
    write_text_file(cfg.out_dir + "/summary.txt", summary.str());
    std::cout << summary.str();
    return 0;
}

int run_sensitivity(const ExperimentConfig& cfg) {
    ensure_dir(cfg.out_dir);
    std::string out = "parameter,s\n";
    for (const auto& entry : sensitivity_report(cfg.neuron)) {
        out += std::string(param_class_name(entry.param)) + ',' + fmt_shortest(entry.s) + '\n';
    }
    out += "C_star_scale," + fmt_shortest(sensitivity_lumped_scale(cfg.neuron)) + '\n';
    write_text_file(cfg.out_dir + "/sensitivity.csv", out);

    auto grid_or = [](const std::vector<double>& g, double lo, double hi, int n) {
        return g.empty() ? linspace(lo, hi, n) : g;
    };
    const auto rh = grid_or(cfg.surfaces.rh_grid, 100e3, 500e3, 9);
    const auto rl = grid_or(cfg.surfaces.rl_grid, 500.0, 1500.0, 9);
    const auto vh = grid_or(cfg.surfaces.vh_grid, 1.0, 2.2, 7);
    const auto vl = grid_or(cfg.surfaces.vl_grid, 0.2, 1.8, 9);

    auto write_surface = [&](SurfacePlane plane, std::span<const double> xs, std::span<const double> ys,
                             const std::string& path) {
        std::string csv = "x,y,value\n";
        for (const auto& pt : sensitivity_surface(plane, xs, ys, cfg.neuron)) {
            csv += fmt_shortest(pt.x) + ',' + fmt_shortest(pt.y) + ',' +
                   (pt.valid ? fmt_shortest(pt.value) : std::string()) + '\n';
        }
        write_text_file(path, csv);
    };
    write_surface(SurfacePlane::RhRl, rh, rl, cfg.out_dir + "/surface_rh_rl.csv");
    write_surface(SurfacePlane::VhVl, vh, vl, cfg.out_dir + "/surface_vh_vl.csv");
    std::cout << out;
    return 0;
}

}  // namespace

int run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.experiment == "train") return run_train(cfg);
    if (cfg.experiment == "demo") return run_demo(cfg);
    if (cfg.experiment == "sweep-synapse") return run_synapse_sweep(cfg);
    if (cfg.experiment == "sweep-neuron") return run_neuron_sweep(cfg);
    if (cfg.experiment == "sensitivity") return run_sensitivity(cfg);
    if (cfg.experiment == "dse") return run_dse(cfg);
    if (cfg.experiment == "compare-single-ended") return run_single_ended_compare(cfg);
    throw std::invalid_argument("unknown experiment: " + cfg.experiment);
}

}  // namespace donn
