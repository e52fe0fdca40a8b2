// Command-line front end: every subcommand loads a JSON config and runs one
// experiment. --seed/--out/--threads override the config in place.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "donn/experiment.hpp"

namespace {

struct CommonArgs {
    std::string config;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out;
    int threads = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config, "experiment config (JSON)")->required();
    cmd->add_option("--seed", args.seed, "master seed override")->each([&](const std::string&) {
        args.seed_set = true;
    });
    cmd->add_option("--out", args.out, "output directory override");
    cmd->add_option("--threads", args.threads, "worker threads (0 = hardware)");
}

int dispatch(const std::string& verb, const CommonArgs& args) {
    donn::ExperimentConfig cfg = donn::load_config(args.config);
    cfg.experiment = verb;
    if (args.seed_set) cfg.seed = args.seed;
    if (!args.out.empty()) cfg.out_dir = args.out;
    if (args.threads >= 0) cfg.threads = args.threads;
    return donn::run_experiment(cfg);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"VO2 differential oscillatory network simulator"};
    app.require_subcommand(1);

    const char* verbs[] = {"train",       "demo", "sweep-synapse",        "sweep-neuron",
                           "sensitivity", "dse",  "compare-single-ended"};
    const char* descriptions[] = {
        "compute weights and memristor conductances, dump the netlist",
        "apply one input pattern and report the retrieval",
        "memristance-mismatch sweep of the synaptic circuits",
        "per-parameter mismatch sweep of the oscillatory neurons",
        "frequency sensitivities and sensitivity surfaces",
        "design-space exploration over VO2 parameters",
        "differential vs single-ended tolerance comparison",
    };

    CommonArgs args[std::size(verbs)];
    for (std::size_t i = 0; i < std::size(verbs); ++i) {
        add_common(app.add_subcommand(verbs[i], descriptions[i]), args[i]);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        for (std::size_t i = 0; i < std::size(verbs); ++i) {
            if (app.get_subcommand(verbs[i])->parsed()) return dispatch(verbs[i], args[i]);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
