#include "donn/netlist.hpp"

#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace donn {

void NeuronParams::validate() const {
    auto fail = [](const char* msg) { throw std::invalid_argument(std::string("NeuronParams: ") + msg); };
    if (!(r_series > 0.0)) fail("r_series must be positive");
    if (!(c_parallel > 0.0)) fail("c_parallel must be positive");
    if (!(c_coupling > 0.0)) fail("c_coupling must be positive");
    if (!(v_dd > 0.0)) fail("v_dd must be positive");
    vo2.validate();
}

int Netlist::node_index(int neuron, int branch) const {
    if (neuron < 0 || neuron >= n_neurons) throw std::out_of_range("node_index: bad neuron");
    if (topology == Topology::Differential) {
        if (branch < 0 || branch > 1) throw std::out_of_range("node_index: bad branch");
        return 2 * neuron + branch;
    }
    if (branch != 0) throw std::out_of_range("node_index: single-ended has one branch");
    return neuron;
}

std::string Netlist::node_name(int node) const {
    if (node < 0 || node >= n_nodes()) throw std::out_of_range("node_name: bad node");
    if (topology == Topology::Differential) {
        return "v" + std::to_string(node / 2) + (node % 2 == 0 ? "p" : "n");
    }
    return "v" + std::to_string(node);
}

Netlist build_donn(int n, std::span<const BridgeConductances> bridges, const NeuronParams& nominal) {
    if (n < 2) throw std::invalid_argument("build_donn: need at least 2 neurons");
    nominal.validate();
    const std::size_t n_pairs = static_cast<std::size_t>(n) * (n - 1) / 2;
    if (bridges.size() != n_pairs) {
        throw std::invalid_argument("build_donn: expected " + std::to_string(n_pairs) +
                                    " bridge entries, got " + std::to_string(bridges.size()));
    }

    Netlist net;
    net.topology = Topology::Differential;
    net.n_neurons = n;
    net.branches.assign(static_cast<std::size_t>(2 * n),
                        Branch{nominal.r_series, nominal.c_parallel, nominal.v_dd, nominal.vo2});
    net.coupling_caps.assign(static_cast<std::size_t>(n), nominal.c_coupling);

    net.memristors.reserve(4 * n_pairs);
    std::size_t k = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j, ++k) {
            const BridgeConductances& b = bridges[k];
            if (!(b.g_d > 0.0) || !(b.g_c > 0.0)) {
                throw std::invalid_argument("build_donn: bridge conductances must be positive");
            }
            const int pi = net.node_index(i, 0), ni = net.node_index(i, 1);
            const int pj = net.node_index(j, 0), nj = net.node_index(j, 1);
            net.memristors.push_back({pi, pj, 1.0 / b.g_d, i, j, BridgeArm::DPositive});
            net.memristors.push_back({ni, nj, 1.0 / b.g_d, i, j, BridgeArm::DNegative});
            net.memristors.push_back({pi, nj, 1.0 / b.g_c, i, j, BridgeArm::CPosNeg});
            net.memristors.push_back({ni, pj, 1.0 / b.g_c, i, j, BridgeArm::CNegPos});
        }
    }
    return net;
}

Netlist build_single_ended(int n, std::span<const SeSynapse> synapses, const NeuronParams& nominal) {
    if (n < 2) throw std::invalid_argument("build_single_ended: need at least 2 neurons");
    nominal.validate();
    const std::size_t n_pairs = static_cast<std::size_t>(n) * (n - 1) / 2;
    if (synapses.size() != n_pairs) {
        throw std::invalid_argument("build_single_ended: expected " + std::to_string(n_pairs) +
                                    " synapse entries, got " + std::to_string(synapses.size()));
    }

    Netlist net;
    net.topology = Topology::SingleEnded;
    net.n_neurons = n;
    net.branches.assign(static_cast<std::size_t>(n),
                        Branch{nominal.r_series, nominal.c_parallel, nominal.v_dd, nominal.vo2});

    net.memristors.reserve(n_pairs);
    net.synapse_caps.reserve(n_pairs);
    std::size_t k = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j, ++k) {
            const SeSynapse& s = synapses[k];
            if (!(s.resistance > 0.0)) {
                throw std::invalid_argument("build_single_ended: synapse resistance must be positive");
            }
            if (s.capacitance < 0.0) {
                throw std::invalid_argument("build_single_ended: synapse capacitance must be >= 0");
            }
            net.memristors.push_back({i, j, s.resistance, i, j, BridgeArm::DPositive});
            net.synapse_caps.push_back({i, j, s.capacitance, i, j});
        }
    }
    return net;
}

namespace {

const char* arm_tag(BridgeArm arm) {
    switch (arm) {
        case BridgeArm::DPositive: return "dpp";
        case BridgeArm::DNegative: return "dnn";
        case BridgeArm::CPosNeg: return "cpn";
        case BridgeArm::CNegPos: return "cnp";
    }
    return "?";
}

std::string branch_tag(const Netlist& net, int node) {
    if (net.topology == Topology::Differential) {
        return std::to_string(node / 2) + (node % 2 == 0 ? "p" : "n");
    }
    return std::to_string(node);
}

int parse_branch_tag(const Netlist& net, const std::string& tag) {
    if (net.topology == Topology::Differential) {
        if (tag.size() < 2) throw std::invalid_argument("bad branch tag: " + tag);
        const char side = tag.back();
        if (side != 'p' && side != 'n') throw std::invalid_argument("bad branch tag: " + tag);
        const int neuron = std::stoi(tag.substr(0, tag.size() - 1));
        return net.node_index(neuron, side == 'p' ? 0 : 1);
    }
    return net.node_index(std::stoi(tag), 0);
}

void require_positive(double value, const std::string& id) {
    if (!(value > 0.0)) {
        throw std::invalid_argument("override_component: non-positive value for " + id);
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            parts.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return parts;
}

}  // namespace

Netlist override_component(const Netlist& netlist, const std::string& component_id,
                           const std::string& parameter, double value) {
    Netlist net = netlist;
    const auto parts = split(component_id, ':');
    const std::string& kind = parts.front();

    if (kind == "rs" || kind == "c" || kind == "vo2") {
        if (parts.size() != 2) throw std::invalid_argument("bad component id: " + component_id);
        const int node = parse_branch_tag(net, parts[1]);
        Branch& br = net.branches[static_cast<std::size_t>(node)];
        if (kind == "rs") {
            if (parameter != "resistance") throw std::invalid_argument("rs takes parameter 'resistance'");
            require_positive(value, component_id);
            br.r_series = value;
        } else if (kind == "c") {
            if (parameter != "capacitance") throw std::invalid_argument("c takes parameter 'capacitance'");
            require_positive(value, component_id);
            br.c_parallel = value;
        } else {
            require_positive(value, component_id);
            if (parameter == "V_H") br.vo2.v_high = value;
            else if (parameter == "V_L") br.vo2.v_low = value;
            else if (parameter == "R_H") br.vo2.r_high = value;
            else if (parameter == "R_L") br.vo2.r_low = value;
            else if (parameter == "tau") br.vo2.tau = value;
            else throw std::invalid_argument("unknown vo2 parameter: " + parameter);
        }
        return net;
    }

    if (kind == "cc") {
        if (parts.size() != 2 || net.topology != Topology::Differential) {
            throw std::invalid_argument("bad component id: " + component_id);
        }
        const int neuron = std::stoi(parts[1]);
        if (neuron < 0 || neuron >= net.n_neurons) throw std::invalid_argument("unknown id: " + component_id);
        if (parameter != "capacitance") throw std::invalid_argument("cc takes parameter 'capacitance'");
        require_positive(value, component_id);
        net.coupling_caps[static_cast<std::size_t>(neuron)] = value;
        return net;
    }

    if (kind == "mem" || kind == "syn") {
        const bool is_syn = kind == "syn";
        if ((is_syn && parts.size() != 3) || (!is_syn && parts.size() != 4)) {
            throw std::invalid_argument("bad component id: " + component_id);
        }
        const int i = std::stoi(parts[1]);
        const int j = std::stoi(parts[2]);
        if (is_syn) {
            if (net.topology != Topology::SingleEnded) throw std::invalid_argument("syn id on differential netlist");
            if (parameter == "resistance") {
                require_positive(value, component_id);
                for (auto& m : net.memristors) {
                    if (m.pair_i == i && m.pair_j == j) { m.resistance = value; return net; }
                }
            } else if (parameter == "capacitance") {
                if (value < 0.0) throw std::invalid_argument("override_component: negative capacitance");
                for (auto& sc : net.synapse_caps) {
                    if (sc.pair_i == i && sc.pair_j == j) { sc.capacitance = value; return net; }
                }
            } else {
                throw std::invalid_argument("syn takes 'resistance' or 'capacitance'");
            }
            throw std::invalid_argument("unknown id: " + component_id);
        }
        if (net.topology != Topology::Differential) throw std::invalid_argument("mem id on single-ended netlist");
        if (parameter != "resistance") throw std::invalid_argument("mem takes parameter 'resistance'");
        require_positive(value, component_id);
        for (auto& m : net.memristors) {
            if (m.pair_i == i && m.pair_j == j && arm_tag(m.arm) == parts[3]) {
                m.resistance = value;
                return net;
            }
        }
        throw std::invalid_argument("unknown id: " + component_id);
    }

    throw std::invalid_argument("unknown component id: " + component_id);
}

nlohmann::json netlist_to_json(const Netlist& net) {
    nlohmann::json j;
    j["topology"] = net.topology == Topology::Differential ? "differential" : "single-ended";
    j["n_neurons"] = net.n_neurons;

    nlohmann::json components = nlohmann::json::array();
    for (int node = 0; node < net.n_nodes(); ++node) {
        const Branch& br = net.branches[static_cast<std::size_t>(node)];
        const std::string tag = branch_tag(net, node);
        components.push_back({{"id", "rs:" + tag},
                              {"kind", "resistor"},
                              {"nodes", {"vdd:" + tag, net.node_name(node)}},
                              {"resistance", br.r_series}});
        components.push_back({{"id", "c:" + tag},
                              {"kind", "capacitor"},
                              {"nodes", {net.node_name(node), "gnd"}},
                              {"capacitance", br.c_parallel}});
        components.push_back({{"id", "vo2:" + tag},
                              {"kind", "vo2"},
                              {"nodes", {net.node_name(node), "gnd"}},
                              {"V_H", br.vo2.v_high},
                              {"V_L", br.vo2.v_low},
                              {"R_H", br.vo2.r_high},
                              {"R_L", br.vo2.r_low},
                              {"tau", br.vo2.tau}});
        components.push_back({{"id", "supply:" + tag},
                              {"kind", "switched-supply"},
                              {"nodes", {"vdd:" + tag, "gnd"}},
                              {"v_dd", br.v_dd}});
    }
    for (std::size_t n = 0; n < net.coupling_caps.size(); ++n) {
        components.push_back({{"id", "cc:" + std::to_string(n)},
                              {"kind", "capacitor"},
                              {"nodes",
                               {net.node_name(net.node_index(static_cast<int>(n), 0)),
                                net.node_name(net.node_index(static_cast<int>(n), 1))}},
                              {"capacitance", net.coupling_caps[n]}});
    }
    for (const auto& m : net.memristors) {
        std::string id = (net.topology == Topology::Differential)
                             ? "mem:" + std::to_string(m.pair_i) + ":" + std::to_string(m.pair_j) + ":" + arm_tag(m.arm)
                             : "syn:" + std::to_string(m.pair_i) + ":" + std::to_string(m.pair_j);
        components.push_back({{"id", std::move(id)},
                              {"kind", "memristor"},
                              {"nodes", {net.node_name(m.node_a), net.node_name(m.node_b)}},
                              {"resistance", m.resistance}});
    }
    for (const auto& sc : net.synapse_caps) {
        components.push_back({{"id", "synC:" + std::to_string(sc.pair_i) + ":" + std::to_string(sc.pair_j)},
                              {"kind", "capacitor"},
                              {"nodes", {net.node_name(sc.node_a), net.node_name(sc.node_b)}},
                              {"capacitance", sc.capacitance}});
    }
    j["components"] = std::move(components);
    return j;
}

void dump_netlist_json(const Netlist& netlist, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for write: " + path);
    out << netlist_to_json(netlist).dump(2) << '\n';
}

}  // namespace donn
