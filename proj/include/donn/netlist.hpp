#pragma once

// Circuit graphs for the two network architectures:
//
//  * Differential: N neurons, each a pair of branches (p, n). Every branch is
//    a supply switch + series resistor into the output node, a VO2 device and
//    a parallel capacitor to ground; a coupling capacitor ties the p/n nodes
//    of each neuron. Every unordered neuron pair carries a four-memristor
//    bridge: the d arms join like branches (p-p, n-n), the c arms join unlike
//    branches (p-n, n-p).
//
//  * SingleEnded: N single-branch neurons; every pair is coupled by a
//    memristor in parallel with a capacitor.
//
// Construction is deterministic: branches are ordered neuron-ascending with p
// before n, pairs in lexicographic (i < j) order, bridge arms in the fixed
// order (d:pp, d:nn, c:pn, c:np). Mismatch sampling relies on this ordering.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "donn/device.hpp"

#include <nlohmann/json_fwd.hpp>

namespace donn {

struct NeuronParams {
    double r_series = 6e3;        // R_S [ohm]
    double c_parallel = 109e-12;  // C [F]
    double c_coupling = 10.9e-12; // C_c [F]
    double v_dd = 2.5;            // supply [V]
    Vo2Params vo2;

    void validate() const;
};

/// Bridge arm conductances; the implemented weight sign is sign(g_d - g_c).
struct BridgeConductances {
    double g_d = 0.0;  // between like branches [S]
    double g_c = 0.0;  // between unlike branches [S]
};

/// Single-ended synapse: memristor in parallel with a fixed capacitor.
struct SeSynapse {
    double resistance = 0.0;   // [ohm]
    double capacitance = 0.0;  // [F], zero allowed (purely resistive coupling)
};

enum class Topology : std::uint8_t { Differential, SingleEnded };

enum class BridgeArm : std::uint8_t { DPositive = 0, DNegative = 1, CPosNeg = 2, CNegPos = 3 };

struct Branch {
    double r_series;
    double c_parallel;
    double v_dd;
    Vo2Params vo2;
};

/// One memristor: a bridge arm (Differential) or a pair synapse (SingleEnded).
struct Memristor {
    int node_a;
    int node_b;
    double resistance;
    int pair_i;  // neuron indices, i < j
    int pair_j;
    BridgeArm arm;  // meaningful for Differential only
};

/// Synapse capacitor between two nodes (SingleEnded topology).
struct SynapseCapacitor {
    int node_a;
    int node_b;
    double capacitance;
    int pair_i;
    int pair_j;
};

struct Netlist {
    Topology topology = Topology::Differential;
    int n_neurons = 0;
    std::vector<Branch> branches;            // node index == branch index
    std::vector<double> coupling_caps;       // per neuron (Differential), else empty
    std::vector<Memristor> memristors;       // fixed construction order
    std::vector<SynapseCapacitor> synapse_caps;  // SingleEnded only

    int n_nodes() const { return static_cast<int>(branches.size()); }

    /// Node index of neuron `i`, branch 0 = p, 1 = n (Differential) or the
    /// single branch (SingleEnded).
    int node_index(int neuron, int branch = 0) const;

    /// "v3p" / "v3n" (Differential) or "v3" (SingleEnded).
    std::string node_name(int node) const;
};

/// Fully connected DONN. `bridges` holds one entry per unordered pair in
/// lexicographic order: (0,1), (0,2), ..., (N-2,N-1).
Netlist build_donn(int n, std::span<const BridgeConductances> bridges, const NeuronParams& nominal);

/// Single-ended ONN with per-pair memristor||capacitor synapses, same pair order.
Netlist build_single_ended(int n, std::span<const SeSynapse> synapses, const NeuronParams& nominal);

/// Copy of `netlist` with one component parameter replaced. Component ids:
///   rs:<branch>  c:<branch>  vo2:<branch>  cc:<neuron>  mem:<i>:<j>:<arm>  syn:<i>:<j>
/// with <branch> like "0p"/"0n" or "0", <arm> one of dpp, dnn, cpn, cnp.
/// Parameters: "resistance"/"capacitance" for passives, V_H/V_L/R_H/R_L/tau for vo2.
Netlist override_component(const Netlist& netlist, const std::string& component_id,
                           const std::string& parameter, double value);

nlohmann::json netlist_to_json(const Netlist& netlist);
void dump_netlist_json(const Netlist& netlist, const std::string& path);

}  // namespace donn
