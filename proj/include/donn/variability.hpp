#pragma once

// Device-to-device mismatch: independent normal draws per component of one
// parameter class, assigned in the netlist's fixed construction order so a
// (seed, spec, netlist) triple fully determines the instance. Non-positive
// draws of physical parameters are rejected and redrawn.

#include <cstdint>
#include <string_view>
#include <vector>

#include "donn/netlist.hpp"
#include "donn/rng.hpp"
#include "donn/transient.hpp"

namespace donn {

enum class ParamClass : std::uint8_t {
    Memristance,
    VHigh,
    VLow,
    RHigh,
    RLow,
    RSeries,
    CParallel,
    CCoupling,
};

const char* param_class_name(ParamClass c);
ParamClass param_class_from_name(std::string_view name);  // throws on unknown name

struct MismatchSpec {
    ParamClass target = ParamClass::Memristance;
    double rsd = 0.0;           // relative standard deviation (sigma/mu)
    std::uint64_t seed = 0;     // recorded with results; streams are derived externally
};

/// `count` draws from Normal(mean, (rsd*mean)^2); non-positive draws are
/// rejected. Throws after 1000 consecutive rejections (absurd rsd).
std::vector<double> sample_normal(double mean, double rsd, int count, Rng& rng,
                                  int* rejections = nullptr);

struct SampledInstance {
    Netlist netlist;
    ParamClass target = ParamClass::Memristance;
    double rsd = 0.0;
    std::vector<double> values;  // one per component of the target class
    int rejections = 0;
};

/// Every component of the target class gets an independent draw around its own
/// nominal value; all other classes stay nominal.
SampledInstance apply_mismatch(const Netlist& base, const MismatchSpec& spec, Rng& rng);

struct BranchFrequencies {
    std::vector<double> hz;                 // per branch; 0 where non-oscillating
    std::vector<std::uint8_t> oscillating;  // per branch
    double mean = 0.0;
    double rsd = 0.0;  // sample std / mean over oscillating branches
    int n_non_oscillating = 0;
};

/// Natural frequency of every branch in isolation, from the analytic period
/// with that branch's sampled components and C* = C + C_c of its neuron
/// (C* = C for single-ended branches).
BranchFrequencies branch_frequencies(const Netlist& netlist);

/// Fixed-width histogram (bin width mean(nominal)*rsd/4) of sampled values,
/// written as `value,count` rows.
void write_histogram_csv(const std::string& path, const std::vector<double>& values,
                         double nominal_mean, double rsd);

}  // namespace donn
