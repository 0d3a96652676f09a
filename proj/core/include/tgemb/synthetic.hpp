#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tgemb/temporal_graph.hpp"

namespace tgemb {

enum class DegreeTarget : std::uint8_t { linear = 0, logarithmic = 1, sinusoidal = 2, exponential = 3 };

DegreeTarget degree_target_from_string(const std::string& name);
const char* degree_target_name(DegreeTarget t);

struct SynthConfig {
    std::uint32_t n = 100;   // nodes
    std::uint64_t m = 2000;  // total edges
    std::uint32_t steps = 20;
    DegreeTarget target = DegreeTarget::linear;
    std::uint64_t seed = 1;
};

// Target degrees over node ranks i = 1..n: linear a*i, logarithmic a*ln(1+i),
// sinusoidal a*(1+sin(2*pi*i/n))/2 + 1, exponential a*c^i with c fixed so the
// max/min ratio is 100. The scale a is set so the profile sums to 2m, then
// entries are rounded and the sum repaired by +-1 on the largest entries.
// Every entry stays within [1, n-1].
std::vector<std::uint32_t> target_degree_profile(const SynthConfig& cfg);

// Undirected growth process: m/steps edges per step (remainder on the last),
// each sampled without replacement among absent pairs with probability
// proportional to the product of the endpoints' remaining degree deficits
// (floored at 0.1). Timestamps are 1..steps. l1_distance (optional) receives
// the L1 gap between realized and target degrees.
TemporalGraph generate_temporal_graph(const SynthConfig& cfg, double* l1_distance = nullptr);

}  // namespace tgemb
