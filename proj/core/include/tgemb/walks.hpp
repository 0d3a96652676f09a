#pragma once

#include <cstdint>
#include <vector>

#include "tgemb/rng.hpp"
#include "tgemb/temporal_graph.hpp"

namespace tgemb {

struct WalkConfig {
    double p = 1.0;         // return parameter
    double q = 1.0;         // in-out parameter
    std::uint32_t r = 10;   // walks per node
    std::uint32_t l = 80;   // walk length
    std::uint64_t seed = 1;
};

struct WalkCorpus {
    std::vector<std::vector<std::uint32_t>> walks;
};

// Second-order bias: edge_weight scaled by 1/p, 1 or 1/q depending on the
// distance between the walk's previous node and the candidate.
double transition_weight(int d_ux, double p, double q, double edge_weight);

// Precomputed alias tables for first steps (per node, proportional to edge
// weight) and second-order steps (per directed arc). Walks follow edge
// direction on directed graphs; undirected edges are walkable both ways
// because the snapshot stores both arcs.
class BiasedWalkSampler {
public:
    // Keeps a pointer to the graph; the caller owns it for the sampler's
    // lifetime, so temporaries are rejected.
    BiasedWalkSampler(const StaticGraph& s, double p, double q);
    BiasedWalkSampler(StaticGraph&&, double, double) = delete;

    bool has_out(std::uint32_t v) const { return offsets_[v + 1] > offsets_[v]; }
    std::uint32_t out_degree(std::uint32_t v) const {
        return static_cast<std::uint32_t>(offsets_[v + 1] - offsets_[v]);
    }

    // Both return the arc index taken, from which the head node is read.
    std::size_t first_arc(std::uint32_t v, Rng& rng) const;
    std::size_t next_arc(std::size_t arc, Rng& rng) const;
    std::uint32_t head(std::size_t arc) const { return heads_[arc]; }

    // Exact next-step distribution of the (prev -> cur) arc, for tests.
    std::vector<std::pair<std::uint32_t, double>> step_distribution(std::size_t arc) const;
    std::size_t find_arc(std::uint32_t tail, std::uint32_t head) const;

private:
    std::vector<double> arc_weights(std::uint32_t prev, std::uint32_t cur) const;

    const StaticGraph* graph_;
    double p_, q_;
    std::vector<std::size_t> offsets_;  // node -> first outgoing arc
    std::vector<std::uint32_t> heads_;  // arc -> head node
    std::vector<double> weights_;       // arc -> edge weight
    std::vector<AliasTable> first_;     // node -> first-step table over its arcs
    std::vector<AliasTable> second_;    // arc -> table over the head's arcs
};

// r walks from every present node, start order shuffled by seed, each walk on
// an independent RNG stream so the corpus is independent of scheduling.
// A node without out-neighbors truncates its walk.
WalkCorpus generate_walks(const StaticGraph& s, const WalkConfig& cfg);

}  // namespace tgemb
