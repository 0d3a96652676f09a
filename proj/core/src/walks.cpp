#include "tgemb/walks.hpp"

#include <algorithm>
#include <stdexcept>

namespace tgemb {

double transition_weight(int d_ux, double p, double q, double edge_weight) {
    switch (d_ux) {
        case 0: return edge_weight / p;
        case 1: return edge_weight;
        case 2: return edge_weight / q;
        default: throw std::logic_error("transition_weight: distance must be 0, 1 or 2");
    }
}

BiasedWalkSampler::BiasedWalkSampler(const StaticGraph& s, double p, double q)
    : graph_(&s), p_(p), q_(q) {
    if (!(p > 0.0) || !(q > 0.0))
        throw std::invalid_argument("walk bias parameters must be positive");
    const std::uint32_t n = s.num_nodes;
    offsets_.assign(n + 1, 0);
    for (std::uint32_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + s.adj[v].size();
    heads_.resize(offsets_[n]);
    weights_.resize(offsets_[n]);
    for (std::uint32_t v = 0; v < n; ++v) {
        std::size_t a = offsets_[v];
        for (const auto& [x, w] : s.adj[v]) {
            heads_[a] = x;
            weights_[a] = w;
            ++a;
        }
    }

    first_.resize(n);
    for (std::uint32_t v = 0; v < n; ++v) {
        if (offsets_[v + 1] == offsets_[v]) continue;
        std::vector<double> w(weights_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
                              weights_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
        first_[v].build(w);
    }

    // One table per arc (prev -> cur) over cur's outgoing arcs: O(sum of
    // arc-endpoint degrees) memory buys O(1) sampling per walk step.
    second_.resize(heads_.size());
    for (std::uint32_t prev = 0; prev < n; ++prev)
        for (std::size_t a = offsets_[prev]; a < offsets_[prev + 1]; ++a) {
            std::uint32_t cur = heads_[a];
            if (offsets_[cur + 1] == offsets_[cur]) continue;
            second_[a].build(arc_weights(prev, cur));
        }
}

std::vector<double> BiasedWalkSampler::arc_weights(std::uint32_t prev, std::uint32_t cur) const {
    std::vector<double> w;
    w.reserve(offsets_[cur + 1] - offsets_[cur]);
    for (std::size_t a = offsets_[cur]; a < offsets_[cur + 1]; ++a) {
        std::uint32_t x = heads_[a];
        int d_ux = (x == prev) ? 0 : (graph_->has_neighbor(prev, x) ? 1 : 2);
        w.push_back(transition_weight(d_ux, p_, q_, weights_[a]));
    }
    return w;
}

std::size_t BiasedWalkSampler::first_arc(std::uint32_t v, Rng& rng) const {
    return offsets_[v] + first_[v].sample(rng);
}

std::size_t BiasedWalkSampler::next_arc(std::size_t arc, Rng& rng) const {
    std::uint32_t cur = heads_[arc];
    return offsets_[cur] + second_[arc].sample(rng);
}

std::vector<std::pair<std::uint32_t, double>> BiasedWalkSampler::step_distribution(
    std::size_t arc) const {
    std::uint32_t cur = heads_[arc];
    std::uint32_t prev = 0;
    // arcs are grouped by tail, so locate the tail by binary search
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), arc);
    prev = static_cast<std::uint32_t>(it - offsets_.begin() - 1);
    auto w = arc_weights(prev, cur);
    double total = 0.0;
    for (double x : w) total += x;
    std::vector<std::pair<std::uint32_t, double>> dist;
    dist.reserve(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        dist.emplace_back(heads_[offsets_[cur] + i], w[i] / total);
    return dist;
}

std::size_t BiasedWalkSampler::find_arc(std::uint32_t tail, std::uint32_t head) const {
    auto begin = heads_.begin() + static_cast<std::ptrdiff_t>(offsets_[tail]);
    auto end = heads_.begin() + static_cast<std::ptrdiff_t>(offsets_[tail + 1]);
    auto it = std::lower_bound(begin, end, head);
    if (it == end || *it != head) throw std::invalid_argument("find_arc: no such edge");
    return static_cast<std::size_t>(it - heads_.begin());
}

WalkCorpus generate_walks(const StaticGraph& s, const WalkConfig& cfg) {
    if (cfg.r < 1 || cfg.l < 2) throw std::invalid_argument("walk config: need r >= 1, l >= 2");
    BiasedWalkSampler sampler(s, cfg.p, cfg.q);

    std::vector<std::pair<std::uint32_t, std::uint32_t>> starts;  // (node, repetition)
    for (std::uint32_t v = 0; v < s.num_nodes; ++v)
        if (s.present[v])
            for (std::uint32_t rep = 0; rep < cfg.r; ++rep) starts.emplace_back(v, rep);
    Rng order_rng(mix_seed(cfg.seed, 0x57414c4bULL));
    order_rng.shuffle(starts);

    WalkCorpus corpus;
    corpus.walks.reserve(starts.size());
    for (auto [v, rep] : starts) {
        // per-walk stream: the corpus does not depend on scheduling order
        Rng rng(mix_seed(cfg.seed, v, rep));
        std::vector<std::uint32_t> walk;
        walk.reserve(cfg.l);
        walk.push_back(v);
        if (sampler.has_out(v)) {
            std::size_t arc = sampler.first_arc(v, rng);
            walk.push_back(sampler.head(arc));
            while (walk.size() < cfg.l && sampler.has_out(sampler.head(arc))) {
                arc = sampler.next_arc(arc, rng);
                walk.push_back(sampler.head(arc));
            }
        }
        corpus.walks.push_back(std::move(walk));
    }
    return corpus;
}

}  // namespace tgemb
