#include "tgemb/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "tgemb/rng.hpp"

namespace tgemb {

DegreeTarget degree_target_from_string(const std::string& name) {
    if (name == "linear") return DegreeTarget::linear;
    if (name == "logarithmic" || name == "log") return DegreeTarget::logarithmic;
    if (name == "sinusoidal" || name == "sin") return DegreeTarget::sinusoidal;
    if (name == "exponential" || name == "exp") return DegreeTarget::exponential;
    throw std::invalid_argument("unknown degree target '" + name + "'");
}

const char* degree_target_name(DegreeTarget t) {
    switch (t) {
        case DegreeTarget::linear: return "linear";
        case DegreeTarget::logarithmic: return "logarithmic";
        case DegreeTarget::sinusoidal: return "sinusoidal";
        case DegreeTarget::exponential: return "exponential";
    }
    return "?";
}

std::vector<std::uint32_t> target_degree_profile(const SynthConfig& cfg) {
    const std::uint64_t n = cfg.n;
    if (n < 2) throw std::invalid_argument("degree profile: need n >= 2");
    if (cfg.m > n * (n - 1) / 2)
        throw std::invalid_argument("degree profile: m exceeds the simple-graph maximum");
    const std::uint64_t degree_sum = 2 * cfg.m;
    if (degree_sum < n)
        throw std::invalid_argument("degree profile: 2m < n leaves no room for minimum degree 1");

    // shape values over ranks i = 1..n plus an additive offset (sinusoidal
    // keeps a +1 floor outside the scale)
    std::vector<double> base(n), offset(n, 0.0);
    switch (cfg.target) {
        case DegreeTarget::linear:
            for (std::uint64_t i = 0; i < n; ++i) base[i] = static_cast<double>(i + 1);
            break;
        case DegreeTarget::logarithmic:
            for (std::uint64_t i = 0; i < n; ++i) base[i] = std::log(2.0 + static_cast<double>(i));
            break;
        case DegreeTarget::sinusoidal:
            for (std::uint64_t i = 0; i < n; ++i) {
                base[i] = (1.0 + std::sin(2.0 * M_PI * static_cast<double>(i + 1) /
                                          static_cast<double>(n))) /
                          2.0;
                offset[i] = 1.0;
            }
            break;
        case DegreeTarget::exponential: {
            // max/min ratio pinned at 100: c^(n-1) = 100
            double c = std::pow(100.0, 1.0 / static_cast<double>(n - 1));
            for (std::uint64_t i = 0; i < n; ++i)
                base[i] = std::pow(c, static_cast<double>(i + 1));
            break;
        }
    }

    double base_sum = 0.0, offset_sum = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        base_sum += base[i];
        offset_sum += offset[i];
    }
    double scale = (static_cast<double>(degree_sum) - offset_sum) / base_sum;
    if (scale < 0.0)
        throw std::invalid_argument("degree profile: target sum below the shape's floor");

    const auto cap = static_cast<std::uint32_t>(n - 1);
    std::vector<std::uint32_t> profile(n);
    std::uint64_t sum = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        auto v = static_cast<std::int64_t>(std::llround(scale * base[i] + offset[i]));
        v = std::clamp<std::int64_t>(v, 1, cap);
        profile[i] = static_cast<std::uint32_t>(v);
        sum += profile[i];
    }

    // repair to an exact sum of 2m, +-1 on the largest adjustable entries
    while (sum != degree_sum) {
        bool need_up = sum < degree_sum;
        std::size_t pick = n;
        for (std::size_t i = 0; i < n; ++i) {
            bool ok = need_up ? profile[i] < cap : profile[i] > 1;
            if (!ok) continue;
            if (pick == n || profile[i] > profile[pick]) pick = i;
        }
        if (pick == n)
            throw std::invalid_argument("degree profile: sum repair impossible within [1, n-1]");
        profile[pick] += need_up ? 1 : -1;
        sum += need_up ? 1 : -1;
    }
    return profile;
}

TemporalGraph generate_temporal_graph(const SynthConfig& cfg, double* l1_distance) {
    if (cfg.steps < 1) throw std::invalid_argument("synthetic graph: need at least one step");
    if (cfg.m < cfg.steps)
        throw std::invalid_argument("synthetic graph: fewer edges than steps leaves empty steps");
    std::vector<std::uint32_t> target = target_degree_profile(cfg);
    const std::uint32_t n = cfg.n;

    TemporalGraph g;
    g.directed = false;
    g.weighted = false;
    for (std::uint32_t i = 0; i < n; ++i) g.intern(std::to_string(i));

    Rng rng(mix_seed(cfg.seed, 0x53594e5448ULL));
    std::vector<std::uint32_t> cur(n, 0);
    std::vector<double> weight(n);
    double total = 0.0;
    for (std::uint32_t i = 0; i < n; ++i) {
        weight[i] = static_cast<double>(target[i]);
        total += weight[i];
    }
    auto bump_degree = [&](std::uint32_t v) {
        ++cur[v];
        double w = std::max(static_cast<double>(target[v]) - static_cast<double>(cur[v]), 0.1);
        total += w - weight[v];
        weight[v] = w;
    };
    std::unordered_set<std::uint64_t> placed;
    auto key = [](std::uint32_t a, std::uint32_t b) {
        if (a > b) std::swap(a, b);
        return (static_cast<std::uint64_t>(a) << 32) | b;
    };

    auto draw_node = [&]() {
        double r = rng.next_double() * total;
        double acc = 0.0;
        for (std::uint32_t i = 0; i < n; ++i) {
            acc += weight[i];
            if (r < acc) return i;
        }
        return n - 1;
    };

    const std::uint64_t per_step = cfg.m / cfg.steps;
    for (std::uint32_t step = 1; step <= cfg.steps; ++step) {
        std::uint64_t quota = per_step + (step == cfg.steps ? cfg.m % cfg.steps : 0);
        for (std::uint64_t e = 0; e < quota; ++e) {
            std::uint32_t u = 0, v = 0;
            bool found = false;
            for (int attempt = 0; attempt < 200; ++attempt) {
                u = draw_node();
                v = draw_node();
                if (u == v || placed.count(key(u, v))) continue;
                found = true;
                break;
            }
            if (!found) {
                // dense region: enumerate the remaining pairs exactly
                double pair_total = 0.0;
                for (std::uint32_t a = 0; a < n; ++a)
                    for (std::uint32_t b = a + 1; b < n; ++b)
                        if (!placed.count(key(a, b))) pair_total += weight[a] * weight[b];
                if (pair_total <= 0.0)
                    throw std::runtime_error("synthetic graph: saturated at step " +
                                             std::to_string(step));
                double r = rng.next_double() * pair_total;
                double acc = 0.0;
                for (std::uint32_t a = 0; a < n && !found; ++a)
                    for (std::uint32_t b = a + 1; b < n; ++b) {
                        if (placed.count(key(a, b))) continue;
                        acc += weight[a] * weight[b];
                        if (r < acc) {
                            u = a;
                            v = b;
                            found = true;
                            break;
                        }
                    }
                if (!found)
                    throw std::runtime_error("synthetic graph: saturated at step " +
                                             std::to_string(step));
            }
            placed.insert(key(u, v));
            bump_degree(u);
            bump_degree(v);
            if (u > v) std::swap(u, v);
            g.add_edge(g.node_ids[u], g.node_ids[v], static_cast<std::int64_t>(step), 1.0);
        }
    }

    if (l1_distance) {
        double l1 = 0.0;
        for (std::uint32_t i = 0; i < n; ++i)
            l1 += std::abs(static_cast<double>(cur[i]) - static_cast<double>(target[i]));
        *l1_distance = l1;
    }
    return g;
}

}  // namespace tgemb
