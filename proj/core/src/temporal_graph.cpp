#include "tgemb/temporal_graph.hpp"

#include <algorithm>
#include <cerrno>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "tgemb/rng.hpp"

namespace tgemb {

namespace {

using Json = nlohmann::json;

std::uint64_t pair_key(std::uint32_t u, std::uint32_t v) {
    return (static_cast<std::uint64_t>(u) << 32) | v;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

bool parse_int64(const std::string& s, std::int64_t& out) {
    if (s.empty()) return false;
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(s.c_str(), &end, 10);
    if (errno != 0 || end != s.c_str() + s.size()) return false;
    out = v;
    return true;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    errno = 0;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (errno != 0 || end != s.c_str() + s.size() || !std::isfinite(v)) return false;
    out = v;
    return true;
}

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

// Indices of edges ordered by (timestamp, input position).
std::vector<std::size_t> time_order(const TemporalGraph& g) {
    std::vector<std::size_t> order(g.edges.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return g.edges[a].timestamp < g.edges[b].timestamp;
    });
    return order;
}

StaticGraph materialize_snapshot(const TemporalGraph& g,
                                 const std::unordered_map<std::uint64_t, double>& acc) {
    StaticGraph s;
    s.directed = g.directed;
    s.num_nodes = g.node_count();
    s.adj.assign(s.num_nodes, {});
    s.present.assign(s.num_nodes, 0);
    s.num_edge_slots = acc.size();
    for (const auto& [key, w] : acc) {
        auto u = static_cast<std::uint32_t>(key >> 32);
        auto v = static_cast<std::uint32_t>(key & 0xffffffffULL);
        s.adj[u].emplace_back(v, w);
        if (!s.directed && u != v) s.adj[v].emplace_back(u, w);
        s.present[u] = 1;
        s.present[v] = 1;
    }
    for (auto& nbrs : s.adj) std::sort(nbrs.begin(), nbrs.end());
    return s;
}

}  // namespace

std::uint32_t TemporalGraph::intern(const std::string& id) {
    auto it = node_index.find(id);
    if (it != node_index.end()) return it->second;
    auto idx = static_cast<std::uint32_t>(node_ids.size());
    node_ids.push_back(id);
    node_index.emplace(id, idx);
    return idx;
}

void TemporalGraph::add_edge(const std::string& src, const std::string& dst, std::int64_t t,
                             double w) {
    std::uint32_t u = intern(src);
    std::uint32_t v = intern(dst);
    edges.push_back({u, v, t, weighted ? w : 1.0});
}

std::int64_t TemporalGraph::min_timestamp() const {
    if (edges.empty()) throw std::logic_error("min_timestamp: graph has no edges");
    std::int64_t m = edges.front().timestamp;
    for (const auto& e : edges) m = std::min(m, e.timestamp);
    return m;
}

std::int64_t TemporalGraph::max_timestamp() const {
    if (edges.empty()) throw std::logic_error("max_timestamp: graph has no edges");
    std::int64_t m = edges.front().timestamp;
    for (const auto& e : edges) m = std::max(m, e.timestamp);
    return m;
}

bool StaticGraph::has_neighbor(std::uint32_t u, std::uint32_t v) const {
    const auto& nbrs = adj[u];
    auto it = std::lower_bound(nbrs.begin(), nbrs.end(), std::make_pair(v, 0.0),
                               [](const auto& a, const auto& b) { return a.first < b.first; });
    return it != nbrs.end() && it->first == v;
}

std::uint32_t StaticGraph::present_count() const {
    std::uint32_t n = 0;
    for (char p : present) n += (p != 0);
    return n;
}

TemporalGraph ingest_edge_list(const std::string& path, bool directed, bool weighted) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open edge list: " + path);
    TemporalGraph g;
    g.directed = directed;
    g.weighted = weighted;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_tabs(line);
        if (fields.size() != 3 && fields.size() != 4)
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected 3 or 4 tab-separated fields, got " +
                                     std::to_string(fields.size()));
        if (fields[0].empty() || fields[1].empty())
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": empty node id");
        std::int64_t ts = 0;
        if (!parse_int64(fields[2], ts))
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": non-integer timestamp '" + fields[2] + "'");
        double w = 1.0;
        if (fields.size() == 4) {
            if (!parse_double(fields[3], w))
                throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                         ": non-numeric weight '" + fields[3] + "'");
            if (w <= 0.0)
                throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                         ": non-positive weight " + fields[3]);
        }
        g.add_edge(fields[0], fields[1], ts, w);
    }
    return g;
}

LabelSet load_labels(const std::string& path, const TemporalGraph& g) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open label file: " + path);
    LabelSet out;
    std::unordered_map<std::string, std::uint32_t> class_index;
    std::unordered_set<std::uint32_t> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_tabs(line);
        if (fields.size() != 2)
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected `node<TAB>label`");
        auto it = g.node_index.find(fields[0]);
        if (it == g.node_index.end())
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": unknown node '" +
                                     fields[0] + "'");
        if (!seen.insert(it->second).second)
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": duplicate label for node '" + fields[0] + "'");
        auto cit = class_index.find(fields[1]);
        std::uint32_t cls;
        if (cit == class_index.end()) {
            cls = static_cast<std::uint32_t>(out.class_names.size());
            class_index.emplace(fields[1], cls);
            out.class_names.push_back(fields[1]);
        } else {
            cls = cit->second;
        }
        out.items.emplace_back(it->second, cls);
    }
    return out;
}

TemporalGraph collapse_multi_edges(const TemporalGraph& g, std::int64_t granularity) {
    if (granularity <= 0) throw std::invalid_argument("collapse_multi_edges: granularity must be > 0");
    TemporalGraph out;
    out.directed = g.directed;
    out.node_ids = g.node_ids;
    out.node_index = g.node_index;
    if (g.edges.empty()) {
        out.weighted = g.weighted;
        return out;
    }
    const std::int64_t t0 = g.min_timestamp();

    struct Group {
        std::uint32_t src, dst;
        std::int64_t bucket_start;
        double weight;
    };
    std::vector<Group> groups;
    std::unordered_map<std::uint64_t, std::unordered_map<std::int64_t, std::size_t>> lookup;
    for (const auto& e : g.edges) {
        auto [cu, cv] = g.canonical_pair(e.src, e.dst);
        std::int64_t bucket = floor_div(e.timestamp - t0, granularity);
        auto& by_bucket = lookup[pair_key(cu, cv)];
        auto it = by_bucket.find(bucket);
        if (it == by_bucket.end()) {
            by_bucket.emplace(bucket, groups.size());
            groups.push_back({e.src, e.dst, t0 + bucket * granularity, e.weight});
        } else {
            groups[it->second].weight += e.weight;
        }
    }
    bool any_nonunit = false;
    for (const auto& grp : groups) {
        out.edges.push_back({grp.src, grp.dst, grp.bucket_start, grp.weight});
        if (grp.weight != 1.0) any_nonunit = true;
    }
    out.weighted = g.weighted || any_nonunit;
    return out;
}

SnapshotSeries build_snapshots(const TemporalGraph& g, std::size_t num_steps) {
    if (num_steps < 1) throw std::invalid_argument("build_snapshots: need at least one step");
    if (g.edges.empty()) throw std::invalid_argument("build_snapshots: graph has no edges");

    std::unordered_set<std::int64_t> distinct;
    for (const auto& e : g.edges) distinct.insert(e.timestamp);
    if (num_steps > distinct.size())
        throw std::invalid_argument("build_snapshots: " + std::to_string(num_steps) +
                                    " steps exceed the " + std::to_string(distinct.size()) +
                                    " distinct timestamps; choose T <= " +
                                    std::to_string(distinct.size()));

    const std::int64_t t_min = g.min_timestamp();
    const std::int64_t t_max = g.max_timestamp();
    const std::int64_t base = t_min - 1;
    const std::int64_t span = t_max - base;
    const auto steps = static_cast<std::int64_t>(num_steps);

    SnapshotSeries series;
    series.directed = g.directed;
    series.node_ids = g.node_ids;
    series.boundaries.reserve(num_steps);
    for (std::int64_t k = 1; k <= steps; ++k)
        series.boundaries.push_back(base + (k * span + steps / 2) / steps);
    series.boundaries.back() = t_max;

    auto order = time_order(g);
    std::unordered_map<std::uint64_t, double> acc;
    std::size_t pos = 0;
    for (std::size_t k = 0; k < num_steps; ++k) {
        const std::int64_t boundary = series.boundaries[k];
        while (pos < order.size() && g.edges[order[pos]].timestamp <= boundary) {
            const auto& e = g.edges[order[pos]];
            auto [cu, cv] = g.canonical_pair(e.src, e.dst);
            acc[pair_key(cu, cv)] += e.weight;
            ++pos;
        }
        series.snapshots.push_back(materialize_snapshot(g, acc));
    }
    return series;
}

namespace {

// Per-pair first-connection time and per-node first-appearance time.
struct FirstTimes {
    std::unordered_map<std::uint64_t, std::int64_t> first_conn;
    std::vector<std::int64_t> first_seen;
    std::vector<std::uint64_t> pair_order;  // pairs in first-connection order
};

FirstTimes first_times(const TemporalGraph& g) {
    FirstTimes ft;
    ft.first_seen.assign(g.node_count(), std::numeric_limits<std::int64_t>::max());
    auto order = time_order(g);
    for (std::size_t idx : order) {
        const auto& e = g.edges[idx];
        auto [cu, cv] = g.canonical_pair(e.src, e.dst);
        if (ft.first_conn.emplace(pair_key(cu, cv), e.timestamp).second)
            ft.pair_order.push_back(pair_key(cu, cv));
        ft.first_seen[e.src] = std::min(ft.first_seen[e.src], e.timestamp);
        ft.first_seen[e.dst] = std::min(ft.first_seen[e.dst], e.timestamp);
    }
    return ft;
}

}  // namespace

std::int64_t select_pivot(const TemporalGraph& g, double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("select_pivot: train_fraction must be in (0,1)");
    if (g.edges.empty()) throw std::invalid_argument("select_pivot: graph has no edges");

    auto ft = first_times(g);

    std::vector<std::int64_t> candidates;
    candidates.reserve(g.edges.size());
    for (const auto& e : g.edges) candidates.push_back(e.timestamp);
    std::sort(candidates.begin(), candidates.end());
    std::vector<std::int64_t> stamps = candidates;  // sorted multiset of timestamps
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    // A pair is a usable test edge for pivot P when both endpoints exist by P
    // and its first connection is after P, i.e. P lies in [ready, first_conn).
    // Sweep those intervals over the candidate pivots.
    std::unordered_map<std::int64_t, std::int64_t> delta;
    for (auto key : ft.pair_order) {
        auto u = static_cast<std::uint32_t>(key >> 32);
        auto v = static_cast<std::uint32_t>(key & 0xffffffffULL);
        std::int64_t ready = std::max(ft.first_seen[u], ft.first_seen[v]);
        std::int64_t conn = ft.first_conn[key];
        if (ready < conn) {
            delta[ready] += 1;
            delta[conn] -= 1;
        }
    }

    const double total = static_cast<double>(stamps.size());
    std::int64_t best_pivot = 0;
    double best_gap = std::numeric_limits<double>::infinity();
    bool found = false;
    std::int64_t open = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        std::int64_t p = candidates[i];
        auto it = delta.find(p);
        if (it != delta.end()) open += it->second;
        if (open <= 0) continue;  // no valid test edge survives this pivot
        auto upto = std::upper_bound(stamps.begin(), stamps.end(), p) - stamps.begin();
        double gap = std::abs(static_cast<double>(upto) / total - train_fraction);
        if (gap < best_gap - 1e-12) {
            best_gap = gap;
            best_pivot = p;
            found = true;
        }
    }
    if (!found)
        throw std::runtime_error(
            "select_pivot: no pivot leaves at least one valid test edge "
            "(every candidate either exhausts the edges or strands new nodes)");
    return best_pivot;
}

LinkSplit split_link_prediction(const TemporalGraph& g, std::int64_t pivot, std::uint64_t seed) {
    LinkSplit split;
    split.pivot = pivot;
    auto ft = first_times(g);

    std::vector<std::uint32_t> pre_nodes;
    std::vector<char> is_pre(g.node_count(), 0);
    for (std::uint32_t v = 0; v < g.node_count(); ++v)
        if (ft.first_seen[v] <= pivot) {
            is_pre[v] = 1;
            pre_nodes.push_back(v);
        }

    std::unordered_set<std::uint64_t> connected_at_pivot;
    std::unordered_set<std::uint64_t> connected_ever_pre;  // both endpoints pre-pivot
    for (auto key : ft.pair_order) {
        auto u = static_cast<std::uint32_t>(key >> 32);
        auto v = static_cast<std::uint32_t>(key & 0xffffffffULL);
        std::int64_t conn = ft.first_conn[key];
        if (conn <= pivot) {
            split.train_pos.emplace_back(u, v);
            connected_at_pivot.insert(key);
        } else if (is_pre[u] && is_pre[v]) {
            split.test_pos.emplace_back(u, v);
        }
        if (is_pre[u] && is_pre[v]) connected_ever_pre.insert(key);
    }

    const auto n_pre = static_cast<std::uint64_t>(pre_nodes.size());
    const std::uint64_t total_pairs =
        g.directed ? n_pre * (n_pre - 1) : n_pre * (n_pre - 1) / 2;

    auto sample_negatives = [&](std::size_t need, const std::unordered_set<std::uint64_t>& excluded,
                                std::uint64_t pool, std::uint64_t stream,
                                std::vector<std::pair<std::uint32_t, std::uint32_t>>& out) {
        if (pool < need)
            throw std::runtime_error("negative pool too small: need " + std::to_string(need) +
                                     " pairs but only " + std::to_string(pool) +
                                     " are available (deficit " +
                                     std::to_string(need - pool) + ")");
        Rng rng(mix_seed(seed, stream));
        std::unordered_set<std::uint64_t> taken;
        std::uint64_t attempts = 0;
        const std::uint64_t max_attempts = 50 * static_cast<std::uint64_t>(need) + 1000;
        while (out.size() < need && attempts < max_attempts) {
            ++attempts;
            auto u = pre_nodes[rng.next_below(n_pre)];
            auto v = pre_nodes[rng.next_below(n_pre)];
            if (u == v) continue;
            auto [cu, cv] = g.canonical_pair(u, v);
            auto key = pair_key(cu, cv);
            if (excluded.count(key) || taken.count(key)) continue;
            taken.insert(key);
            out.emplace_back(cu, cv);
        }
        if (out.size() < need) {
            // Sparse pool; enumerate the remaining candidates and finish with
            // a partial Fisher-Yates draw.
            std::vector<std::uint64_t> remaining;
            for (std::size_t i = 0; i < pre_nodes.size(); ++i) {
                std::uint32_t u = pre_nodes[i];
                for (std::size_t j = g.directed ? 0 : i + 1; j < pre_nodes.size(); ++j) {
                    std::uint32_t v = pre_nodes[j];
                    if (u == v) continue;
                    auto [cu, cv] = g.canonical_pair(u, v);
                    auto key = pair_key(cu, cv);
                    if (!excluded.count(key) && !taken.count(key)) remaining.push_back(key);
                }
            }
            std::sort(remaining.begin(), remaining.end());
            for (std::size_t i = 0; out.size() < need; ++i) {
                std::size_t j = i + static_cast<std::size_t>(rng.next_below(remaining.size() - i));
                std::swap(remaining[i], remaining[j]);
                out.emplace_back(static_cast<std::uint32_t>(remaining[i] >> 32),
                                 static_cast<std::uint32_t>(remaining[i] & 0xffffffffULL));
            }
        }
    };

    sample_negatives(split.train_pos.size(), connected_at_pivot,
                     total_pairs - connected_at_pivot.size(), 0x7261696eULL, split.train_neg);
    sample_negatives(split.test_pos.size(), connected_ever_pre,
                     total_pairs - connected_ever_pre.size(), 0x74657374ULL, split.test_neg);
    return split;
}

NodeSplit split_node_classification(const LabelSet& labels, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0))
        throw std::invalid_argument("split_node_classification: fraction must be in (0,1)");
    if (labels.items.size() < 2)
        throw std::invalid_argument("split_node_classification: need at least 2 labeled nodes");

    NodeSplit split;
    split.num_classes = static_cast<std::uint32_t>(labels.class_names.size());
    std::vector<std::uint32_t> nodes;
    nodes.reserve(labels.items.size());
    for (const auto& [node, cls] : labels.items) {
        split.labels[node] = cls;
        nodes.push_back(node);
    }
    Rng rng(mix_seed(seed, 0x6e6f6465ULL));
    rng.shuffle(nodes);
    auto n_train = static_cast<std::size_t>(fraction * static_cast<double>(nodes.size()));
    split.train_nodes.assign(nodes.begin(), nodes.begin() + n_train);
    split.test_nodes.assign(nodes.begin() + n_train, nodes.end());
    return split;
}

double clustering_coefficient(const StaticGraph& s) {
    // Undirected simple view: directions and weights dropped, parallels and
    // self-loops removed.
    std::vector<std::vector<std::uint32_t>> nbrs(s.num_nodes);
    for (std::uint32_t u = 0; u < s.num_nodes; ++u)
        for (const auto& [v, w] : s.adj[u]) {
            if (u == v) continue;
            nbrs[u].push_back(v);
            if (s.directed) nbrs[v].push_back(u);
        }
    for (auto& list : nbrs) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }

    std::uint64_t triples = 0;
    for (const auto& list : nbrs) {
        auto d = static_cast<std::uint64_t>(list.size());
        triples += d * (d - 1) / 2;
    }
    if (triples == 0) return 0.0;

    std::uint64_t triangles = 0;
    for (std::uint32_t u = 0; u < s.num_nodes; ++u)
        for (std::uint32_t v : nbrs[u]) {
            if (v <= u) continue;
            // common neighbors w > v close a triangle counted once
            auto iu = std::upper_bound(nbrs[u].begin(), nbrs[u].end(), v);
            auto iv = std::upper_bound(nbrs[v].begin(), nbrs[v].end(), v);
            while (iu != nbrs[u].end() && iv != nbrs[v].end()) {
                if (*iu < *iv) ++iu;
                else if (*iv < *iu) ++iv;
                else { ++triangles; ++iu; ++iv; }
            }
        }
    return 3.0 * static_cast<double>(triangles) / static_cast<double>(triples);
}

namespace {

Json pairs_to_json(const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs,
                   const std::vector<std::string>& ids) {
    Json arr = Json::array();
    for (const auto& [u, v] : pairs) arr.push_back({ids.at(u), ids.at(v)});
    return arr;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs_from_json(
    const Json& arr, const std::unordered_map<std::string, std::uint32_t>& index) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    for (const auto& item : arr) {
        const auto& su = item.at(0).get_ref<const std::string&>();
        const auto& sv = item.at(1).get_ref<const std::string&>();
        auto iu = index.find(su);
        auto iv = index.find(sv);
        if (iu == index.end() || iv == index.end())
            throw std::runtime_error("split references unknown node '" +
                                     (iu == index.end() ? su : sv) + "'");
        out.emplace_back(iu->second, iv->second);
    }
    return out;
}

}  // namespace

std::string link_split_to_json(const LinkSplit& split, const std::vector<std::string>& node_ids) {
    Json j;
    j["pivot"] = split.pivot;
    j["train_pos"] = pairs_to_json(split.train_pos, node_ids);
    j["train_neg"] = pairs_to_json(split.train_neg, node_ids);
    j["test_pos"] = pairs_to_json(split.test_pos, node_ids);
    j["test_neg"] = pairs_to_json(split.test_neg, node_ids);
    return j.dump(2) + "\n";
}

LinkSplit link_split_from_json(const std::string& json_text,
                               const std::unordered_map<std::string, std::uint32_t>& node_index) {
    Json j = Json::parse(json_text);
    LinkSplit split;
    split.pivot = j.at("pivot").get<std::int64_t>();
    split.train_pos = pairs_from_json(j.at("train_pos"), node_index);
    split.train_neg = pairs_from_json(j.at("train_neg"), node_index);
    split.test_pos = pairs_from_json(j.at("test_pos"), node_index);
    split.test_neg = pairs_from_json(j.at("test_neg"), node_index);
    return split;
}

std::string node_split_to_json(const NodeSplit& split, const std::vector<std::string>& node_ids) {
    Json j;
    Json labels = Json::object();
    for (const auto& [node, cls] : split.labels) labels[node_ids.at(node)] = cls;
    j["labels"] = labels;
    j["num_classes"] = split.num_classes;
    Json train = Json::array(), test = Json::array();
    for (auto v : split.train_nodes) train.push_back(node_ids.at(v));
    for (auto v : split.test_nodes) test.push_back(node_ids.at(v));
    j["train_nodes"] = train;
    j["test_nodes"] = test;
    return j.dump(2) + "\n";
}

NodeSplit node_split_from_json(const std::string& json_text,
                               const std::unordered_map<std::string, std::uint32_t>& node_index) {
    Json j = Json::parse(json_text);
    NodeSplit split;
    split.num_classes = j.at("num_classes").get<std::uint32_t>();
    auto lookup = [&](const std::string& id) {
        auto it = node_index.find(id);
        if (it == node_index.end())
            throw std::runtime_error("split references unknown node '" + id + "'");
        return it->second;
    };
    for (const auto& [id, cls] : j.at("labels").items())
        split.labels[lookup(id)] = cls.get<std::uint32_t>();
    for (const auto& id : j.at("train_nodes"))
        split.train_nodes.push_back(lookup(id.get_ref<const std::string&>()));
    for (const auto& id : j.at("test_nodes"))
        split.test_nodes.push_back(lookup(id.get_ref<const std::string&>()));
    return split;
}

void write_edge_tsv(const std::string& path, const TemporalGraph& g) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write edge list: " + path);
    char buf[64];
    for (const auto& e : g.edges) {
        out << g.node_ids[e.src] << '\t' << g.node_ids[e.dst] << '\t' << e.timestamp;
        if (g.weighted) {
            std::snprintf(buf, sizeof buf, "%.17g", e.weight);
            out << '\t' << buf;
        }
        out << '\n';
    }
}

}  // namespace tgemb
