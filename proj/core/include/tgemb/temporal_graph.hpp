#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace tgemb {

struct TemporalEdge {
    std::uint32_t src = 0;
    std::uint32_t dst = 0;
    std::int64_t timestamp = 0;
    double weight = 1.0;
};

// Node set plus timestamped edges. Node ids are interned to dense indices in
// first-appearance order; the string ids are kept for serialization.
class TemporalGraph {
public:
    bool directed = false;
    bool weighted = false;
    std::vector<std::string> node_ids;
    std::unordered_map<std::string, std::uint32_t> node_index;
    std::vector<TemporalEdge> edges;

    std::uint32_t intern(const std::string& id);
    std::uint32_t node_count() const { return static_cast<std::uint32_t>(node_ids.size()); }
    std::size_t edge_count() const { return edges.size(); }

    void add_edge(const std::string& src, const std::string& dst, std::int64_t t, double w = 1.0);

    std::int64_t min_timestamp() const;
    std::int64_t max_timestamp() const;

    // Normalizes an endpoint pair the way splits and adjacency do: ordered
    // for directed graphs, (min,max) for undirected.
    std::pair<std::uint32_t, std::uint32_t> canonical_pair(std::uint32_t u, std::uint32_t v) const {
        if (!directed && u > v) return {v, u};
        return {u, v};
    }
};

// One cumulative snapshot: weighted adjacency over the shared node index.
// For undirected graphs both directions are stored.
struct StaticGraph {
    bool directed = false;
    std::uint32_t num_nodes = 0;
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;  // sorted by neighbor
    std::vector<char> present;  // node has at least one incident edge
    std::size_t num_edge_slots = 0;

    bool has_neighbor(std::uint32_t u, std::uint32_t v) const;
    std::uint32_t degree(std::uint32_t u) const { return static_cast<std::uint32_t>(adj[u].size()); }
    std::uint32_t present_count() const;
};

struct SnapshotSeries {
    std::vector<std::int64_t> boundaries;  // strictly increasing, last = max timestamp
    std::vector<StaticGraph> snapshots;    // snapshot k holds all edges with t <= boundaries[k]
    std::vector<std::string> node_ids;     // shared node index (position = index)
    bool directed = false;

    std::size_t steps() const { return boundaries.size(); }
};

struct LinkSplit {
    std::int64_t pivot = 0;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> train_pos, train_neg, test_pos, test_neg;
};

struct NodeSplit {
    std::vector<std::uint32_t> train_nodes, test_nodes;
    std::unordered_map<std::uint32_t, std::uint32_t> labels;  // node -> class in [0, L)
    std::uint32_t num_classes = 0;
};

// Labels parsed from `node<TAB>label-string` TSV; class indices follow
// first-appearance order of the label strings.
struct LabelSet {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> items;  // (node, class)
    std::vector<std::string> class_names;
};

// Edge TSV: `src<TAB>dst<TAB>timestamp[<TAB>weight]`, '#' comments and blank
// lines skipped. Malformed lines raise with the offending line number.
TemporalGraph ingest_edge_list(const std::string& path, bool directed, bool weighted);

LabelSet load_labels(const std::string& path, const TemporalGraph& g);

// Merges edges that share (src, dst, time bucket); the merged weight is the
// sum of member weights and the merged timestamp is the bucket's start.
TemporalGraph collapse_multi_edges(const TemporalGraph& g, std::int64_t granularity);

SnapshotSeries build_snapshots(const TemporalGraph& g, std::size_t num_steps);

std::int64_t select_pivot(const TemporalGraph& g, double train_fraction);

LinkSplit split_link_prediction(const TemporalGraph& g, std::int64_t pivot, std::uint64_t seed);

NodeSplit split_node_classification(const LabelSet& labels, double fraction, std::uint64_t seed);

// Global clustering coefficient 3*triangles/triples of the snapshot viewed
// as an undirected simple graph.
double clustering_coefficient(const StaticGraph& s);

std::string link_split_to_json(const LinkSplit& split, const std::vector<std::string>& node_ids);
LinkSplit link_split_from_json(const std::string& json_text,
                               const std::unordered_map<std::string, std::uint32_t>& node_index);
std::string node_split_to_json(const NodeSplit& split, const std::vector<std::string>& node_ids);
NodeSplit node_split_from_json(const std::string& json_text,
                               const std::unordered_map<std::string, std::uint32_t>& node_index);

void write_edge_tsv(const std::string& path, const TemporalGraph& g);

}  // namespace tgemb
