#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "test_util.hpp"
#include "tgemb/rng.hpp"
#include "tgemb/temporal_graph.hpp"

using namespace tgemb;
using testutil::TempDir;
using testutil::write_file;

namespace {

std::string error_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

TemporalGraph chain_graph(int n, bool directed = false) {
    // timestamps 1..n-1 along a path
    TemporalGraph g;
    g.directed = directed;
    for (int i = 0; i + 1 < n; ++i)
        g.add_edge(std::to_string(i), std::to_string(i + 1), i + 1);
    return g;
}

// Independent triple/triangle counter working straight off an edge set.
double brute_force_clustering(std::uint32_t n,
                              const std::set<std::pair<std::uint32_t, std::uint32_t>>& edges) {
    auto connected = [&](std::uint32_t a, std::uint32_t b) {
        if (a > b) std::swap(a, b);
        return edges.count({a, b}) != 0;
    };
    std::uint64_t triangles = 0, triples = 0;
    for (std::uint32_t a = 0; a < n; ++a)
        for (std::uint32_t b = a + 1; b < n; ++b)
            for (std::uint32_t c = b + 1; c < n; ++c) {
                int k = connected(a, b) + connected(a, c) + connected(b, c);
                if (k == 3) ++triangles;
                if (k >= 2) triples += (k == 3) ? 3 : 1;
            }
    if (triples == 0) return 0.0;
    return 3.0 * static_cast<double>(triangles) / static_cast<double>(triples);
}

}  // namespace

TEST_SUITE("temporal_graph") {

TEST_CASE("ingest parses a well-formed file") {
    TempDir dir;
    std::string path = write_file(dir.file("edges.tsv"),
                                  "# comment line\n"
                                  "a\tb\t3\n"
                                  "\n"
                                  "b\tc\t5\n"
                                  "a\tc\t-2\n");
    TemporalGraph g = ingest_edge_list(path, false, false);
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 3);
    CHECK(g.node_ids[0] == "a");  // interned in first-appearance order
    CHECK(g.node_ids[1] == "b");
    CHECK(g.node_ids[2] == "c");
    CHECK(g.min_timestamp() == -2);
    CHECK(g.max_timestamp() == 5);
    CHECK(g.edges[0].weight == 1.0);
    CHECK_FALSE(g.weighted);
}

TEST_CASE("ingest reads weights and validates them") {
    TempDir dir;
    std::string ok = write_file(dir.file("w.tsv"), "a\tb\t1\t2.5\nb\tc\t2\t0.5\n");
    TemporalGraph g = ingest_edge_list(ok, false, true);
    CHECK(g.weighted);
    CHECK(g.edges[0].weight == 2.5);

    std::string bad = write_file(dir.file("bad.tsv"), "a\tb\t1\t2.5\nb\tc\t2\t-1\n");
    std::string msg = error_of([&] { ingest_edge_list(bad, false, true); });
    CHECK(msg.find(":2:") != std::string::npos);  // errors carry the line number
}

TEST_CASE("ingest rejects malformed rows with their line number") {
    TempDir dir;
    std::string path = write_file(dir.file("bad.tsv"), "a\tb\t1\na\tb\n");
    std::string msg = error_of([&] { ingest_edge_list(path, false, false); });
    CHECK(msg.find(":2:") != std::string::npos);

    std::string bad_ts = write_file(dir.file("ts.tsv"), "a\tb\tnotanumber\n");
    CHECK(error_of([&] { ingest_edge_list(bad_ts, false, false); }).find(":1:") !=
          std::string::npos);

    CHECK(error_of([&] { ingest_edge_list(dir.file("missing.tsv"), false, false); })
              .find("cannot open") != std::string::npos);
}

TEST_CASE("ingest handles a message-log sized file") {
    // same shape as a real communication dataset: directed, repeat pairs,
    // unix-second timestamps
    TempDir dir;
    std::string text;
    Rng rng(17);
    const int nodes = 1899, lines = 59835;
    for (int i = 0; i < lines; ++i) {
        // force every node to appear at least once
        std::uint64_t s = i < nodes ? i : rng.next_below(nodes);
        std::uint64_t d = rng.next_below(nodes);
        if (d == s) d = (d + 1) % nodes;
        std::int64_t t = 1082000000 + static_cast<std::int64_t>(rng.next_below(16000000));
        text += std::to_string(s) + "\t" + std::to_string(d) + "\t" + std::to_string(t) + "\n";
    }
    std::string path = write_file(dir.file("msg.tsv"), text);
    TemporalGraph g = ingest_edge_list(path, true, false);
    CHECK(g.node_count() == nodes);
    CHECK(g.edge_count() == lines);
    CHECK(g.directed);
}

TEST_CASE("collapse merges within buckets and conserves weight") {
    TemporalGraph g;
    g.weighted = true;
    g.add_edge("a", "b", 10, 1.0);
    g.add_edge("b", "a", 12, 2.0);  // same undirected pair, same bucket
    g.add_edge("a", "b", 25, 4.0);  // later bucket
    g.add_edge("a", "c", 11, 8.0);
    TemporalGraph c = collapse_multi_edges(g, 10);
    CHECK(c.edge_count() == 3);
    double total = 0.0;
    for (const auto& e : c.edges) total += e.weight;
    CHECK(total == doctest::Approx(15.0));
    // bucket start timestamps: t_min = 10, width 10
    for (const auto& e : c.edges) CHECK((e.timestamp == 10 || e.timestamp == 20));
    bool merged_found = false;
    for (const auto& e : c.edges)
        if (e.weight == 3.0) {
            merged_found = true;
            CHECK(c.node_ids[e.src] == "a");  // keeps first-seen orientation
            CHECK(e.timestamp == 10);
        }
    CHECK(merged_found);
}

TEST_CASE("collapse with width 1 only merges exact timestamp duplicates") {
    TemporalGraph g;
    g.add_edge("a", "b", 5);
    g.add_edge("a", "b", 5);
    g.add_edge("a", "b", 6);
    TemporalGraph c = collapse_multi_edges(g, 1);
    CHECK(c.edge_count() == 2);
    CHECK(c.weighted);  // merged weight 2 forces the flag on
    CHECK(error_of([&] { collapse_multi_edges(g, 0); }).find("granularity") !=
          std::string::npos);
}

TEST_CASE("collapse keeps directed orientations separate") {
    TemporalGraph g;
    g.directed = true;
    g.add_edge("a", "b", 1);
    g.add_edge("b", "a", 1);
    TemporalGraph c = collapse_multi_edges(g, 100);
    CHECK(c.edge_count() == 2);
}

TEST_CASE("snapshot boundaries split the time span evenly") {
    TemporalGraph g = chain_graph(11);  // timestamps 1..10
    SnapshotSeries two = build_snapshots(g, 2);
    REQUIRE(two.steps() == 2);
    CHECK(two.boundaries[0] == 5);
    CHECK(two.boundaries[1] == 10);

    SnapshotSeries ten = build_snapshots(g, 10);
    REQUIRE(ten.steps() == 10);
    for (int k = 0; k < 10; ++k) CHECK(ten.boundaries[k] == k + 1);
}

TEST_CASE("snapshots are cumulative and end with the whole graph") {
    TemporalGraph g;
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        auto u = rng.next_below(30), v = rng.next_below(30);
        if (u == v) continue;
        g.add_edge(std::to_string(u), std::to_string(v),
                   static_cast<std::int64_t>(rng.next_below(50)));
    }
    SnapshotSeries series = build_snapshots(g, 7);
    REQUIRE(series.steps() == 7);
    for (std::size_t k = 1; k < series.steps(); ++k) {
        // every edge slot of snapshot k-1 appears in snapshot k
        const StaticGraph& prev = series.snapshots[k - 1];
        const StaticGraph& cur = series.snapshots[k];
        CHECK(prev.num_edge_slots <= cur.num_edge_slots);
        for (std::uint32_t u = 0; u < prev.num_nodes; ++u)
            for (const auto& [v, w] : prev.adj[u]) CHECK(cur.has_neighbor(u, v));
    }
    std::set<std::pair<std::uint32_t, std::uint32_t>> pairs;
    for (const auto& e : g.edges) pairs.insert(g.canonical_pair(e.src, e.dst));
    CHECK(series.snapshots.back().num_edge_slots == pairs.size());
}

TEST_CASE("undirected snapshots store both arc directions") {
    TemporalGraph g;
    g.add_edge("a", "b", 1);
    SnapshotSeries series = build_snapshots(g, 1);
    const StaticGraph& s = series.snapshots[0];
    CHECK(s.has_neighbor(0, 1));
    CHECK(s.has_neighbor(1, 0));
    CHECK(s.num_edge_slots == 1);
}

TEST_CASE("snapshot step count is limited by distinct timestamps") {
    TemporalGraph g = chain_graph(4);  // timestamps 1, 2, 3
    CHECK(build_snapshots(g, 3).steps() == 3);
    std::string msg = error_of([&] { build_snapshots(g, 4); });
    CHECK(msg.find("choose T <= 3") != std::string::npos);
}

TEST_CASE("repeated edges accumulate weight inside a snapshot") {
    TemporalGraph g;
    g.weighted = true;
    g.add_edge("a", "b", 1, 2.0);
    g.add_edge("a", "b", 2, 3.0);
    SnapshotSeries series = build_snapshots(g, 2);
    const StaticGraph& last = series.snapshots[1];
    REQUIRE(last.adj[0].size() == 1);
    CHECK(last.adj[0][0].second == doctest::Approx(5.0));
    CHECK(last.num_edge_slots == 1);
}

TEST_CASE("select_pivot tracks the requested train fraction") {
    // 10 first connections at timestamps 1..10; pivot 7 puts 70% in train
    TemporalGraph g;
    for (int i = 0; i < 10; ++i)
        g.add_edge("u" + std::to_string(i), "v" + std::to_string(i), i + 1);
    // endpoints of later edges must exist before the pivot to be testable,
    // so tie every node into an early hub edge
    for (int i = 0; i < 10; ++i) {
        g.add_edge("u" + std::to_string(i), "hub", 0);
        g.add_edge("v" + std::to_string(i), "hub", 0);
    }
    std::int64_t pivot = select_pivot(g, 0.75);
    // 30 edges, one per pair; the sweep lands where the train share is
    // closest to 0.75
    LinkSplit split = split_link_prediction(g, pivot, 1);
    double frac = static_cast<double>(split.train_pos.size()) /
                  static_cast<double>(split.train_pos.size() + split.test_pos.size());
    // no other candidate timestamp does strictly better
    for (std::int64_t cand = 0; cand <= 10; ++cand) {
        if (cand == pivot) continue;
        LinkSplit other = split_link_prediction(g, cand, 1);
        if (other.test_pos.empty()) continue;
        double of = static_cast<double>(other.train_pos.size()) /
                    static_cast<double>(other.train_pos.size() + other.test_pos.size());
        CHECK(std::abs(frac - 0.75) <= std::abs(of - 0.75) + 1e-12);
    }
}

TEST_CASE("select_pivot refuses splits with no usable test edge") {
    TemporalGraph g;
    g.add_edge("a", "b", 1);
    g.add_edge("c", "d", 2);  // c and d first appear after any pivot < 2
    std::string msg = error_of([&] { select_pivot(g, 0.5); });
    CHECK(msg.find("no pivot") != std::string::npos);
}

TEST_CASE("link split separates train and test by first connection") {
    // triangle before the pivot plus one pair that connects after it
    TemporalGraph g;
    g.add_edge("a", "b", 1);
    g.add_edge("b", "c", 2);
    g.add_edge("a", "c", 3);
    g.add_edge("a", "d", 4);
    g.add_edge("a", "e", 4);
    g.add_edge("b", "d", 9);  // forms after pivot, both endpoints known before
    LinkSplit split = split_link_prediction(g, 5, 7);
    CHECK(split.pivot == 5);
    CHECK(split.train_pos.size() == 5);
    REQUIRE(split.test_pos.size() == 1);
    CHECK(split.test_pos[0] == g.canonical_pair(g.node_index.at("b"), g.node_index.at("d")));
    // test negatives never touch a pair that connects at any time
    std::set<std::pair<std::uint32_t, std::uint32_t>> ever;
    for (const auto& e : g.edges) ever.insert(g.canonical_pair(e.src, e.dst));
    REQUIRE(split.test_neg.size() == 1);
    CHECK(ever.count(split.test_neg[0]) == 0);
    // train negatives avoid pairs already connected at the pivot; the future
    // edge (b, d) stays eligible because nothing connects it before the pivot
    std::set<std::pair<std::uint32_t, std::uint32_t>> train_neg(split.train_neg.begin(),
                                                                split.train_neg.end());
    CHECK(train_neg.size() == 5);  // the pool has exactly five pairs, all drawn
    for (const auto& pr : split.train_pos) CHECK(train_neg.count(pr) == 0);
    CHECK(split.train_neg.size() == split.train_pos.size());
}

TEST_CASE("link split test positives need both endpoints known before the pivot") {
    TemporalGraph g;
    g.add_edge("a", "b", 1);
    g.add_edge("a", "c", 2);
    g.add_edge("a", "d", 2);
    g.add_edge("b", "c", 8);   // testable: b and c seen at times 1, 2
    g.add_edge("a", "z", 9);   // z is born after the pivot: not testable
    LinkSplit split = split_link_prediction(g, 5, 1);
    REQUIRE(split.test_pos.size() == 1);
    CHECK(split.test_pos[0] == g.canonical_pair(g.node_index.at("b"), g.node_index.at("c")));
}

TEST_CASE("link split repeat connections count once") {
    TemporalGraph g;
    g.add_edge("a", "b", 1);
    g.add_edge("a", "b", 9);  // second contact of a train pair, not a test edge
    g.add_edge("a", "c", 2);
    g.add_edge("a", "d", 2);
    g.add_edge("b", "c", 8);
    LinkSplit split = split_link_prediction(g, 5, 1);
    CHECK(split.train_pos.size() == 3);
    REQUIRE(split.test_pos.size() == 1);
    CHECK(split.test_pos[0] == g.canonical_pair(g.node_index.at("b"), g.node_index.at("c")));
}

TEST_CASE("link split is deterministic per seed") {
    TemporalGraph g;
    Rng rng(5);
    for (int i = 0; i < 300; ++i) {
        auto u = rng.next_below(40), v = rng.next_below(40);
        if (u == v) continue;
        g.add_edge(std::to_string(u), std::to_string(v),
                   static_cast<std::int64_t>(rng.next_below(100)));
    }
    std::int64_t pivot = select_pivot(g, 0.7);
    LinkSplit one = split_link_prediction(g, pivot, 11);
    LinkSplit two = split_link_prediction(g, pivot, 11);
    LinkSplit other = split_link_prediction(g, pivot, 12);
    CHECK(one.train_neg == two.train_neg);
    CHECK(one.test_neg == two.test_neg);
    CHECK(one.train_neg != other.train_neg);
    // positives do not depend on the seed at all
    CHECK(one.train_pos == other.train_pos);
    CHECK(one.test_pos == other.test_pos);
}

TEST_CASE("negative pools respect their exclusion rules") {
    TemporalGraph g;
    Rng rng(6);
    for (int i = 0; i < 150; ++i) {
        auto u = rng.next_below(25), v = rng.next_below(25);
        if (u == v) continue;
        g.add_edge(std::to_string(u), std::to_string(v),
                   static_cast<std::int64_t>(rng.next_below(60)));
    }
    std::int64_t pivot = select_pivot(g, 0.7);
    LinkSplit split = split_link_prediction(g, pivot, 3);

    std::set<std::pair<std::uint32_t, std::uint32_t>> connected_pre, connected_ever;
    for (const auto& e : g.edges) {
        auto pr = g.canonical_pair(e.src, e.dst);
        connected_ever.insert(pr);
        if (e.timestamp <= pivot) connected_pre.insert(pr);
    }
    for (const auto& pr : split.train_neg) CHECK(connected_pre.count(pr) == 0);
    for (const auto& pr : split.test_neg) CHECK(connected_ever.count(pr) == 0);
    // matched sizes, no duplicates
    std::set<std::pair<std::uint32_t, std::uint32_t>> tn(split.train_neg.begin(),
                                                         split.train_neg.end());
    CHECK(tn.size() == split.train_neg.size());
    CHECK(split.train_neg.size() == split.train_pos.size());
    CHECK(split.test_neg.size() == split.test_pos.size());
}

TEST_CASE("split reports a deficit when the negative pool runs dry") {
    // triangle only: no never-connected pre-pivot pair exists for test_neg
    TemporalGraph g;
    g.add_edge("a", "b", 1);
    g.add_edge("b", "c", 2);
    g.add_edge("a", "c", 8);
    std::string msg = error_of([&] { split_link_prediction(g, 5, 1); });
    CHECK(msg.find("negative pool too small") != std::string::npos);
    CHECK(msg.find("deficit") != std::string::npos);
}

TEST_CASE("clustering coefficient matches a brute-force count") {
    // hand case first: a triangle with one pendant edge
    TemporalGraph tri;
    tri.add_edge("a", "b", 1);
    tri.add_edge("b", "c", 1);
    tri.add_edge("a", "c", 1);
    tri.add_edge("c", "d", 1);
    StaticGraph s = build_snapshots(tri, 1).snapshots[0];
    // triples: a:1 b:1 c:3 d:0 = 5, triangles: 1, so 3/5
    CHECK(clustering_coefficient(s) == doctest::Approx(0.6).epsilon(1e-12));

    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        std::uint32_t n = 3 + static_cast<std::uint32_t>(rng.next_below(10));
        TemporalGraph g;
        for (std::uint32_t i = 0; i < n; ++i) g.intern(std::to_string(i));
        std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
        for (std::uint32_t a = 0; a < n; ++a)
            for (std::uint32_t b = a + 1; b < n; ++b)
                if (rng.next_double() < 0.4) edges.insert({a, b});
        if (edges.empty()) edges.insert({0, 1});
        for (const auto& [a, b] : edges)
            g.add_edge(std::to_string(a), std::to_string(b), 1);
        StaticGraph snap = build_snapshots(g, 1).snapshots[0];
        double expect = brute_force_clustering(n, edges);
        CHECK(clustering_coefficient(snap) == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("clustering coefficient of a directed graph uses the symmetrized view") {
    TemporalGraph g;
    g.directed = true;
    g.add_edge("a", "b", 1);
    g.add_edge("b", "a", 1);  // reciprocated pair collapses to one edge
    g.add_edge("b", "c", 1);
    g.add_edge("c", "a", 1);
    StaticGraph s = build_snapshots(g, 1).snapshots[0];
    CHECK(clustering_coefficient(s) == doctest::Approx(1.0));
}

TEST_CASE("clustering coefficient without closed triples is zero") {
    TemporalGraph g = chain_graph(2);
    StaticGraph s = build_snapshots(g, 1).snapshots[0];
    CHECK(clustering_coefficient(s) == 0.0);
}

TEST_CASE("label loading follows first-appearance class order") {
    TempDir dir;
    TemporalGraph g;
    g.add_edge("a", "b", 1);
    g.add_edge("b", "c", 2);
    std::string path = write_file(dir.file("labels.tsv"), "b\tspam\na\tham\nc\tspam\n");
    LabelSet labels = load_labels(path, g);
    REQUIRE(labels.class_names.size() == 2);
    CHECK(labels.class_names[0] == "spam");
    CHECK(labels.class_names[1] == "ham");
    REQUIRE(labels.items.size() == 3);
    CHECK(labels.items[0].second == 0);
    CHECK(labels.items[1].second == 1);

    std::string bad = write_file(dir.file("bad.tsv"), "zz\tspam\n");
    CHECK(error_of([&] { load_labels(bad, g); }).find("unknown node") != std::string::npos);
}

TEST_CASE("node classification split covers every labeled node exactly once") {
    LabelSet labels;
    for (std::uint32_t i = 0; i < 20; ++i) labels.items.push_back({i, i % 3});
    labels.class_names = {"x", "y", "z"};
    NodeSplit split = split_node_classification(labels, 0.7, 42);
    CHECK(split.num_classes == 3);
    CHECK(split.train_nodes.size() == 14);  // floor(0.7 * 20)
    CHECK(split.test_nodes.size() == 6);
    std::set<std::uint32_t> all(split.train_nodes.begin(), split.train_nodes.end());
    all.insert(split.test_nodes.begin(), split.test_nodes.end());
    CHECK(all.size() == 20);
    NodeSplit again = split_node_classification(labels, 0.7, 42);
    CHECK(again.train_nodes == split.train_nodes);
    NodeSplit other = split_node_classification(labels, 0.7, 43);
    CHECK(other.train_nodes != split.train_nodes);
}

TEST_CASE("link split survives a JSON round trip") {
    TemporalGraph g;
    Rng rng(8);
    for (int i = 0; i < 200; ++i) {
        auto u = rng.next_below(30), v = rng.next_below(30);
        if (u == v) continue;
        g.add_edge("n" + std::to_string(u), "n" + std::to_string(v),
                   static_cast<std::int64_t>(rng.next_below(40)));
    }
    std::int64_t pivot = select_pivot(g, 0.7);
    LinkSplit split = split_link_prediction(g, pivot, 9);
    std::string json = link_split_to_json(split, g.node_ids);
    LinkSplit back = link_split_from_json(json, g.node_index);
    CHECK(back.pivot == split.pivot);
    CHECK(back.train_pos == split.train_pos);
    CHECK(back.train_neg == split.train_neg);
    CHECK(back.test_pos == split.test_pos);
    CHECK(back.test_neg == split.test_neg);
}

TEST_CASE("node split survives a JSON round trip") {
    TemporalGraph g;
    g.add_edge("a", "b", 1);
    g.add_edge("b", "c", 2);
    g.add_edge("c", "d", 3);
    LabelSet labels;
    for (std::uint32_t i = 0; i < 4; ++i) labels.items.push_back({i, i % 2});
    labels.class_names = {"x", "y"};
    NodeSplit split = split_node_classification(labels, 0.5, 4);
    std::string json = node_split_to_json(split, g.node_ids);
    NodeSplit back = node_split_from_json(json, g.node_index);
    CHECK(back.num_classes == split.num_classes);
    CHECK(back.train_nodes == split.train_nodes);
    CHECK(back.test_nodes == split.test_nodes);
    CHECK(back.labels == split.labels);
}

TEST_CASE("edge list round trips through TSV") {
    TempDir dir;
    TemporalGraph g;
    g.weighted = true;
    g.add_edge("a", "b", -5, 0.25);
    g.add_edge("b", "c", 1000000007, 3.0);
    write_edge_tsv(dir.file("out.tsv"), g);
    TemporalGraph back = ingest_edge_list(dir.file("out.tsv"), false, true);
    REQUIRE(back.edge_count() == 2);
    CHECK(back.edges[0].timestamp == -5);
    CHECK(back.edges[0].weight == 0.25);
    CHECK(back.edges[1].timestamp == 1000000007);
    CHECK(back.node_ids == g.node_ids);
}

TEST_CASE("canonical pairs order undirected endpoints") {
    TemporalGraph undirected;
    undirected.intern("a");
    undirected.intern("b");
    CHECK(undirected.canonical_pair(1, 0) == std::pair<std::uint32_t, std::uint32_t>{0, 1});
    TemporalGraph directed;
    directed.directed = true;
    directed.intern("a");
    directed.intern("b");
    CHECK(directed.canonical_pair(1, 0) == std::pair<std::uint32_t, std::uint32_t>{1, 0});
}

}  // TEST_SUITE
