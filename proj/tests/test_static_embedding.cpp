#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "tgemb/skipgram.hpp"
#include "tgemb/temporal_graph.hpp"
#include "tgemb/walks.hpp"

using namespace tgemb;

namespace {

StaticGraph snapshot_of(const TemporalGraph& g) { return build_snapshots(g, 1).snapshots[0]; }

TemporalGraph cycle_graph(int n) {
    TemporalGraph g;
    for (int i = 0; i < n; ++i)
        g.add_edge(std::to_string(i), std::to_string((i + 1) % n), 1);
    return g;
}

double cosine(const double* a, const double* b, std::uint32_t d) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::uint32_t i = 0; i < d; ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    return dot / std::sqrt(na * nb);
}

}  // namespace

TEST_SUITE("static_embedding") {

TEST_CASE("transition weights follow the distance cases") {
    CHECK(transition_weight(0, 0.25, 1.0, 1.0) == doctest::Approx(4.0));
    CHECK(transition_weight(1, 0.25, 2.0, 1.0) == doctest::Approx(1.0));
    CHECK(transition_weight(2, 0.25, 2.0, 1.0) == doctest::Approx(0.5));
    CHECK(transition_weight(2, 1.0, 0.5, 3.0) == doctest::Approx(6.0));  // scaled by edge weight
}

TEST_CASE("second-order distribution on a path") {
    // a - b - c: standing at b having come from a
    TemporalGraph g;
    g.add_edge("a", "b", 1);
    g.add_edge("b", "c", 1);
    const double p = 0.5, q = 2.0;
    StaticGraph s = snapshot_of(g);
    BiasedWalkSampler sampler(s, p, q);
    auto arc = sampler.find_arc(0, 1);  // a -> b
    auto dist = sampler.step_distribution(arc);
    REQUIRE(dist.size() == 2);
    std::map<std::uint32_t, double> probs(dist.begin(), dist.end());
    // back to a: 1/p = 2; on to c: 1/q = 0.5; normalized 0.8 / 0.2
    CHECK(probs.at(0) == doctest::Approx(0.8));
    CHECK(probs.at(2) == doctest::Approx(0.2));
}

TEST_CASE("distance-one candidates keep weight 1") {
    // triangle abc plus pendant d on b: from arc a -> b, c is at distance 1
    TemporalGraph g;
    g.add_edge("a", "b", 1);
    g.add_edge("b", "c", 1);
    g.add_edge("a", "c", 1);
    g.add_edge("b", "d", 1);
    const double p = 4.0, q = 0.25;
    StaticGraph s = snapshot_of(g);
    BiasedWalkSampler sampler(s, p, q);
    auto dist = sampler.step_distribution(sampler.find_arc(0, 1));
    std::map<std::uint32_t, double> probs(dist.begin(), dist.end());
    // a: 1/4 (return), c: 1 (shared neighbor), d: 4 (two hops away)
    double total = 0.25 + 1.0 + 4.0;
    CHECK(probs.at(0) == doctest::Approx(0.25 / total));
    CHECK(probs.at(2) == doctest::Approx(1.0 / total));
    CHECK(probs.at(3) == doctest::Approx(4.0 / total));
}

TEST_CASE("return parameter steers revisit rates on a cycle") {
    StaticGraph s = snapshot_of(cycle_graph(8));
    // on a large cycle both non-return candidates are two hops from the
    // previous node, so P(return) = (1/p) / (1/p + 1/q)
    for (double p : {0.25, 4.0}) {
        BiasedWalkSampler sampler(s, p, 1.0);
        auto dist = sampler.step_distribution(sampler.find_arc(0, 1));
        std::map<std::uint32_t, double> probs(dist.begin(), dist.end());
        double expect = (1.0 / p) / (1.0 / p + 1.0);
        CHECK(probs.at(0) == doctest::Approx(expect));
    }

    // empirical revisit frequency moves the same way
    auto revisit_rate = [&](double p) {
        WalkConfig cfg;
        cfg.p = p;
        cfg.q = 1.0;
        cfg.r = 30;
        cfg.l = 40;
        cfg.seed = 5;
        WalkCorpus corpus = generate_walks(s, cfg);
        std::uint64_t returns = 0, chances = 0;
        for (const auto& walk : corpus.walks)
            for (std::size_t i = 2; i < walk.size(); ++i) {
                ++chances;
                if (walk[i] == walk[i - 2]) ++returns;
            }
        return static_cast<double>(returns) / static_cast<double>(chances);
    };
    double rate_small_p = revisit_rate(0.25);  // expect near 0.8
    double rate_large_p = revisit_rate(4.0);   // expect near 0.2
    CHECK(rate_small_p > rate_large_p + 0.3);
    CHECK(rate_small_p == doctest::Approx(0.8).epsilon(0.1));
    CHECK(rate_large_p == doctest::Approx(0.2).epsilon(0.25));
}

TEST_CASE("walks only traverse edges and cover every start") {
    TemporalGraph g;
    Rng rng(9);
    for (int i = 0; i < 120; ++i) {
        auto u = rng.next_below(25), v = rng.next_below(25);
        if (u == v) continue;
        g.add_edge(std::to_string(u), std::to_string(v), 1);
    }
    StaticGraph s = snapshot_of(g);
    WalkConfig cfg;
    cfg.r = 4;
    cfg.l = 12;
    cfg.seed = 2;
    WalkCorpus corpus = generate_walks(s, cfg);
    CHECK(corpus.walks.size() == static_cast<std::size_t>(s.present_count()) * cfg.r);
    std::map<std::uint32_t, int> starts;
    for (const auto& walk : corpus.walks) {
        REQUIRE(!walk.empty());
        CHECK(walk.size() <= cfg.l);
        ++starts[walk.front()];
        for (std::size_t i = 1; i < walk.size(); ++i)
            CHECK(s.has_neighbor(walk[i - 1], walk[i]));
    }
    for (std::uint32_t v = 0; v < s.num_nodes; ++v)
        if (s.present[v]) CHECK(starts[v] == static_cast<int>(cfg.r));
}

TEST_CASE("directed walks truncate at sinks") {
    TemporalGraph g;
    g.directed = true;
    g.add_edge("0", "1", 1);
    g.add_edge("1", "2", 1);
    g.add_edge("2", "3", 1);
    StaticGraph s = snapshot_of(g);
    WalkConfig cfg;
    cfg.r = 3;
    cfg.l = 10;
    WalkCorpus corpus = generate_walks(s, cfg);
    for (const auto& walk : corpus.walks) {
        if (walk.front() == 3) CHECK(walk.size() == 1);  // sink
        if (walk.front() == 0) CHECK(walk.size() == 4);  // runs down the chain
        CHECK(std::is_sorted(walk.begin(), walk.end()));  // only forward arcs exist
    }
}

TEST_CASE("walk corpus is seed-deterministic") {
    StaticGraph s = snapshot_of(cycle_graph(12));
    WalkConfig cfg;
    cfg.r = 5;
    cfg.l = 15;
    cfg.seed = 77;
    WalkCorpus one = generate_walks(s, cfg);
    WalkCorpus two = generate_walks(s, cfg);
    CHECK(one.walks == two.walks);
    cfg.seed = 78;
    WalkCorpus three = generate_walks(s, cfg);
    CHECK(one.walks != three.walks);
}

TEST_CASE("walk config is validated") {
    StaticGraph s = snapshot_of(cycle_graph(4));
    WalkConfig cfg;
    cfg.r = 0;
    CHECK_THROWS_AS(generate_walks(s, cfg), std::invalid_argument);
    cfg.r = 1;
    cfg.l = 1;
    CHECK_THROWS_AS(generate_walks(s, cfg), std::invalid_argument);
}

TEST_CASE("skip-gram separates the two halves of a barbell") {
    // two cliques bridged by a single edge
    TemporalGraph g;
    auto clique = [&](int lo) {
        for (int i = lo; i < lo + 5; ++i)
            for (int j = i + 1; j < lo + 5; ++j)
                g.add_edge(std::to_string(i), std::to_string(j), 1);
    };
    clique(0);
    clique(5);
    g.add_edge("4", "5", 1);
    StaticGraph s = snapshot_of(g);

    WalkConfig wcfg;
    wcfg.r = 20;
    wcfg.l = 20;
    wcfg.seed = 3;
    WalkCorpus corpus = generate_walks(s, wcfg);

    SkipGramConfig scfg;
    scfg.d = 16;
    scfg.window = 4;
    scfg.negatives = 5;
    scfg.epochs = 6;
    scfg.seed = 3;
    EmbeddingMatrix emb = train_skipgram(corpus, scfg, s.num_nodes);
    REQUIRE(emb.cols() == 10);
    REQUIRE(emb.dim == 16);
    CHECK(emb.all_finite());

    double intra = 0.0, cross = 0.0;
    int n_intra = 0, n_cross = 0;
    for (std::uint32_t a = 0; a < 10; ++a)
        for (std::uint32_t b = a + 1; b < 10; ++b) {
            double c = cosine(emb.col(emb.col_of(a)), emb.col(emb.col_of(b)), emb.dim);
            bool same = (a < 5) == (b < 5);
            (same ? intra : cross) += c;
            (same ? n_intra : n_cross) += 1;
        }
    intra /= n_intra;
    cross /= n_cross;
    CHECK(intra > cross + 0.2);
}

TEST_CASE("skip-gram loss falls over epochs") {
    StaticGraph s = snapshot_of(cycle_graph(20));
    WalkConfig wcfg;
    wcfg.r = 10;
    wcfg.l = 20;
    wcfg.seed = 4;
    WalkCorpus corpus = generate_walks(s, wcfg);
    SkipGramConfig scfg;
    scfg.d = 12;
    scfg.window = 3;
    scfg.epochs = 5;
    scfg.seed = 4;
    std::vector<double> losses;
    train_skipgram(corpus, scfg, s.num_nodes, &losses);
    REQUIRE(losses.size() == scfg.epochs);
    CHECK(losses.back() < losses.front());
    for (double l : losses) CHECK(std::isfinite(l));
}

TEST_CASE("skip-gram is deterministic with one thread") {
    StaticGraph s = snapshot_of(cycle_graph(15));
    WalkConfig wcfg;
    wcfg.r = 6;
    wcfg.l = 12;
    WalkCorpus corpus = generate_walks(s, wcfg);
    SkipGramConfig scfg;
    scfg.d = 8;
    scfg.epochs = 2;
    EmbeddingMatrix a = train_skipgram(corpus, scfg, s.num_nodes);
    EmbeddingMatrix b = train_skipgram(corpus, scfg, s.num_nodes);
    CHECK(a.values == b.values);
    CHECK(a.nodes == b.nodes);
    scfg.seed = 99;
    EmbeddingMatrix c = train_skipgram(corpus, scfg, s.num_nodes);
    CHECK(a.values != c.values);
}

TEST_CASE("skip-gram columns cover exactly the corpus vocabulary") {
    WalkCorpus corpus;
    corpus.walks = {{3, 1, 3}, {1, 3, 1}, {7, 3}};
    SkipGramConfig scfg;
    scfg.d = 4;
    scfg.epochs = 1;
    EmbeddingMatrix emb = train_skipgram(corpus, scfg, 10);
    REQUIRE(emb.nodes == std::vector<std::uint32_t>{1, 3, 7});  // ascending
    CHECK(emb.col_of(1) == 0);
    CHECK(emb.col_of(3) == 1);
    CHECK(emb.col_of(2) == -1);

    WalkCorpus bad;
    bad.walks = {{0, 12}};
    CHECK_THROWS_AS(train_skipgram(bad, scfg, 10), std::exception);
}

TEST_CASE("per-snapshot embeddings line up with their snapshots") {
    TemporalGraph g;
    g.add_edge("a", "b", 1);
    g.add_edge("b", "c", 2);
    g.add_edge("c", "d", 3);
    g.add_edge("d", "a", 4);
    SnapshotSeries series = build_snapshots(g, 4);
    WalkConfig wcfg;
    wcfg.r = 4;
    wcfg.l = 8;
    SkipGramConfig scfg;
    scfg.d = 6;
    scfg.epochs = 2;
    std::vector<EmbeddingMatrix> mats = embed_snapshots(series, wcfg, scfg);
    REQUIRE(mats.size() == 4);
    for (std::size_t k = 0; k < mats.size(); ++k) {
        CHECK(mats[k].timestep == k);
        CHECK(mats[k].dim == 6);
        // columns are exactly the nodes present in snapshot k
        std::vector<std::uint32_t> present;
        for (std::uint32_t v = 0; v < series.snapshots[k].num_nodes; ++v)
            if (series.snapshots[k].present[v]) present.push_back(v);
        CHECK(mats[k].nodes == present);
        CHECK(mats[k].all_finite());
    }
    // different snapshots see different corpora, so values differ
    CHECK(mats[2].values != mats[3].values);
}

}  // TEST_SUITE
