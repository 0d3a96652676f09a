// Microbenchmarks for the hot paths: walk generation, skip-gram training,
// the Jacobi SVD behind alignment, combiner forward/backward and the
// rank-based auc. Run with --benchmark_filter=<regex> to narrow.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "tgemb/alignment.hpp"
#include "tgemb/evaluation.hpp"
#include "tgemb/rng.hpp"
#include "tgemb/skipgram.hpp"
#include "tgemb/synthetic.hpp"
#include "tgemb/temporal_graph.hpp"
#include "tgemb/temporal_model.hpp"
#include "tgemb/walks.hpp"

using namespace tgemb;

namespace {

StaticGraph final_snapshot(std::uint32_t n, std::uint64_t m) {
    SynthConfig sc;
    sc.n = n;
    sc.m = m;
    sc.steps = 10;
    sc.target = DegreeTarget::linear;
    sc.seed = 7;
    TemporalGraph g = generate_temporal_graph(sc);
    return build_snapshots(g, 1).snapshots[0];
}

std::vector<EmbeddingMatrix> random_series(std::uint32_t steps, std::uint32_t n,
                                           std::uint32_t d) {
    Rng rng(11);
    std::vector<EmbeddingMatrix> out;
    for (std::uint32_t t = 0; t < steps; ++t) {
        EmbeddingMatrix m;
        m.dim = d;
        m.timestep = t;
        for (std::uint32_t v = 0; v < n; ++v) m.nodes.push_back(v);
        m.values.resize(static_cast<std::size_t>(n) * d);
        for (double& v : m.values) v = rng.next_gaussian();
        out.push_back(std::move(m));
    }
    return out;
}

void bm_walks(benchmark::State& state) {
    StaticGraph s = final_snapshot(static_cast<std::uint32_t>(state.range(0)), 3000);
    WalkConfig cfg;
    cfg.r = 10;
    cfg.l = 40;
    cfg.p = 2.0;
    cfg.q = 0.5;
    std::uint64_t walked = 0;
    for (auto _ : state) {
        WalkCorpus corpus = generate_walks(s, cfg);
        walked += corpus.walks.size();
        benchmark::DoNotOptimize(corpus);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(walked));
}

void bm_skipgram(benchmark::State& state) {
    const std::uint32_t n = 200;
    StaticGraph s = final_snapshot(n, 3000);
    WalkConfig wcfg;
    wcfg.r = 5;
    wcfg.l = 30;
    WalkCorpus corpus = generate_walks(s, wcfg);
    SkipGramConfig cfg;
    cfg.d = static_cast<std::uint32_t>(state.range(0));
    cfg.window = 5;
    cfg.negatives = 5;
    cfg.epochs = 1;
    for (auto _ : state) {
        EmbeddingMatrix m = train_skipgram(corpus, cfg, n);
        benchmark::DoNotOptimize(m);
    }
}

void bm_jacobi_svd(benchmark::State& state) {
    const std::size_t d = static_cast<std::size_t>(state.range(0));
    Rng rng(3);
    Mat m(d, d);
    for (double& v : m.a) v = rng.next_gaussian();
    for (auto _ : state) {
        SvdResult r = jacobi_svd(m);
        benchmark::DoNotOptimize(r);
    }
}

void bm_align_series(benchmark::State& state) {
    auto series = random_series(10, 500, static_cast<std::uint32_t>(state.range(0)));
    for (auto _ : state) {
        auto aligned = align_series(series);
        benchmark::DoNotOptimize(aligned);
    }
}

void bm_combiner_forward(benchmark::State& state) {
    const std::uint32_t d = static_cast<std::uint32_t>(state.range(0));
    auto series = random_series(10, 64, d);
    ModelConfig mc;
    mc.task = Task::link;
    mc.finetune_q = false;
    TemporalModel model(series, mc);
    std::uint32_t node = 0;
    for (auto _ : state) {
        auto h = model.temporal_embedding(node);
        node = (node + 1) % 64;
        benchmark::DoNotOptimize(h);
    }
}

void bm_link_gradients(benchmark::State& state) {
    const std::uint32_t d = static_cast<std::uint32_t>(state.range(0));
    auto series = random_series(10, 64, d);
    ModelConfig mc;
    mc.task = Task::link;
    mc.finetune_q = true;
    TemporalModel model(series, mc);
    std::vector<LinkExample> batch;
    for (std::uint32_t i = 0; i < 32; ++i) batch.push_back({i, (i + 7) % 64, static_cast<int>(i & 1)});
    std::vector<double> grad;
    for (auto _ : state) {
        double loss = model.link_gradients(batch, grad);
        benchmark::DoNotOptimize(loss);
        benchmark::DoNotOptimize(grad);
    }
}

void bm_auc(benchmark::State& state) {
    Rng rng(9);
    std::vector<ScoredExample> xs;
    for (std::int64_t i = 0; i < state.range(0); ++i)
        xs.push_back({rng.next_double(), static_cast<int>(rng.next_below(2))});
    xs.push_back({0.5, 1});
    xs.push_back({0.5, 0});
    for (auto _ : state) {
        double a = auc(xs);
        benchmark::DoNotOptimize(a);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(xs.size()));
}

BENCHMARK(bm_walks)->Arg(100)->Arg(300)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_skipgram)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_jacobi_svd)->Arg(16)->Arg(64)->Arg(128);
BENCHMARK(bm_align_series)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_combiner_forward)->Arg(32)->Arg(128);
BENCHMARK(bm_link_gradients)->Arg(32)->Arg(128)->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_auc)->Arg(1000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
