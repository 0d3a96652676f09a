#include "tgemb/skipgram.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "tgemb/rng.hpp"

namespace tgemb {

namespace {

double sigmoid(double x) {
    if (x > 40.0) return 1.0;
    if (x < -40.0) return 0.0;
    return 1.0 / (1.0 + std::exp(-x));
}

// -log(sigmoid(x)) = softplus(-x), computed without overflow
double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

struct TrainState {
    std::uint32_t d;
    std::vector<std::int32_t> node2col;
    std::vector<std::uint32_t> vocab;  // ascending node ids
    std::vector<double> target;       // returned embedding, node-major
    std::vector<double> context;
    AliasTable noise;
};

// One pass over a range of walks; returns (loss sum, pair count) and bumps
// the shared position counter that drives the linear learning-rate decay.
std::pair<double, std::uint64_t> sweep(TrainState& st, const WalkCorpus& corpus,
                                       std::size_t begin, std::size_t stride,
                                       const SkipGramConfig& cfg, std::uint64_t total_positions,
                                       std::atomic<std::uint64_t>& processed, Rng& rng) {
    const std::uint32_t d = st.d;
    const double lr_floor = cfg.learning_rate * 1e-4;
    std::vector<double> accum(d);
    double loss_sum = 0.0;
    std::uint64_t pairs = 0;

    for (std::size_t wi = begin; wi < corpus.walks.size(); wi += stride) {
        const auto& walk = corpus.walks[wi];
        for (std::size_t pos = 0; pos < walk.size(); ++pos) {
            std::uint64_t done = processed.fetch_add(1, std::memory_order_relaxed);
            double frac = static_cast<double>(done) / static_cast<double>(total_positions);
            double lr = std::max(cfg.learning_rate * (1.0 - frac), lr_floor);

            double* center = st.target.data() +
                             static_cast<std::size_t>(st.node2col[walk[pos]]) * d;
            std::size_t lo = pos > cfg.window ? pos - cfg.window : 0;
            std::size_t hi = std::min(walk.size(), pos + cfg.window + 1);
            for (std::size_t cpos = lo; cpos < hi; ++cpos) {
                if (cpos == pos) continue;
                const std::uint32_t ctx_col =
                    static_cast<std::uint32_t>(st.node2col[walk[cpos]]);
                std::fill(accum.begin(), accum.end(), 0.0);
                for (std::uint32_t s = 0; s <= cfg.negatives; ++s) {
                    std::uint32_t out_col;
                    double label;
                    if (s == 0) {
                        out_col = ctx_col;
                        label = 1.0;
                    } else {
                        out_col = static_cast<std::uint32_t>(st.noise.sample(rng));
                        if (out_col == ctx_col) continue;
                        label = 0.0;
                    }
                    double* out = st.context.data() + static_cast<std::size_t>(out_col) * d;
                    double f = 0.0;
                    for (std::uint32_t i = 0; i < d; ++i) f += center[i] * out[i];
                    loss_sum += label > 0.5 ? softplus(-f) : softplus(f);
                    double g = (label - sigmoid(f)) * lr;
                    for (std::uint32_t i = 0; i < d; ++i) {
                        accum[i] += g * out[i];
                        out[i] += g * center[i];
                    }
                }
                for (std::uint32_t i = 0; i < d; ++i) center[i] += accum[i];
                ++pairs;
            }
        }
    }
    return {loss_sum, pairs};
}

}  // namespace

EmbeddingMatrix train_skipgram(const WalkCorpus& corpus, const SkipGramConfig& cfg,
                               std::uint32_t num_nodes, std::vector<double>* epoch_loss) {
    if (cfg.d < 2 || cfg.window < 1 || cfg.negatives < 1 || cfg.epochs < 1 ||
        !(cfg.learning_rate > 0.0) || cfg.threads < 1)
        throw std::invalid_argument("skip-gram config out of bounds");

    std::uint64_t total_positions = 0;
    for (const auto& walk : corpus.walks) total_positions += walk.size();
    if (total_positions == 0) throw std::invalid_argument("skip-gram corpus is empty");

    TrainState st;
    st.d = cfg.d;
    std::vector<std::uint64_t> counts(num_nodes, 0);
    for (const auto& walk : corpus.walks)
        for (std::uint32_t v : walk) {
            if (v >= num_nodes)
                throw std::runtime_error("corpus node " + std::to_string(v) +
                                         " outside the node index");
            ++counts[v];
        }
    st.node2col.assign(num_nodes, -1);
    for (std::uint32_t v = 0; v < num_nodes; ++v)
        if (counts[v] > 0) {
            st.node2col[v] = static_cast<std::int32_t>(st.vocab.size());
            st.vocab.push_back(v);
        }
    const auto vocab_size = static_cast<std::uint32_t>(st.vocab.size());

    std::vector<double> noise_weights(vocab_size);
    for (std::uint32_t c = 0; c < vocab_size; ++c)
        noise_weights[c] = std::pow(static_cast<double>(counts[st.vocab[c]]), 0.75);
    st.noise.build(noise_weights);

    st.target.resize(static_cast<std::size_t>(vocab_size) * cfg.d);
    st.context.assign(st.target.size(), 0.0);
    Rng init_rng(mix_seed(cfg.seed, 0x494e4954ULL));
    const double half = 0.5 / cfg.d;
    for (double& v : st.target) v = (init_rng.next_double() * 2.0 - 1.0) * half;

    total_positions *= cfg.epochs;
    std::atomic<std::uint64_t> processed{0};
    for (std::uint32_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        double loss_sum = 0.0;
        std::uint64_t pairs = 0;
        if (cfg.threads == 1) {
            Rng rng(mix_seed(cfg.seed, epoch, 0x4e454753ULL));
            auto [l, n] = sweep(st, corpus, 0, 1, cfg, total_positions, processed, rng);
            loss_sum = l;
            pairs = n;
        } else {
            // hogwild-style shards: updates race benignly, result is not
            // bit-reproducible across runs
            std::vector<std::thread> pool;
            std::vector<std::pair<double, std::uint64_t>> results(cfg.threads);
            for (std::uint32_t t = 0; t < cfg.threads; ++t)
                pool.emplace_back([&, t] {
                    Rng rng(mix_seed(cfg.seed, epoch * 1000 + t, 0x4e454753ULL));
                    results[t] = sweep(st, corpus, t, cfg.threads, cfg, total_positions,
                                       processed, rng);
                });
            for (auto& th : pool) th.join();
            for (auto& [l, n] : results) {
                loss_sum += l;
                pairs += n;
            }
        }
        if (epoch_loss) epoch_loss->push_back(pairs ? loss_sum / static_cast<double>(pairs) : 0.0);
    }

    EmbeddingMatrix m;
    m.dim = cfg.d;
    m.nodes = std::move(st.vocab);
    m.values = std::move(st.target);
    return m;
}

std::vector<EmbeddingMatrix> embed_snapshots(const SnapshotSeries& series, const WalkConfig& wcfg,
                                             const SkipGramConfig& scfg) {
    std::vector<EmbeddingMatrix> out;
    out.reserve(series.steps());
    for (std::size_t k = 0; k < series.steps(); ++k) {
        WalkConfig wk = wcfg;
        wk.seed = mix_seed(wcfg.seed, k, 0x57414c4bULL);
        SkipGramConfig sk = scfg;
        sk.seed = mix_seed(scfg.seed, k, 0x534b4950ULL);
        WalkCorpus corpus = generate_walks(series.snapshots[k], wk);
        EmbeddingMatrix m = train_skipgram(corpus, sk,
                                           static_cast<std::uint32_t>(series.node_ids.size()));
        m.timestep = static_cast<std::uint32_t>(k);
        out.push_back(std::move(m));
    }
    return out;
}

}  // namespace tgemb
