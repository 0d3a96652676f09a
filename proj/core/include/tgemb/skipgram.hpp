#pragma once

#include <cstdint>
#include <vector>

#include "tgemb/embedding.hpp"
#include "tgemb/temporal_graph.hpp"
#include "tgemb/walks.hpp"

namespace tgemb {

struct SkipGramConfig {
    std::uint32_t d = 128;        // embedding dimension
    std::uint32_t window = 10;    // context window k, applied on both sides
    std::uint32_t negatives = 5;  // noise nodes per positive pair
    std::uint32_t epochs = 5;
    double learning_rate = 0.025;  // decays linearly to 1e-4 of itself
    std::uint32_t threads = 1;     // >1 trades determinism for speed
    std::uint64_t seed = 1;
};

// Skip-gram with negative sampling over the walk corpus. Columns cover the
// corpus vocabulary (ascending node index); noise nodes follow the corpus
// unigram distribution raised to 3/4. Node ids must lie below num_nodes.
// With threads == 1 the result is a deterministic function of corpus + seed;
// epoch_loss (optional) receives the mean per-pair loss of each epoch.
EmbeddingMatrix train_skipgram(const WalkCorpus& corpus, const SkipGramConfig& cfg,
                               std::uint32_t num_nodes,
                               std::vector<double>* epoch_loss = nullptr);

// One embedding per snapshot, timestep k trained with seeds derived from
// (cfg seed, k) so steps are independent streams.
std::vector<EmbeddingMatrix> embed_snapshots(const SnapshotSeries& series, const WalkConfig& wcfg,
                                             const SkipGramConfig& scfg);

}  // namespace tgemb
