#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "tgemb/config.hpp"
#include "tgemb/skipgram.hpp"
#include "tgemb/temporal_graph.hpp"
#include "tgemb/temporal_model.hpp"
#include "tgemb/walks.hpp"

namespace tgemb {

// Failure wrapper naming the pipeline stage that raised.
class StageError : public std::runtime_error {
public:
    StageError(const std::string& stage, const std::string& cause)
        : std::runtime_error(stage + ": " + cause), stage_(stage) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

struct RunConfig {
    Task task = Task::link;
    std::string edges_path;
    std::string labels_path;  // node classification
    bool directed = false;
    bool weighted = false;
    std::int64_t granularity = 0;  // collapse bucket width, 0 = off
    std::uint32_t num_steps = 10;
    double train_fraction = 0.75;  // pivot target (link)
    double label_fraction = 0.7;   // train share (node classification)
    bool has_pivot = false;
    std::int64_t pivot = 0;  // explicit pivot override
    WalkConfig walk;
    SkipGramConfig sg;
    TrainConfig train;
    Combiner combiner = Combiner::lstm;
    bool finetune_q = true;
    bool alignment = true;
    bool force_proper = false;
    double timestep_fraction = 1.0;
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    bool deterministic = true;  // single-threaded embedding + training

    ConfigMap source;  // canonical key-value echo for reports
};

// Validates and assembles a RunConfig; unknown keys are errors.
RunConfig run_config_from(const ConfigMap& m);

struct RunReport {
    std::string json;
    std::map<std::string, double> metrics;
};

// ceil(fraction * total) snapshot indices, evenly spaced, always ending at
// the last snapshot.
std::vector<std::size_t> snapshot_subset(std::size_t total, double fraction);

// ingest -> (collapse) -> pivot/split -> snapshots -> embed -> align ->
// train -> evaluate. Writes report.json, split, checkpoint, loss trace and
// aligned embeddings under cfg.out_dir; on failure partial outputs are
// removed and a StageError names the failed stage. Link prediction builds
// its snapshots from pre-pivot edges only.
RunReport run_pipeline(const RunConfig& cfg);

// Same pipeline on an already-built graph (ingest skipped). The test
// harness uses this seam to poison post-pivot edges.
RunReport run_pipeline_on_graph(TemporalGraph g, const RunConfig& cfg);

// Runs every `[run.<id>]` section of a suite file (keys: config, seeds,
// plus per-run overrides), writes per-run outputs and results.csv under
// out_dir, and returns the CSV text (config id, seed, metric, value).
// Failed runs are recorded as metric=error rows and the suite continues.
std::string run_experiment_suite(const std::string& suite_path, const std::string& out_dir);

}  // namespace tgemb
