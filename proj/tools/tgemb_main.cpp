// Command-line front end: every subcommand is a thin wrapper over the core
// library so scripted runs and tests share one code path.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tgemb/alignment.hpp"
#include "tgemb/evaluation.hpp"
#include "tgemb/pipeline.hpp"
#include "tgemb/synthetic.hpp"

namespace fs = std::filesystem;
using namespace tgemb;

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

TemporalGraph load_graph(const std::string& edges, bool directed, bool weighted,
                         std::int64_t granularity) {
    TemporalGraph g = ingest_edge_list(edges, directed, weighted);
    if (granularity > 0) g = collapse_multi_edges(g, granularity);
    return g;
}

void print_metrics(const std::map<std::string, double>& metrics) {
    for (const auto& [k, v] : metrics) std::cout << k << " = " << fmt(v) << '\n';
}

// Reads a set of .emb files into one shared node index, ordered by stored
// timestep.
struct EmbeddingSet {
    std::vector<EmbeddingMatrix> mats;
    std::vector<std::string> node_ids;
    std::unordered_map<std::string, std::uint32_t> node_index;
};

EmbeddingSet load_embedding_set(const std::vector<std::string>& paths) {
    std::vector<LoadedEmbedding> loaded;
    for (const std::string& p : paths) loaded.push_back(read_embedding(p));
    std::sort(loaded.begin(), loaded.end(), [](const LoadedEmbedding& a, const LoadedEmbedding& b) {
        return a.matrix.timestep < b.matrix.timestep;
    });
    for (std::size_t i = 1; i < loaded.size(); ++i)
        if (loaded[i].matrix.timestep == loaded[i - 1].matrix.timestep)
            throw std::runtime_error("two embeddings share timestep " +
                                     std::to_string(loaded[i].matrix.timestep));
    EmbeddingSet set;
    for (const LoadedEmbedding& le : loaded)
        for (const std::string& id : le.ids)
            if (!set.node_index.count(id)) {
                set.node_index.emplace(id, static_cast<std::uint32_t>(set.node_ids.size()));
                set.node_ids.push_back(id);
            }
    for (LoadedEmbedding& le : loaded) {
        remap_columns(le.matrix, le.ids, set.node_index);
        set.mats.push_back(std::move(le.matrix));
    }
    return set;
}

std::vector<std::string> find_aligned_embeddings(const std::string& dir) {
    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::string name = entry.path().filename().string();
        if (name.rfind("aligned_", 0) == 0 && name.size() > 4 &&
            name.substr(name.size() - 4) == ".emb")
            paths.push_back(entry.path().string());
    }
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) throw std::runtime_error("no aligned_*.emb files under " + dir);
    return paths;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void run_eval(const std::string& model_dir) {
    Checkpoint ck = read_checkpoint((fs::path(model_dir) / "checkpoint.bin").string());
    EmbeddingSet set = load_embedding_set(find_aligned_embeddings(model_dir));
    if (set.mats.size() != ck.steps)
        throw std::runtime_error("checkpoint expects " + std::to_string(ck.steps) +
                                 " snapshots, found " + std::to_string(set.mats.size()));
    TemporalModel model(std::move(set.mats), ck.cfg);
    model.set_model_params(ck.params);

    std::string split_text = read_text((fs::path(model_dir) / "split.json").string());
    if (ck.cfg.task == Task::link) {
        LinkSplit split = link_split_from_json(split_text, set.node_index);
        auto score = [&](const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pos,
                         const std::vector<std::pair<std::uint32_t, std::uint32_t>>& neg) {
            std::vector<ScoredExample> scored;
            for (const auto& [u, v] : pos)
                if (model.embeddable(u) && model.embeddable(v))
                    scored.push_back({model.predict_link(u, v), 1});
            for (const auto& [u, v] : neg)
                if (model.embeddable(u) && model.embeddable(v))
                    scored.push_back({model.predict_link(u, v), 0});
            return auc(scored);
        };
        std::map<std::string, double> metrics;
        metrics["auc"] = score(split.test_pos, split.test_neg);
        metrics["train_auc"] = score(split.train_pos, split.train_neg);
        print_metrics(metrics);
    } else {
        NodeSplit split = node_split_from_json(split_text, set.node_index);
        std::vector<int> predictions, truth;
        std::vector<std::vector<double>> probabilities;
        for (std::uint32_t v : split.test_nodes) {
            if (!model.embeddable(v)) continue;
            std::vector<double> probs = model.predict_node_class(v);
            predictions.push_back(
                static_cast<int>(std::max_element(probs.begin(), probs.end()) - probs.begin()));
            truth.push_back(static_cast<int>(split.labels.at(v)));
            probabilities.push_back(std::move(probs));
        }
        int num_classes = static_cast<int>(split.num_classes);
        std::map<std::string, double> metrics;
        metrics["micro_f1"] = micro_f1(predictions, truth, num_classes);
        metrics["macro_f1"] = macro_f1(predictions, truth, num_classes);
        metrics["macro_auc"] = multiclass_auc(probabilities, truth, num_classes);
        print_metrics(metrics);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"temporal graph node embeddings"};
    app.require_subcommand(1);

    std::string edges, labels, out, config, suite_path, model_dir, profile = "linear";
    bool directed = false, weighted = false, force_proper = false, want_rotations = false;
    bool want_tsv = false;
    std::int64_t granularity = 0, seed_opt = -1;
    std::uint32_t steps = 10, nodes = 100;
    std::uint64_t edge_count = 2000, synth_seed = 1;
    WalkConfig wcfg;
    SkipGramConfig scfg;
    std::vector<std::string> inputs, overrides;

    auto add_graph_flags = [&](CLI::App* cmd) {
        cmd->add_option("--edges", edges, "edge list TSV: src dst timestamp [weight]")
            ->required();
        cmd->add_flag("--directed", directed, "treat edges as directed");
        cmd->add_flag("--weighted", weighted, "read a weight column");
        cmd->add_option("--granularity", granularity,
                        "merge repeat edges within time buckets of this width");
    };

    auto* c_ingest = app.add_subcommand("ingest", "parse, validate and normalize an edge list");
    add_graph_flags(c_ingest);
    c_ingest->add_option("--out", out, "normalized edge TSV")->required();
    c_ingest->callback([&] {
        TemporalGraph g = load_graph(edges, directed, weighted, granularity);
        write_edge_tsv(out, g);
        std::cout << g.node_count() << " nodes, " << g.edge_count() << " edges, timestamps ["
                  << g.min_timestamp() << ", " << g.max_timestamp() << "]\n";
    });

    auto* c_snapshot = app.add_subcommand("snapshot", "inspect cumulative snapshot boundaries");
    add_graph_flags(c_snapshot);
    c_snapshot->add_option("--steps", steps, "number of snapshots")->required();
    c_snapshot->add_option("--out", out, "also write the table to this TSV");
    c_snapshot->callback([&] {
        TemporalGraph g = load_graph(edges, directed, weighted, granularity);
        SnapshotSeries series = build_snapshots(g, steps);
        std::ostringstream table;
        table << "step\tboundary\tnodes\tedges\tclustering\n";
        for (std::size_t k = 0; k < series.steps(); ++k) {
            const StaticGraph& s = series.snapshots[k];
            table << k << '\t' << series.boundaries[k] << '\t' << s.present_count() << '\t'
                  << s.num_edge_slots << '\t' << fmt(clustering_coefficient(s)) << '\n';
        }
        std::cout << table.str();
        if (!out.empty()) {
            std::ofstream f(out);
            if (!f) throw std::runtime_error("cannot write " + out);
            f << table.str();
        }
    });

    auto* c_embed = app.add_subcommand("embed", "per-snapshot embeddings from biased walks");
    add_graph_flags(c_embed);
    c_embed->add_option("--steps", steps, "number of snapshots")->required();
    c_embed->add_option("--out", out, "output directory")->required();
    c_embed->add_option("--d", scfg.d, "embedding dimension");
    c_embed->add_option("--window", scfg.window, "context window");
    c_embed->add_option("--negatives", scfg.negatives, "noise samples per pair");
    c_embed->add_option("--epochs", scfg.epochs, "training epochs per snapshot");
    c_embed->add_option("--learning-rate", scfg.learning_rate, "initial learning rate");
    c_embed->add_option("--threads", scfg.threads, "worker threads (>1 is nondeterministic)");
    c_embed->add_option("--p", wcfg.p, "return parameter");
    c_embed->add_option("--q", wcfg.q, "in-out parameter");
    c_embed->add_option("--walks-per-node", wcfg.r, "walks started per node");
    c_embed->add_option("--walk-length", wcfg.l, "nodes per walk");
    c_embed->add_option("--seed", wcfg.seed, "random seed");
    c_embed->add_flag("--tsv", want_tsv, "also write readable TSV embeddings");
    c_embed->callback([&] {
        scfg.seed = wcfg.seed;
        TemporalGraph g = load_graph(edges, directed, weighted, granularity);
        SnapshotSeries series = build_snapshots(g, steps);
        std::vector<EmbeddingMatrix> mats = embed_snapshots(series, wcfg, scfg);
        fs::create_directories(out);
        for (const EmbeddingMatrix& m : mats) {
            std::string base = (fs::path(out) / ("step_" + std::to_string(m.timestep))).string();
            write_embedding(base + ".emb", m, g.node_ids);
            if (want_tsv) write_embedding_tsv(base + ".tsv", m, g.node_ids);
            std::cout << "step " << m.timestep << ": " << m.cols() << " nodes embedded\n";
        }
    });

    auto* c_align = app.add_subcommand("align", "rotate an embedding series into one space");
    c_align->add_option("inputs", inputs, ".emb files in temporal order")
        ->required()
        ->expected(-2);
    c_align->add_option("--out", out, "output directory")->required();
    c_align->add_flag("--force-proper", force_proper, "flip reflections into proper rotations");
    c_align->add_flag("--rotations", want_rotations, "also write rotation matrices as TSV");
    c_align->callback([&] {
        EmbeddingSet set = load_embedding_set(inputs);
        std::vector<RotationMatrix> rots;
        std::vector<EmbeddingMatrix> aligned = align_series(set.mats, force_proper, &rots);
        fs::create_directories(out);
        for (const EmbeddingMatrix& m : aligned)
            write_embedding((fs::path(out) / ("aligned_" + std::to_string(m.timestep) + ".emb"))
                                .string(),
                            m, set.node_ids);
        if (want_rotations)
            for (const RotationMatrix& r : rots)
                write_rotation_tsv(
                    (fs::path(out) / ("rotation_" + std::to_string(r.timestep) + ".tsv"))
                        .string(),
                    r);
        std::cout << "aligned " << aligned.size() << " embedding matrices\n";
    });

    auto* c_train = app.add_subcommand("train", "run the full pipeline from a config file");
    c_train->add_option("--config", config, "run configuration")->required();
    c_train->add_option("--seed", seed_opt, "override the configured seed");
    c_train->add_option("--out", out, "override the configured output directory");
    c_train->add_option("--set", overrides, "extra key=value overrides")->take_all();
    c_train->callback([&] {
        ConfigMap m = ConfigMap::parse_file(config);
        for (const std::string& kv : overrides) {
            auto eq = kv.find('=');
            if (eq == std::string::npos || eq == 0)
                throw std::runtime_error("--set expects key=value, got '" + kv + "'");
            m.set(kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (seed_opt >= 0) m.set("seed", std::to_string(seed_opt));
        if (!out.empty()) m.set("out", out);
        RunConfig rc = run_config_from(m);
        RunReport report = run_pipeline(rc);
        print_metrics(report.metrics);
        std::cout << "outputs in " << rc.out_dir << '\n';
    });

    auto* c_eval = app.add_subcommand("eval", "re-score a trained run directory");
    c_eval->add_option("model", model_dir, "directory with checkpoint.bin, split.json, aligned_*.emb")
        ->required();
    c_eval->callback([&] { run_eval(model_dir); });

    auto* c_synth = app.add_subcommand("synth", "generate a temporal graph with a target degree profile");
    c_synth->add_option("--nodes", nodes, "node count");
    c_synth->add_option("--edges", edge_count, "total edge count");
    c_synth->add_option("--steps", steps, "number of timestamps");
    c_synth->add_option("--profile", profile, "linear | logarithmic | sinusoidal | exponential");
    c_synth->add_option("--seed", synth_seed, "random seed");
    c_synth->add_option("--out", out, "edge TSV to write")->required();
    c_synth->callback([&] {
        SynthConfig cfg;
        cfg.n = nodes;
        cfg.m = edge_count;
        cfg.steps = steps;
        cfg.target = degree_target_from_string(profile);
        cfg.seed = synth_seed;
        double l1 = 0.0;
        TemporalGraph g = generate_temporal_graph(cfg, &l1);
        write_edge_tsv(out, g);
        std::cout << g.node_count() << " nodes, " << g.edge_count() << " edges over " << steps
                  << " steps (degree profile L1 gap " << fmt(l1) << ")\n";
    });

    auto* c_suite = app.add_subcommand("suite", "run every configuration in a suite file");
    c_suite->add_option("--suite", suite_path, "suite description file")->required();
    c_suite->add_option("--out", out, "output directory")->required();
    c_suite->callback([&] { std::cout << run_experiment_suite(suite_path, out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "tgemb: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
