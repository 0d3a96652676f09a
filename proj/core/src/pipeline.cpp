#include "tgemb/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "tgemb/alignment.hpp"
#include "tgemb/evaluation.hpp"

namespace tgemb {

namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

template <typename F>
auto stage(const char* name, F&& fn) {
    try {
        return fn();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

const std::set<std::string>& allowed_keys() {
    static const std::set<std::string> keys = {
        "task",           "edges",
        "labels",         "directed",
        "weighted",       "granularity",
        "steps",          "train_fraction",
        "label_fraction", "pivot",
        "combiner",       "finetune_q",
        "alignment",      "force_proper",
        "timestep_fraction", "out",
        "seed",           "deterministic",
        "walk.p",         "walk.q",
        "walk.r",         "walk.l",
        "sg.d",           "sg.window",
        "sg.negatives",   "sg.epochs",
        "sg.learning_rate", "sg.threads",
        "train.epochs",   "train.batch",
        "train.step_size", "train.beta1",
        "train.beta2",    "train.eps",
    };
    return keys;
}

std::uint32_t checked_u32(const ConfigMap& m, const std::string& key, std::int64_t fallback,
                          std::int64_t lo, std::int64_t hi = 0xffffffffLL) {
    std::int64_t v = m.get_int(key, fallback);
    if (v < lo || v > hi)
        throw std::runtime_error("config key '" + key + "': value " + std::to_string(v) +
                                 " out of range [" + std::to_string(lo) + ", " +
                                 std::to_string(hi) + "]");
    return static_cast<std::uint32_t>(v);
}

double checked_fraction(const ConfigMap& m, const std::string& key, double fallback,
                        bool allow_one) {
    double v = m.get_double(key, fallback);
    if (!(v > 0.0) || v > 1.0 || (!allow_one && v >= 1.0))
        throw std::runtime_error("config key '" + key + "': value must lie in (0, 1" +
                                 (allow_one ? "]" : ")"));
    return v;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const char* combiner_name(Combiner c) {
    switch (c) {
        case Combiner::lstm: return "lstm";
        case Combiner::rnn: return "rnn";
        case Combiner::last_snapshot: return "last_snapshot";
    }
    return "?";
}

// Everything the pipeline produces; written in one pass at the end so a
// failed run leaves no partial files behind.
struct RunOutputs {
    Json report;
    std::string split_json;
    std::vector<double> losses;
    TemporalModel* model = nullptr;
    std::string config_echo;
    const std::vector<std::string>* node_ids = nullptr;
};

void write_outputs(const std::string& out_dir, const RunOutputs& o,
                   std::vector<std::string>& written) {
    fs::create_directories(out_dir);
    auto track = [&](const std::string& name) {
        written.push_back((fs::path(out_dir) / name).string());
        return written.back();
    };
    {
        std::ofstream out(track("report.json"));
        if (!out) throw std::runtime_error("cannot write " + written.back());
        out << o.report.dump(2) << '\n';
    }
    {
        std::ofstream out(track("split.json"));
        if (!out) throw std::runtime_error("cannot write " + written.back());
        out << o.split_json;
    }
    write_loss_csv(track("loss.csv"), o.losses);
    write_checkpoint(track("checkpoint.bin"), *o.model, o.config_echo);
    for (const EmbeddingMatrix& m : o.model->aligned_embeddings())
        write_embedding(track("aligned_" + std::to_string(m.timestep) + ".emb"), m, *o.node_ids);
}

SnapshotSeries take_subset(SnapshotSeries&& full, const std::vector<std::size_t>& indices) {
    SnapshotSeries sub;
    sub.node_ids = std::move(full.node_ids);
    sub.directed = full.directed;
    for (std::size_t k : indices) {
        sub.boundaries.push_back(full.boundaries[k]);
        sub.snapshots.push_back(std::move(full.snapshots[k]));
    }
    return sub;
}

std::vector<EmbeddingMatrix> embed_and_align(const SnapshotSeries& sub,
                                             const std::vector<std::size_t>& indices,
                                             const RunConfig& cfg) {
    WalkConfig w = cfg.walk;
    SkipGramConfig s = cfg.sg;
    w.seed = cfg.seed;
    s.seed = cfg.seed;
    if (cfg.deterministic) s.threads = 1;
    std::vector<EmbeddingMatrix> mats =
        stage("embed", [&] { return embed_snapshots(sub, w, s); });
    // label columns with the original snapshot indices for file naming
    for (std::size_t j = 0; j < mats.size(); ++j)
        mats[j].timestep = static_cast<std::uint32_t>(indices[j]);
    if (!cfg.alignment) return mats;
    return stage("align", [&] { return align_series(mats, cfg.force_proper); });
}

Json settings_json(const RunConfig& cfg, std::size_t total_steps,
                   const std::vector<std::size_t>& indices) {
    Json s;
    s["combiner"] = combiner_name(cfg.combiner);
    s["alignment"] = cfg.alignment;
    s["finetune_q"] = cfg.finetune_q;
    s["dimension"] = cfg.sg.d;
    s["seed"] = cfg.seed;
    s["deterministic"] = cfg.deterministic;
    s["timestep_fraction"] = cfg.timestep_fraction;
    Json snaps;
    snaps["total"] = total_steps;
    snaps["used"] = indices.size();
    snaps["indices"] = indices;
    s["snapshots"] = snaps;
    return s;
}

RunReport finish(const RunConfig& cfg, RunOutputs& outputs,
                 const std::map<std::string, double>& metrics,
                 std::vector<std::string>& written) {
    Json jm;
    for (const auto& [k, v] : metrics) jm[k] = v;
    outputs.report["metrics"] = jm;
    Json jc = Json::object();
    for (const auto& [k, v] : cfg.source.entries()) jc[k] = v;
    outputs.report["config"] = jc;
    outputs.config_echo = cfg.source.echo();
    stage("write", [&] { write_outputs(cfg.out_dir, outputs, written); });
    RunReport report;
    report.json = outputs.report.dump(2) + "\n";
    report.metrics = metrics;
    return report;
}

RunReport run_link_task(TemporalGraph& g, const RunConfig& cfg,
                        std::vector<std::string>& written) {
    std::int64_t pivot =
        stage("split", [&] { return cfg.has_pivot ? cfg.pivot : select_pivot(g, cfg.train_fraction); });
    LinkSplit split =
        stage("split", [&] { return split_link_prediction(g, pivot, cfg.seed); });

    // training must only ever see the pre-pivot slice
    TemporalGraph pre;
    pre.directed = g.directed;
    pre.weighted = g.weighted;
    pre.node_ids = g.node_ids;
    pre.node_index = g.node_index;
    for (const TemporalEdge& e : g.edges)
        if (e.timestamp <= pivot) pre.edges.push_back(e);

    SnapshotSeries full = stage("snapshot", [&] { return build_snapshots(pre, cfg.num_steps); });
    std::size_t total_steps = full.steps();
    std::vector<std::size_t> indices = snapshot_subset(total_steps, cfg.timestep_fraction);
    SnapshotSeries sub = take_subset(std::move(full), indices);

    std::vector<EmbeddingMatrix> aligned = embed_and_align(sub, indices, cfg);

    ModelConfig mc;
    mc.d = aligned.front().dim;
    mc.task = Task::link;
    mc.combiner = cfg.combiner;
    mc.directed = cfg.directed;
    mc.finetune_q = cfg.finetune_q;
    mc.seed = cfg.seed;
    TemporalModel model(std::move(aligned), mc);

    auto usable = [&](const std::pair<std::uint32_t, std::uint32_t>& pr) {
        return model.embeddable(pr.first) && model.embeddable(pr.second);
    };
    auto collect = [&](const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs,
                       int label, std::vector<LinkExample>& out, std::size_t& skipped) {
        for (const auto& pr : pairs) {
            if (!usable(pr)) {
                ++skipped;
                continue;
            }
            out.push_back({pr.first, pr.second, label});
        }
    };
    std::vector<LinkExample> train_examples, test_examples;
    std::size_t skipped_train = 0, skipped_test = 0;
    collect(split.train_pos, 1, train_examples, skipped_train);
    collect(split.train_neg, 0, train_examples, skipped_train);
    collect(split.test_pos, 1, test_examples, skipped_test);
    collect(split.test_neg, 0, test_examples, skipped_test);
    if (skipped_train + skipped_test > 0)
        std::cerr << "pipeline: skipped " << skipped_train << " train and " << skipped_test
                  << " test pairs with endpoints absent from every snapshot\n";
    if (train_examples.empty()) throw StageError("train", "no trainable link examples");
    if (test_examples.empty()) throw StageError("evaluate", "no scorable test pairs");

    TrainConfig tc = cfg.train;
    tc.seed = cfg.seed;
    std::vector<double> losses = stage("train", [&] { return model.train_links(train_examples, tc); });

    std::map<std::string, double> metrics = stage("evaluate", [&] {
        auto score = [&](const std::vector<LinkExample>& xs) {
            std::vector<ScoredExample> scored;
            scored.reserve(xs.size());
            for (const LinkExample& x : xs)
                scored.push_back({model.predict_link(x.u, x.v), x.label});
            return auc(scored);
        };
        std::map<std::string, double> out;
        out["auc"] = score(test_examples);
        out["train_auc"] = score(train_examples);
        out["final_loss"] = losses.back();
        return out;
    });

    RunOutputs outputs;
    outputs.report["task"] = "link";
    outputs.report["dataset"] = cfg.edges_path.empty() ? "(in-memory)" : cfg.edges_path;
    outputs.report["pivot"] = pivot;
    outputs.report["settings"] = settings_json(cfg, total_steps, indices);
    Json counts;
    counts["train_pos"] = split.train_pos.size();
    counts["train_neg"] = split.train_neg.size();
    counts["test_pos"] = split.test_pos.size();
    counts["test_neg"] = split.test_neg.size();
    counts["skipped_train"] = skipped_train;
    counts["skipped_test"] = skipped_test;
    outputs.report["counts"] = counts;
    outputs.split_json = link_split_to_json(split, g.node_ids);
    outputs.losses = losses;
    outputs.model = &model;
    outputs.node_ids = &g.node_ids;
    return finish(cfg, outputs, metrics, written);
}

RunReport run_node_task(TemporalGraph& g, const RunConfig& cfg,
                        std::vector<std::string>& written) {
    if (cfg.labels_path.empty()) throw StageError("labels", "no labels path configured");
    LabelSet labels = stage("labels", [&] { return load_labels(cfg.labels_path, g); });
    NodeSplit split = stage("split", [&] {
        return split_node_classification(labels, cfg.label_fraction, cfg.seed);
    });

    SnapshotSeries full = stage("snapshot", [&] { return build_snapshots(g, cfg.num_steps); });
    std::size_t total_steps = full.steps();
    std::vector<std::size_t> indices = snapshot_subset(total_steps, cfg.timestep_fraction);
    SnapshotSeries sub = take_subset(std::move(full), indices);

    std::vector<EmbeddingMatrix> aligned = embed_and_align(sub, indices, cfg);

    ModelConfig mc;
    mc.d = aligned.front().dim;
    mc.task = Task::node_classification;
    mc.combiner = cfg.combiner;
    mc.num_classes = split.num_classes;
    mc.directed = cfg.directed;
    mc.finetune_q = cfg.finetune_q;
    mc.seed = cfg.seed;
    TemporalModel model(std::move(aligned), mc);

    auto collect = [&](const std::vector<std::uint32_t>& nodes, std::vector<NodeExample>& out,
                       std::size_t& skipped) {
        for (std::uint32_t v : nodes) {
            if (!model.embeddable(v)) {
                ++skipped;
                continue;
            }
            out.push_back({v, split.labels.at(v)});
        }
    };
    std::vector<NodeExample> train_examples, test_examples;
    std::size_t skipped_train = 0, skipped_test = 0;
    collect(split.train_nodes, train_examples, skipped_train);
    collect(split.test_nodes, test_examples, skipped_test);
    if (skipped_train + skipped_test > 0)
        std::cerr << "pipeline: skipped " << skipped_train << " train and " << skipped_test
                  << " test nodes absent from every snapshot\n";
    if (train_examples.empty()) throw StageError("train", "no trainable labeled nodes");
    if (test_examples.empty()) throw StageError("evaluate", "no scorable test nodes");

    TrainConfig tc = cfg.train;
    tc.seed = cfg.seed;
    std::vector<double> losses = stage("train", [&] { return model.train_nodes(train_examples, tc); });

    std::map<std::string, double> metrics = stage("evaluate", [&] {
        std::vector<int> predictions, truth;
        std::vector<std::vector<double>> probabilities;
        for (const NodeExample& x : test_examples) {
            std::vector<double> probs = model.predict_node_class(x.node);
            int best = static_cast<int>(std::max_element(probs.begin(), probs.end()) -
                                        probs.begin());
            predictions.push_back(best);
            truth.push_back(static_cast<int>(x.cls));
            probabilities.push_back(std::move(probs));
        }
        int num_classes = static_cast<int>(split.num_classes);
        std::map<std::string, double> out;
        out["micro_f1"] = micro_f1(predictions, truth, num_classes);
        out["macro_f1"] = macro_f1(predictions, truth, num_classes);
        out["macro_auc"] = multiclass_auc(probabilities, truth, num_classes);
        out["final_loss"] = losses.back();
        return out;
    });

    RunOutputs outputs;
    outputs.report["task"] = "node_classification";
    outputs.report["dataset"] = cfg.edges_path.empty() ? "(in-memory)" : cfg.edges_path;
    outputs.report["settings"] = settings_json(cfg, total_steps, indices);
    Json counts;
    counts["train_nodes"] = split.train_nodes.size();
    counts["test_nodes"] = split.test_nodes.size();
    counts["classes"] = split.num_classes;
    counts["skipped_train"] = skipped_train;
    counts["skipped_test"] = skipped_test;
    outputs.report["counts"] = counts;
    outputs.split_json = node_split_to_json(split, g.node_ids);
    outputs.losses = losses;
    outputs.model = &model;
    outputs.node_ids = &g.node_ids;
    return finish(cfg, outputs, metrics, written);
}

}  // namespace

RunConfig run_config_from(const ConfigMap& m) {
    for (const auto& [k, v] : m.entries())
        if (!allowed_keys().count(k))
            throw std::runtime_error("unknown config key '" + k + "'");

    RunConfig c;
    std::string task = m.get_string("task", "link");
    if (task == "link")
        c.task = Task::link;
    else if (task == "node" || task == "node_classification")
        c.task = Task::node_classification;
    else
        throw std::runtime_error("config key 'task': expected link or node_classification, got '" +
                                 task + "'");

    c.edges_path = m.get_string("edges", "");
    c.labels_path = m.get_string("labels", "");
    c.directed = m.get_bool("directed", false);
    c.weighted = m.get_bool("weighted", false);
    c.granularity = m.get_int("granularity", 0);
    if (c.granularity < 0) throw std::runtime_error("config key 'granularity': must be >= 0");
    c.num_steps = checked_u32(m, "steps", 10, 1, 1000000);
    c.train_fraction = checked_fraction(m, "train_fraction", 0.75, false);
    c.label_fraction = checked_fraction(m, "label_fraction", 0.7, false);
    if (m.has("pivot")) {
        c.has_pivot = true;
        c.pivot = m.get_int("pivot", 0);
    }

    std::string combiner = m.get_string("combiner", "lstm");
    if (combiner == "lstm")
        c.combiner = Combiner::lstm;
    else if (combiner == "rnn")
        c.combiner = Combiner::rnn;
    else if (combiner == "last" || combiner == "last_snapshot" || combiner == "static")
        c.combiner = Combiner::last_snapshot;
    else
        throw std::runtime_error(
            "config key 'combiner': expected lstm, rnn or last_snapshot, got '" + combiner + "'");

    c.finetune_q = m.get_bool("finetune_q", true);
    c.alignment = m.get_bool("alignment", true);
    c.force_proper = m.get_bool("force_proper", false);
    c.timestep_fraction = checked_fraction(m, "timestep_fraction", 1.0, true);
    c.out_dir = m.get_string("out", "out");
    std::int64_t seed = m.get_int("seed", 1);
    if (seed < 0) throw std::runtime_error("config key 'seed': must be >= 0");
    c.seed = static_cast<std::uint64_t>(seed);
    c.deterministic = m.get_bool("deterministic", true);

    c.walk.p = m.get_double("walk.p", c.walk.p);
    c.walk.q = m.get_double("walk.q", c.walk.q);
    if (!(c.walk.p > 0.0) || !(c.walk.q > 0.0))
        throw std::runtime_error("config keys 'walk.p'/'walk.q': must be > 0");
    c.walk.r = checked_u32(m, "walk.r", c.walk.r, 1, 100000);
    c.walk.l = checked_u32(m, "walk.l", c.walk.l, 2, 1000000);

    c.sg.d = checked_u32(m, "sg.d", c.sg.d, 1, 100000);
    c.sg.window = checked_u32(m, "sg.window", c.sg.window, 1, 1000000);
    c.sg.negatives = checked_u32(m, "sg.negatives", c.sg.negatives, 1, 1000000);
    c.sg.epochs = checked_u32(m, "sg.epochs", c.sg.epochs, 1, 1000000);
    c.sg.learning_rate = m.get_double("sg.learning_rate", c.sg.learning_rate);
    if (!(c.sg.learning_rate > 0.0))
        throw std::runtime_error("config key 'sg.learning_rate': must be > 0");
    c.sg.threads = checked_u32(m, "sg.threads", c.sg.threads, 1, 1024);

    c.train.epochs = checked_u32(m, "train.epochs", c.train.epochs, 1, 1000000);
    c.train.batch_size = checked_u32(m, "train.batch", c.train.batch_size, 1, 1000000);
    c.train.step_size = m.get_double("train.step_size", c.train.step_size);
    c.train.beta1 = m.get_double("train.beta1", c.train.beta1);
    c.train.beta2 = m.get_double("train.beta2", c.train.beta2);
    c.train.eps = m.get_double("train.eps", c.train.eps);
    if (!(c.train.step_size > 0.0))
        throw std::runtime_error("config key 'train.step_size': must be > 0");

    c.walk.seed = c.sg.seed = c.train.seed = c.seed;
    c.source = m;
    return c;
}

std::vector<std::size_t> snapshot_subset(std::size_t total, double fraction) {
    if (total == 0) throw std::invalid_argument("snapshot subset: empty series");
    if (!(fraction > 0.0) || fraction > 1.0)
        throw std::invalid_argument("snapshot subset: fraction must lie in (0, 1]");
    auto count = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(total)));
    count = std::clamp<std::size_t>(count, 1, total);
    if (count == 1) return {total - 1};
    std::vector<std::size_t> out;
    out.reserve(count);
    double span = static_cast<double>(total - 1) / static_cast<double>(count - 1);
    for (std::size_t j = 0; j < count; ++j)
        out.push_back(static_cast<std::size_t>(std::llround(span * static_cast<double>(j))));
    return out;
}

RunReport run_pipeline(const RunConfig& cfg) {
    if (cfg.edges_path.empty()) throw StageError("ingest", "no edges path configured");
    TemporalGraph g = stage("ingest", [&] {
        return ingest_edge_list(cfg.edges_path, cfg.directed, cfg.weighted);
    });
    return run_pipeline_on_graph(std::move(g), cfg);
}

RunReport run_pipeline_on_graph(TemporalGraph g, const RunConfig& cfg) {
    std::vector<std::string> written;
    try {
        if (cfg.granularity > 0)
            g = stage("collapse", [&] { return collapse_multi_edges(g, cfg.granularity); });
        if (cfg.task == Task::link) return run_link_task(g, cfg, written);
        return run_node_task(g, cfg, written);
    } catch (...) {
        for (const std::string& f : written) {
            std::error_code ec;
            fs::remove(f, ec);
        }
        throw;
    }
}

std::string run_experiment_suite(const std::string& suite_path, const std::string& out_dir) {
    ConfigMap suite = ConfigMap::parse_file(suite_path);

    // group `run.<id>.<key>` entries per run id, preserving sorted id order
    std::map<std::string, std::map<std::string, std::string>> runs;
    for (const auto& [k, v] : suite.entries()) {
        if (k.rfind("run.", 0) != 0)
            throw std::runtime_error(suite_path + ": key '" + k +
                                     "' outside any [run.<id>] section");
        auto dot = k.find('.', 4);
        if (dot == std::string::npos || dot == 4 || dot + 1 == k.size())
            throw std::runtime_error(suite_path + ": malformed run key '" + k + "'");
        runs[k.substr(4, dot - 4)][k.substr(dot + 1)] = v;
    }
    if (runs.empty()) throw std::runtime_error(suite_path + ": no [run.<id>] sections");

    std::string csv = "config,seed,metric,value\n";
    for (const auto& [id, overrides] : runs) {
        ConfigMap base;
        auto cfg_it = overrides.find("config");
        if (cfg_it != overrides.end()) base = ConfigMap::parse_file(cfg_it->second);
        std::vector<std::string> seeds;
        auto seed_it = overrides.find("seeds");
        if (seed_it != overrides.end()) {
            std::istringstream in(seed_it->second);
            std::string tok;
            while (in >> tok) seeds.push_back(tok);
        }
        if (seeds.empty()) seeds.push_back("1");
        for (const auto& [k, v] : overrides)
            if (k != "config" && k != "seeds") base.set(k, v);

        for (const std::string& seed : seeds) {
            ConfigMap per_run = base;
            per_run.set("seed", seed);
            per_run.set("out", (fs::path(out_dir) / id / ("seed" + seed)).string());
            try {
                RunReport report = run_pipeline(run_config_from(per_run));
                for (const auto& [metric, value] : report.metrics)
                    csv += id + "," + seed + "," + metric + "," + format_double(value) + "\n";
            } catch (const std::exception& e) {
                std::cerr << "suite run '" << id << "' seed " << seed << " failed: " << e.what()
                          << '\n';
                csv += id + "," + seed + ",error,1\n";
            }
        }
    }

    fs::create_directories(out_dir);
    std::ofstream out(fs::path(out_dir) / "results.csv");
    if (!out) throw std::runtime_error("cannot write results.csv under " + out_dir);
    out << csv;
    return csv;
}

}  // namespace tgemb
