#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "tgemb/embedding.hpp"

namespace tgemb {

enum class Task : std::uint8_t { link = 0, node_classification = 1 };

// lstm is the production combiner; rnn is the bare recursion
// h_t = tanh(A h_{t-1} + B x_t); last_snapshot skips recurrence entirely and
// uses the newest available embedding (the static baseline architecture).
enum class Combiner : std::uint8_t { lstm = 0, rnn = 1, last_snapshot = 2 };

struct ModelConfig {
    std::uint32_t d = 0;
    Task task = Task::link;
    Combiner combiner = Combiner::lstm;
    std::uint32_t num_classes = 2;  // node classification only
    bool directed = false;
    bool finetune_q = true;  // embedding columns receive gradients
    std::uint64_t seed = 1;
};

struct TrainConfig {
    std::uint32_t epochs = 20;
    std::uint32_t batch_size = 256;
    double step_size = 1e-3;  // Adam
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::uint64_t seed = 1;
};

// T x d history rows in time order; masked-off rows are zero.
struct NodeHistory {
    std::vector<double> x;
    std::vector<char> mask;
    std::uint32_t steps = 0;
    std::uint32_t dim = 0;
};

std::unordered_map<std::uint32_t, NodeHistory> build_histories(
    const std::vector<EmbeddingMatrix>& aligned);

struct LinkExample {
    std::uint32_t u = 0, v = 0;
    int label = 0;  // 1 = edge forms
};

struct NodeExample {
    std::uint32_t node = 0;
    std::uint32_t cls = 0;
};

// The temporal combiner plus task head over an aligned embedding series.
// All trainable parameters live in one flat vector:
//   [combiner | head | embedding columns when finetune_q]
// with the combiner laid out as, for lstm, W then U then b, each as four
// d-blocks in gate order (input, forget, candidate, output), matrices
// row-major; for rnn, A then B. The head is W row-major then b. Embeddings
// append step by step in column order. Tests rely on this layout.
class TemporalModel {
public:
    TemporalModel(std::vector<EmbeddingMatrix> aligned, const ModelConfig& cfg);

    const ModelConfig& config() const { return cfg_; }
    std::uint32_t steps() const { return num_steps_; }
    std::uint32_t dim() const { return cfg_.d; }

    std::vector<double>& params() { return theta_; }
    const std::vector<double>& params() const { return theta_; }
    std::size_t combiner_param_count() const { return combiner_size_; }
    std::size_t model_param_count() const { return combiner_size_ + head_size_; }

    // Overwrites the combiner + head region, e.g. from a checkpoint.
    void set_model_params(const std::vector<double>& params);

    bool embeddable(std::uint32_t node) const;

    // f_T(v): the combiner state after the node's last present step.
    std::vector<double> temporal_embedding(std::uint32_t node) const;

    // Runs the current lstm parameters over an explicit history (tests feed
    // hand-built ones). Requires the lstm combiner.
    std::vector<double> lstm_forward(const NodeHistory& h) const;

    std::vector<double> predict_node_class(std::uint32_t node) const;
    double predict_link(std::uint32_t u, std::uint32_t v) const;

    double loss_link_prediction(const std::vector<LinkExample>& batch) const;
    double loss_node_classification(const std::vector<NodeExample>& batch) const;

    // Mean-loss gradients over the batch, written into grad (resized to
    // params().size()); returns the batch mean loss. Accumulation order is
    // canonicalized so any batch permutation produces bit-identical
    // gradients.
    double link_gradients(const std::vector<LinkExample>& batch, std::vector<double>& grad) const;
    double node_gradients(const std::vector<NodeExample>& batch, std::vector<double>& grad) const;

    // Mini-batch Adam; returns per-epoch mean loss. Throws when the loss
    // turns non-finite, naming the epoch.
    std::vector<double> train_links(const std::vector<LinkExample>& data, const TrainConfig& tc);
    std::vector<double> train_nodes(const std::vector<NodeExample>& data, const TrainConfig& tc);

    // Current embedding series, including fine-tuned values.
    std::vector<EmbeddingMatrix> aligned_embeddings() const;

private:
    friend void write_checkpoint(const std::string&, const TemporalModel&, const std::string&);

    const double* column(std::uint32_t step, std::uint32_t node) const;
    std::size_t q_value_offset(std::uint32_t step) const;

    struct Trace;  // per-example forward cache
    void forward_node(std::uint32_t node, Trace& tr) const;
    void backward_node(std::uint32_t node, const Trace& tr, const std::vector<double>& dh,
                       std::vector<double>& grad) const;
    template <typename Batch>
    std::vector<double> run_training(const Batch& data, const TrainConfig& tc);

    ModelConfig cfg_;
    std::uint32_t num_steps_ = 0;
    std::vector<EmbeddingMatrix> aligned_;           // values empty when finetune_q
    std::vector<std::vector<std::int32_t>> col_at_step_;  // node -> per-step column or -1
    std::vector<std::size_t> q_offsets_;             // theta offset of each step's values
    std::size_t combiner_size_ = 0, head_size_ = 0;
    std::vector<double> theta_;
};

struct Checkpoint {
    ModelConfig cfg;
    std::uint32_t steps = 0;
    std::vector<double> params;  // combiner + head region
    std::string config_echo;
};

// Binary container {d, T, L, task, combiner, flags, parameter tensors,
// config echo}. Embedding matrices travel separately in their own files.
void write_checkpoint(const std::string& path, const TemporalModel& model,
                      const std::string& config_echo);
Checkpoint read_checkpoint(const std::string& path);

// Loss trace as `epoch,loss` CSV.
void write_loss_csv(const std::string& path, const std::vector<double>& losses);

}  // namespace tgemb
