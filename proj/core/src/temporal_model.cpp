#include "tgemb/temporal_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <tuple>
#include <type_traits>

#include "tgemb/rng.hpp"

namespace tgemb {

namespace {

double sigmoid(double x) {
    if (x > 40.0) return 1.0;
    if (x < -40.0) return 0.0;
    return 1.0 / (1.0 + std::exp(-x));
}

void softmax(const double* logits, double* p, std::size_t n) {
    double mx = logits[0];
    for (std::size_t i = 1; i < n; ++i) mx = std::max(mx, logits[i]);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        p[i] = std::exp(logits[i] - mx);
        sum += p[i];
    }
    for (std::size_t i = 0; i < n; ++i) p[i] /= sum;
}

double clamped_nll(double p) { return -std::log(std::max(p, 1e-15)); }

constexpr char kCkptMagic[8] = {'T', 'G', 'E', 'M', 'B', 'C', 'K', '1'};

}  // namespace

std::unordered_map<std::uint32_t, NodeHistory> build_histories(
    const std::vector<EmbeddingMatrix>& aligned) {
    std::unordered_map<std::uint32_t, NodeHistory> out;
    const auto steps = static_cast<std::uint32_t>(aligned.size());
    if (steps == 0) return out;
    const std::uint32_t d = aligned.front().dim;
    for (std::uint32_t t = 0; t < steps; ++t) {
        const EmbeddingMatrix& m = aligned[t];
        for (std::uint32_t c = 0; c < m.cols(); ++c) {
            auto& h = out[m.nodes[c]];
            if (h.x.empty()) {
                h.x.assign(static_cast<std::size_t>(steps) * d, 0.0);
                h.mask.assign(steps, 0);
                h.steps = steps;
                h.dim = d;
            }
            std::copy_n(m.col(c), d, h.x.data() + static_cast<std::size_t>(t) * d);
            h.mask[t] = 1;
        }
    }
    return out;
}

// Per-example forward cache: one row per present step, in time order.
struct TemporalModel::Trace {
    std::vector<std::uint32_t> steps;
    std::vector<std::int32_t> cols;
    std::vector<double> x, gi, gf, gg, go, c, tc, h;  // n x d each
    std::vector<double> h_final;

    void reset(std::size_t n, std::uint32_t d, bool gates) {
        steps.clear();
        cols.clear();
        x.assign(n * d, 0.0);
        h.assign(n * d, 0.0);
        if (gates) {
            gi.assign(n * d, 0.0);
            gf.assign(n * d, 0.0);
            gg.assign(n * d, 0.0);
            go.assign(n * d, 0.0);
            c.assign(n * d, 0.0);
            tc.assign(n * d, 0.0);
        }
        h_final.assign(d, 0.0);
    }
};

TemporalModel::TemporalModel(std::vector<EmbeddingMatrix> aligned, const ModelConfig& cfg)
    : cfg_(cfg), aligned_(std::move(aligned)) {
    if (aligned_.empty()) throw std::invalid_argument("temporal model: empty embedding series");
    num_steps_ = static_cast<std::uint32_t>(aligned_.size());
    if (cfg_.d == 0) cfg_.d = aligned_.front().dim;
    for (const auto& m : aligned_)
        if (m.dim != cfg_.d)
            throw std::invalid_argument("temporal model: embedding dimension mismatch");
    if (cfg_.task == Task::node_classification && cfg_.num_classes < 2)
        throw std::invalid_argument("temporal model: need at least 2 classes");

    std::uint32_t max_node = 0;
    for (const auto& m : aligned_)
        for (std::uint32_t v : m.nodes) max_node = std::max(max_node, v + 1);
    col_at_step_.assign(max_node, {});
    for (std::uint32_t t = 0; t < num_steps_; ++t) {
        const auto& m = aligned_[t];
        for (std::uint32_t c = 0; c < m.cols(); ++c) {
            auto& slots = col_at_step_[m.nodes[c]];
            if (slots.empty()) slots.assign(num_steps_, -1);
            slots[t] = static_cast<std::int32_t>(c);
        }
    }

    const std::size_t d = cfg_.d;
    const std::size_t dd = d * d;
    switch (cfg_.combiner) {
        case Combiner::lstm: combiner_size_ = 8 * dd + 4 * d; break;
        case Combiner::rnn: combiner_size_ = 2 * dd; break;
        case Combiner::last_snapshot: combiner_size_ = 0; break;
    }
    const std::size_t head_in = cfg_.task == Task::link ? 2 * d : d;
    const std::size_t head_out = cfg_.task == Task::link ? 2 : cfg_.num_classes;
    head_size_ = head_out * head_in + head_out;

    std::size_t total = combiner_size_ + head_size_;
    q_offsets_.assign(num_steps_, 0);
    if (cfg_.finetune_q) {
        for (std::uint32_t t = 0; t < num_steps_; ++t) {
            q_offsets_[t] = total;
            total += aligned_[t].values.size();
        }
    }
    theta_.assign(total, 0.0);

    Rng rng(mix_seed(cfg_.seed, 0x4d4f44454cULL));
    const double wb = 1.0 / std::sqrt(static_cast<double>(d));
    if (cfg_.combiner == Combiner::lstm) {
        for (std::size_t i = 0; i < 8 * dd; ++i)
            theta_[i] = (rng.next_double() * 2.0 - 1.0) * wb;
        // forget-gate bias starts at 1 so early training does not wipe state
        for (std::size_t i = 0; i < d; ++i) theta_[8 * dd + d + i] = 1.0;
    } else if (cfg_.combiner == Combiner::rnn) {
        for (std::size_t i = 0; i < 2 * dd; ++i)
            theta_[i] = (rng.next_double() * 2.0 - 1.0) * wb;
    }
    const double hb = 1.0 / std::sqrt(static_cast<double>(head_in));
    for (std::size_t i = 0; i < head_out * head_in; ++i)
        theta_[combiner_size_ + i] = (rng.next_double() * 2.0 - 1.0) * hb;

    if (cfg_.finetune_q) {
        for (std::uint32_t t = 0; t < num_steps_; ++t) {
            std::copy(aligned_[t].values.begin(), aligned_[t].values.end(),
                      theta_.begin() + static_cast<std::ptrdiff_t>(q_offsets_[t]));
            aligned_[t].values.clear();
            aligned_[t].values.shrink_to_fit();
        }
    }
}

void TemporalModel::set_model_params(const std::vector<double>& params) {
    if (params.size() != model_param_count())
        throw std::invalid_argument("set_model_params: expected " +
                                    std::to_string(model_param_count()) + " values, got " +
                                    std::to_string(params.size()));
    std::copy(params.begin(), params.end(), theta_.begin());
}

const double* TemporalModel::column(std::uint32_t step, std::uint32_t node) const {
    std::int32_t c = col_at_step_[node][step];
    if (cfg_.finetune_q)
        return theta_.data() + q_offsets_[step] + static_cast<std::size_t>(c) * cfg_.d;
    return aligned_[step].col(static_cast<std::uint32_t>(c));
}

bool TemporalModel::embeddable(std::uint32_t node) const {
    return node < col_at_step_.size() && !col_at_step_[node].empty();
}

void TemporalModel::forward_node(std::uint32_t node, Trace& tr) const {
    if (!embeddable(node))
        throw std::invalid_argument("node " + std::to_string(node) +
                                    " is absent from every snapshot and cannot be embedded");
    const std::uint32_t d = cfg_.d;
    const auto& slots = col_at_step_[node];

    std::vector<std::uint32_t> present;
    for (std::uint32_t t = 0; t < num_steps_; ++t)
        if (slots[t] >= 0) present.push_back(t);
    if (cfg_.combiner == Combiner::last_snapshot) present.erase(present.begin(), present.end() - 1);

    tr.reset(present.size(), d, cfg_.combiner == Combiner::lstm);
    tr.steps = present;
    for (std::uint32_t t : present) tr.cols.push_back(slots[t]);
    for (std::size_t s = 0; s < present.size(); ++s)
        std::copy_n(column(present[s], node), d, tr.x.data() + s * d);

    const double* th = theta_.data();
    const std::size_t dd = static_cast<std::size_t>(d) * d;
    switch (cfg_.combiner) {
        case Combiner::last_snapshot:
            std::copy_n(tr.x.data() + (present.size() - 1) * d, d, tr.h_final.data());
            return;
        case Combiner::rnn: {
            std::vector<double> hprev(d, 0.0);
            for (std::size_t s = 0; s < present.size(); ++s) {
                const double* x = tr.x.data() + s * d;
                double* h = tr.h.data() + s * d;
                for (std::uint32_t i = 0; i < d; ++i) {
                    const double* ra = th + static_cast<std::size_t>(i) * d;
                    const double* rb = th + dd + static_cast<std::size_t>(i) * d;
                    double acc = 0.0;
                    for (std::uint32_t j = 0; j < d; ++j) acc += ra[j] * hprev[j] + rb[j] * x[j];
                    h[i] = std::tanh(acc);
                    if (!std::isfinite(h[i]))
                        throw std::runtime_error("non-finite state at step " +
                                                 std::to_string(tr.steps[s]));
                }
                std::copy_n(h, d, hprev.data());
            }
            std::copy(hprev.begin(), hprev.end(), tr.h_final.begin());
            return;
        }
        case Combiner::lstm: break;
    }

    const double* w = th;            // 4 gates of d x d
    const double* u = th + 4 * dd;   // 4 gates of d x d
    const double* b = th + 8 * dd;   // 4 gates of d
    std::vector<double> hprev(d, 0.0), cprev(d, 0.0), pre(4 * static_cast<std::size_t>(d));
    for (std::size_t s = 0; s < present.size(); ++s) {
        const double* x = tr.x.data() + s * d;
        for (std::uint32_t gate = 0; gate < 4; ++gate)
            for (std::uint32_t i = 0; i < d; ++i) {
                const double* wr = w + gate * dd + static_cast<std::size_t>(i) * d;
                const double* ur = u + gate * dd + static_cast<std::size_t>(i) * d;
                double acc = b[gate * d + i];
                for (std::uint32_t j = 0; j < d; ++j) acc += wr[j] * x[j] + ur[j] * hprev[j];
                pre[gate * d + i] = acc;
            }
        double* gi = tr.gi.data() + s * d;
        double* gf = tr.gf.data() + s * d;
        double* gg = tr.gg.data() + s * d;
        double* go = tr.go.data() + s * d;
        double* c = tr.c.data() + s * d;
        double* tc = tr.tc.data() + s * d;
        double* h = tr.h.data() + s * d;
        for (std::uint32_t i = 0; i < d; ++i) {
            gi[i] = sigmoid(pre[i]);
            gf[i] = sigmoid(pre[d + i]);
            gg[i] = std::tanh(pre[2 * d + i]);
            go[i] = sigmoid(pre[3 * d + i]);
            c[i] = gf[i] * cprev[i] + gi[i] * gg[i];
            tc[i] = std::tanh(c[i]);
            h[i] = go[i] * tc[i];
            if (!std::isfinite(h[i]) || !std::isfinite(c[i]))
                throw std::runtime_error("non-finite state at step " +
                                         std::to_string(tr.steps[s]));
        }
        std::copy_n(h, d, hprev.data());
        std::copy_n(c, d, cprev.data());
    }
    std::copy(hprev.begin(), hprev.end(), tr.h_final.begin());
}

void TemporalModel::backward_node(std::uint32_t node, const Trace& tr,
                                  const std::vector<double>& dh_final,
                                  std::vector<double>& grad) const {
    const std::uint32_t d = cfg_.d;
    const std::size_t dd = static_cast<std::size_t>(d) * d;
    const std::size_t n = tr.steps.size();
    const double* th = theta_.data();

    auto scatter_dx = [&](std::size_t s, const double* dx) {
        if (!cfg_.finetune_q) return;
        double* gq = grad.data() + q_offsets_[tr.steps[s]] +
                     static_cast<std::size_t>(tr.cols[s]) * d;
        for (std::uint32_t i = 0; i < d; ++i) gq[i] += dx[i];
    };

    switch (cfg_.combiner) {
        case Combiner::last_snapshot:
            scatter_dx(n - 1, dh_final.data());
            return;
        case Combiner::rnn: {
            std::vector<double> dh = dh_final, da(d), dx(d), dhprev(d);
            for (std::size_t s = n; s-- > 0;) {
                const double* h = tr.h.data() + s * d;
                const double* x = tr.x.data() + s * d;
                const double* hprev = s > 0 ? tr.h.data() + (s - 1) * d : nullptr;
                for (std::uint32_t i = 0; i < d; ++i) da[i] = dh[i] * (1.0 - h[i] * h[i]);
                std::fill(dx.begin(), dx.end(), 0.0);
                std::fill(dhprev.begin(), dhprev.end(), 0.0);
                for (std::uint32_t i = 0; i < d; ++i) {
                    double dai = da[i];
                    if (dai == 0.0) continue;
                    double* ga = grad.data() + static_cast<std::size_t>(i) * d;
                    double* gb = grad.data() + dd + static_cast<std::size_t>(i) * d;
                    const double* ra = th + static_cast<std::size_t>(i) * d;
                    const double* rb = th + dd + static_cast<std::size_t>(i) * d;
                    for (std::uint32_t j = 0; j < d; ++j) {
                        if (hprev) ga[j] += dai * hprev[j];
                        gb[j] += dai * x[j];
                        dhprev[j] += ra[j] * dai;
                        dx[j] += rb[j] * dai;
                    }
                }
                scatter_dx(s, dx.data());
                dh = dhprev;
            }
            return;
        }
        case Combiner::lstm: break;
    }

    const double* w = th;
    const double* u = th + 4 * dd;
    double* gw = grad.data();
    double* gu = grad.data() + 4 * dd;
    double* gb = grad.data() + 8 * dd;

    std::vector<double> dh = dh_final, dc(d, 0.0), da(4 * static_cast<std::size_t>(d));
    std::vector<double> dx(d), dhprev(d);
    for (std::size_t s = n; s-- > 0;) {
        const double* gi = tr.gi.data() + s * d;
        const double* gf = tr.gf.data() + s * d;
        const double* gg = tr.gg.data() + s * d;
        const double* go = tr.go.data() + s * d;
        const double* tc = tr.tc.data() + s * d;
        const double* x = tr.x.data() + s * d;
        const double* hprev = s > 0 ? tr.h.data() + (s - 1) * d : nullptr;
        const double* cprev = s > 0 ? tr.c.data() + (s - 1) * d : nullptr;

        for (std::uint32_t i = 0; i < d; ++i) {
            double dov = dh[i] * tc[i];
            double dci = dc[i] + dh[i] * go[i] * (1.0 - tc[i] * tc[i]);
            double div = dci * gg[i];
            double dgv = dci * gi[i];
            double dfv = dci * (cprev ? cprev[i] : 0.0);
            dc[i] = dci * gf[i];
            da[i] = div * gi[i] * (1.0 - gi[i]);
            da[d + i] = dfv * gf[i] * (1.0 - gf[i]);
            da[2 * d + i] = dgv * (1.0 - gg[i] * gg[i]);
            da[3 * d + i] = dov * go[i] * (1.0 - go[i]);
        }

        std::fill(dx.begin(), dx.end(), 0.0);
        std::fill(dhprev.begin(), dhprev.end(), 0.0);
        for (std::uint32_t gate = 0; gate < 4; ++gate)
            for (std::uint32_t i = 0; i < d; ++i) {
                double dai = da[gate * d + i];
                if (dai == 0.0) continue;
                gb[gate * d + i] += dai;
                double* gwr = gw + gate * dd + static_cast<std::size_t>(i) * d;
                double* gur = gu + gate * dd + static_cast<std::size_t>(i) * d;
                const double* wr = w + gate * dd + static_cast<std::size_t>(i) * d;
                const double* ur = u + gate * dd + static_cast<std::size_t>(i) * d;
                for (std::uint32_t j = 0; j < d; ++j) {
                    gwr[j] += dai * x[j];
                    if (hprev) gur[j] += dai * hprev[j];
                    dx[j] += wr[j] * dai;
                    dhprev[j] += ur[j] * dai;
                }
            }
        scatter_dx(s, dx.data());
        dh = dhprev;
    }
}

std::vector<double> TemporalModel::temporal_embedding(std::uint32_t node) const {
    Trace tr;
    forward_node(node, tr);
    return tr.h_final;
}

std::vector<double> TemporalModel::lstm_forward(const NodeHistory& hist) const {
    if (cfg_.combiner != Combiner::lstm)
        throw std::logic_error("lstm_forward requires the lstm combiner");
    if (hist.dim != cfg_.d) throw std::invalid_argument("lstm_forward: dimension mismatch");
    bool any = false;
    for (char m : hist.mask) any |= (m != 0);
    if (!any) throw std::invalid_argument("lstm_forward: history has no unmasked step");

    const std::uint32_t d = cfg_.d;
    const std::size_t dd = static_cast<std::size_t>(d) * d;
    const double* w = theta_.data();
    const double* u = theta_.data() + 4 * dd;
    const double* b = theta_.data() + 8 * dd;
    std::vector<double> h(d, 0.0), c(d, 0.0), pre(4 * static_cast<std::size_t>(d));
    for (std::uint32_t t = 0; t < hist.steps; ++t) {
        if (!hist.mask[t]) continue;  // carry state through missing steps
        const double* x = hist.x.data() + static_cast<std::size_t>(t) * d;
        for (std::uint32_t gate = 0; gate < 4; ++gate)
            for (std::uint32_t i = 0; i < d; ++i) {
                const double* wr = w + gate * dd + static_cast<std::size_t>(i) * d;
                const double* ur = u + gate * dd + static_cast<std::size_t>(i) * d;
                double acc = b[gate * d + i];
                for (std::uint32_t j = 0; j < d; ++j) acc += wr[j] * x[j] + ur[j] * h[j];
                pre[gate * d + i] = acc;
            }
        for (std::uint32_t i = 0; i < d; ++i) {
            double gi = sigmoid(pre[i]);
            double gf = sigmoid(pre[d + i]);
            double gg = std::tanh(pre[2 * d + i]);
            double go = sigmoid(pre[3 * d + i]);
            c[i] = gf * c[i] + gi * gg;
            h[i] = go * std::tanh(c[i]);
            if (!std::isfinite(h[i]))
                throw std::runtime_error("non-finite state at step " + std::to_string(t));
        }
    }
    return h;
}

std::vector<double> TemporalModel::predict_node_class(std::uint32_t node) const {
    if (cfg_.task != Task::node_classification)
        throw std::logic_error("predict_node_class requires a classification model");
    std::vector<double> h = temporal_embedding(node);
    const std::uint32_t L = cfg_.num_classes;
    const double* hw = theta_.data() + combiner_size_;
    const double* hb = hw + static_cast<std::size_t>(L) * cfg_.d;
    std::vector<double> logits(L), p(L);
    for (std::uint32_t k = 0; k < L; ++k) {
        const double* row = hw + static_cast<std::size_t>(k) * cfg_.d;
        double acc = hb[k];
        for (std::uint32_t j = 0; j < cfg_.d; ++j) acc += row[j] * h[j];
        logits[k] = acc;
    }
    softmax(logits.data(), p.data(), L);
    return p;
}

double TemporalModel::predict_link(std::uint32_t u, std::uint32_t v) const {
    if (cfg_.task != Task::link) throw std::logic_error("predict_link requires a link model");
    if (!cfg_.directed && u > v) std::swap(u, v);
    std::vector<double> hu = temporal_embedding(u);
    std::vector<double> hv = temporal_embedding(v);
    const std::uint32_t d = cfg_.d;
    const double* hw = theta_.data() + combiner_size_;
    const double* hb = hw + 4 * static_cast<std::size_t>(d);
    double logits[2], p[2];
    for (int k = 0; k < 2; ++k) {
        const double* row = hw + static_cast<std::size_t>(k) * 2 * d;
        double acc = hb[k];
        for (std::uint32_t j = 0; j < d; ++j) acc += row[j] * hu[j] + row[d + j] * hv[j];
        logits[k] = acc;
    }
    softmax(logits, p, 2);
    return p[1];
}

double TemporalModel::loss_link_prediction(const std::vector<LinkExample>& batch) const {
    if (batch.empty()) throw std::invalid_argument("empty batch");
    double sum = 0.0;
    for (const auto& ex : batch) {
        if (ex.label != 0 && ex.label != 1)
            throw std::invalid_argument("link labels must be 0 or 1");
        double p = predict_link(ex.u, ex.v);
        sum += clamped_nll(ex.label == 1 ? p : 1.0 - p);
    }
    return sum / static_cast<double>(batch.size());
}

double TemporalModel::loss_node_classification(const std::vector<NodeExample>& batch) const {
    if (batch.empty()) throw std::invalid_argument("empty batch");
    double sum = 0.0;
    for (const auto& ex : batch) {
        if (ex.cls >= cfg_.num_classes) throw std::invalid_argument("class index out of range");
        sum += clamped_nll(predict_node_class(ex.node)[ex.cls]);
    }
    return sum / static_cast<double>(batch.size());
}

double TemporalModel::link_gradients(const std::vector<LinkExample>& batch,
                                     std::vector<double>& grad) const {
    if (batch.empty()) throw std::invalid_argument("empty batch");
    std::vector<LinkExample> ordered = batch;
    std::sort(ordered.begin(), ordered.end(), [](const LinkExample& a, const LinkExample& b) {
        return std::tie(a.u, a.v, a.label) < std::tie(b.u, b.v, b.label);
    });
    grad.assign(theta_.size(), 0.0);

    const std::uint32_t d = cfg_.d;
    const double* hw = theta_.data() + combiner_size_;
    const double* hb = hw + 4 * static_cast<std::size_t>(d);
    double* ghw = grad.data() + combiner_size_;
    double* ghb = ghw + 4 * static_cast<std::size_t>(d);

    Trace tru, trv;
    std::vector<double> dhu(d), dhv(d);
    double loss = 0.0;
    for (const auto& ex : ordered) {
        if (ex.label != 0 && ex.label != 1)
            throw std::invalid_argument("link labels must be 0 or 1");
        std::uint32_t a = ex.u, b = ex.v;
        if (!cfg_.directed && a > b) std::swap(a, b);
        forward_node(a, tru);
        forward_node(b, trv);
        const double* hu = tru.h_final.data();
        const double* hv = trv.h_final.data();
        double logits[2], p[2];
        for (int k = 0; k < 2; ++k) {
            const double* row = hw + static_cast<std::size_t>(k) * 2 * d;
            double acc = hb[k];
            for (std::uint32_t j = 0; j < d; ++j) acc += row[j] * hu[j] + row[d + j] * hv[j];
            logits[k] = acc;
        }
        softmax(logits, p, 2);
        loss += clamped_nll(p[ex.label]);

        double dlog[2] = {p[0], p[1]};
        dlog[ex.label] -= 1.0;
        std::fill(dhu.begin(), dhu.end(), 0.0);
        std::fill(dhv.begin(), dhv.end(), 0.0);
        for (int k = 0; k < 2; ++k) {
            double* grow = ghw + static_cast<std::size_t>(k) * 2 * d;
            const double* row = hw + static_cast<std::size_t>(k) * 2 * d;
            ghb[k] += dlog[k];
            for (std::uint32_t j = 0; j < d; ++j) {
                grow[j] += dlog[k] * hu[j];
                grow[d + j] += dlog[k] * hv[j];
                dhu[j] += row[j] * dlog[k];
                dhv[j] += row[d + j] * dlog[k];
            }
        }
        backward_node(a, tru, dhu, grad);
        backward_node(b, trv, dhv, grad);
    }
    const double inv = 1.0 / static_cast<double>(ordered.size());
    for (double& g : grad) {
        g *= inv;
        if (!std::isfinite(g)) throw std::runtime_error("non-finite gradient");
    }
    return loss * inv;
}

double TemporalModel::node_gradients(const std::vector<NodeExample>& batch,
                                     std::vector<double>& grad) const {
    if (batch.empty()) throw std::invalid_argument("empty batch");
    std::vector<NodeExample> ordered = batch;
    std::sort(ordered.begin(), ordered.end(), [](const NodeExample& a, const NodeExample& b) {
        return std::tie(a.node, a.cls) < std::tie(b.node, b.cls);
    });
    grad.assign(theta_.size(), 0.0);

    const std::uint32_t d = cfg_.d;
    const std::uint32_t L = cfg_.num_classes;
    const double* hw = theta_.data() + combiner_size_;
    const double* hb = hw + static_cast<std::size_t>(L) * d;
    double* ghw = grad.data() + combiner_size_;
    double* ghb = ghw + static_cast<std::size_t>(L) * d;

    Trace tr;
    std::vector<double> logits(L), p(L), dh(d);
    double loss = 0.0;
    for (const auto& ex : ordered) {
        if (ex.cls >= L) throw std::invalid_argument("class index out of range");
        forward_node(ex.node, tr);
        const double* h = tr.h_final.data();
        for (std::uint32_t k = 0; k < L; ++k) {
            const double* row = hw + static_cast<std::size_t>(k) * d;
            double acc = hb[k];
            for (std::uint32_t j = 0; j < d; ++j) acc += row[j] * h[j];
            logits[k] = acc;
        }
        softmax(logits.data(), p.data(), L);
        loss += clamped_nll(p[ex.cls]);

        std::fill(dh.begin(), dh.end(), 0.0);
        for (std::uint32_t k = 0; k < L; ++k) {
            double dlog = p[k] - (k == ex.cls ? 1.0 : 0.0);
            ghb[k] += dlog;
            double* grow = ghw + static_cast<std::size_t>(k) * d;
            const double* row = hw + static_cast<std::size_t>(k) * d;
            for (std::uint32_t j = 0; j < d; ++j) {
                grow[j] += dlog * h[j];
                dh[j] += row[j] * dlog;
            }
        }
        backward_node(ex.node, tr, dh, grad);
    }
    const double inv = 1.0 / static_cast<double>(ordered.size());
    for (double& g : grad) {
        g *= inv;
        if (!std::isfinite(g)) throw std::runtime_error("non-finite gradient");
    }
    return loss * inv;
}

template <typename Batch>
std::vector<double> TemporalModel::run_training(const Batch& data, const TrainConfig& tc) {
    if (data.empty()) throw std::invalid_argument("training set is empty");
    if (tc.epochs < 1 || tc.batch_size < 1) throw std::invalid_argument("train config out of bounds");

    std::vector<double> m(theta_.size(), 0.0), v(theta_.size(), 0.0), grad;
    std::vector<double> trace;
    trace.reserve(tc.epochs);
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);
    std::uint64_t step = 0;

    for (std::uint32_t epoch = 0; epoch < tc.epochs; ++epoch) {
        Rng rng(mix_seed(tc.seed, epoch, 0x545241494eULL));
        rng.shuffle(order);
        double loss_sum = 0.0;
        for (std::size_t begin = 0; begin < order.size(); begin += tc.batch_size) {
            std::size_t end = std::min(order.size(), begin + tc.batch_size);
            Batch batch;
            batch.reserve(end - begin);
            for (std::size_t i = begin; i < end; ++i) batch.push_back(data[order[i]]);

            double loss;
            if constexpr (std::is_same_v<typename Batch::value_type, LinkExample>)
                loss = link_gradients(batch, grad);
            else
                loss = node_gradients(batch, grad);
            loss_sum += loss * static_cast<double>(batch.size());

            ++step;
            const double c1 = 1.0 - std::pow(tc.beta1, static_cast<double>(step));
            const double c2 = 1.0 - std::pow(tc.beta2, static_cast<double>(step));
            for (std::size_t i = 0; i < theta_.size(); ++i) {
                m[i] = tc.beta1 * m[i] + (1.0 - tc.beta1) * grad[i];
                v[i] = tc.beta2 * v[i] + (1.0 - tc.beta2) * grad[i] * grad[i];
                theta_[i] -= tc.step_size * (m[i] / c1) / (std::sqrt(v[i] / c2) + tc.eps);
            }
        }
        double epoch_loss = loss_sum / static_cast<double>(data.size());
        if (!std::isfinite(epoch_loss))
            throw std::runtime_error("training diverged at epoch " + std::to_string(epoch + 1));
        trace.push_back(epoch_loss);
    }
    return trace;
}

std::vector<double> TemporalModel::train_links(const std::vector<LinkExample>& data,
                                               const TrainConfig& tc) {
    if (cfg_.task != Task::link) throw std::logic_error("train_links requires a link model");
    return run_training(data, tc);
}

std::vector<double> TemporalModel::train_nodes(const std::vector<NodeExample>& data,
                                               const TrainConfig& tc) {
    if (cfg_.task != Task::node_classification)
        throw std::logic_error("train_nodes requires a classification model");
    return run_training(data, tc);
}

std::vector<EmbeddingMatrix> TemporalModel::aligned_embeddings() const {
    std::vector<EmbeddingMatrix> out = aligned_;
    if (cfg_.finetune_q) {
        for (std::uint32_t t = 0; t < num_steps_; ++t) {
            auto& m = out[t];
            m.values.assign(theta_.begin() + static_cast<std::ptrdiff_t>(q_offsets_[t]),
                            theta_.begin() + static_cast<std::ptrdiff_t>(
                                                 q_offsets_[t] + static_cast<std::size_t>(m.cols()) * m.dim));
        }
    }
    return out;
}

void write_checkpoint(const std::string& path, const TemporalModel& model,
                      const std::string& config_echo) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out.write(kCkptMagic, sizeof kCkptMagic);
    const ModelConfig& cfg = model.config();
    auto put_u32 = [&](std::uint32_t x) { out.write(reinterpret_cast<const char*>(&x), 4); };
    put_u32(cfg.d);
    put_u32(model.steps());
    put_u32(cfg.num_classes);
    std::uint8_t flags[4] = {static_cast<std::uint8_t>(cfg.task),
                             static_cast<std::uint8_t>(cfg.combiner),
                             static_cast<std::uint8_t>(cfg.directed ? 1 : 0),
                             static_cast<std::uint8_t>(cfg.finetune_q ? 1 : 0)};
    out.write(reinterpret_cast<const char*>(flags), 4);
    std::uint64_t seed = cfg.seed;
    out.write(reinterpret_cast<const char*>(&seed), 8);
    std::uint64_t count = model.model_param_count();
    out.write(reinterpret_cast<const char*>(&count), 8);
    out.write(reinterpret_cast<const char*>(model.params().data()),
              static_cast<std::streamsize>(count * sizeof(double)));
    put_u32(static_cast<std::uint32_t>(config_echo.size()));
    out.write(config_echo.data(), static_cast<std::streamsize>(config_echo.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

Checkpoint read_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kCkptMagic, 8) != 0)
        throw std::runtime_error("not a checkpoint file: " + path);
    auto get_u32 = [&] {
        std::uint32_t x = 0;
        in.read(reinterpret_cast<char*>(&x), 4);
        return x;
    };
    Checkpoint ck;
    ck.cfg.d = get_u32();
    ck.steps = get_u32();
    ck.cfg.num_classes = get_u32();
    std::uint8_t flags[4];
    in.read(reinterpret_cast<char*>(flags), 4);
    ck.cfg.task = static_cast<Task>(flags[0]);
    ck.cfg.combiner = static_cast<Combiner>(flags[1]);
    ck.cfg.directed = flags[2] != 0;
    ck.cfg.finetune_q = flags[3] != 0;
    in.read(reinterpret_cast<char*>(&ck.cfg.seed), 8);
    std::uint64_t count = 0;
    in.read(reinterpret_cast<char*>(&count), 8);
    if (!in) throw std::runtime_error("truncated checkpoint: " + path);
    ck.params.resize(count);
    in.read(reinterpret_cast<char*>(ck.params.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    std::uint32_t echo_len = get_u32();
    if (!in) throw std::runtime_error("truncated checkpoint: " + path);
    ck.config_echo.resize(echo_len);
    in.read(ck.config_echo.data(), echo_len);
    if (!in) throw std::runtime_error("truncated checkpoint: " + path);
    return ck;
}

void write_loss_csv(const std::string& path, const std::vector<double>& losses) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write loss trace: " + path);
    out << "epoch,loss\n";
    char buf[64];
    for (std::size_t i = 0; i < losses.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", losses[i]);
        out << (i + 1) << ',' << buf << '\n';
    }
}

}  // namespace tgemb
